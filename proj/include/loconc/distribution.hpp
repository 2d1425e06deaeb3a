#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "loconc/errors.hpp"

namespace loconc {

// Atoms closer than this (relative to max(1, |x|)) are one atom.
inline constexpr double kAtomMergeTolerance = 1e-12;
inline constexpr double kProbabilitySumTolerance = 1e-9;

inline bool atoms_coincide(double x, double y) {
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  return std::abs(x - y) <= kAtomMergeTolerance * scale;
}

// A finite-discrete law: strictly increasing atoms with positive
// probabilities summing to one. Only constructible through make_discrete
// (validated) or from_pairs (internal; merges and normalizes).
class DiscreteLaw {
 public:
  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return atoms_.size(); }

  double max_abs_atom() const {
    return std::max(std::abs(atoms_.front()), std::abs(atoms_.back()));
  }

  double mean_abs() const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) s += probs_[i] * std::abs(atoms_[i]);
    return s;
  }

  bool is_point_mass() const { return atoms_.size() == 1; }

  // Sorts (value, probability) pairs, merges coinciding atoms, drops zero
  // masses and renormalizes. Caller guarantees nonnegative masses with a
  // positive total.
  static DiscreteLaw from_pairs(std::vector<std::pair<double, double>> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return from_sorted_pairs(pairs);
  }

  // As from_pairs, for input already sorted by value.
  static DiscreteLaw from_sorted_pairs(const std::vector<std::pair<double, double>>& pairs) {
    DiscreteLaw law;
    law.atoms_.reserve(pairs.size());
    law.probs_.reserve(pairs.size());
    double group_start = 0.0;
    double total = 0.0;
    for (const auto& [x, p] : pairs) {
      if (p <= 0.0) continue;
      total += p;
      if (!law.atoms_.empty() && atoms_coincide(group_start, x)) {
        law.probs_.back() += p;
        continue;
      }
      group_start = x;
      law.atoms_.push_back(x);
      law.probs_.push_back(p);
    }
    for (double& p : law.probs_) p /= total;
    return law;
  }

  friend bool operator==(const DiscreteLaw&, const DiscreteLaw&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> probs_;
};

inline DiscreteLaw make_discrete(std::span<const double> atoms, std::span<const double> probs) {
  require(atoms.size() == probs.size(), "make_discrete: atoms and probs differ in length");
  require(!atoms.empty(), "make_discrete: empty law");
  double total = 0.0;
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    require(std::isfinite(atoms[i]), "make_discrete: non-finite atom");
    require(probs[i] >= 0.0, "make_discrete: negative probability");
    total += probs[i];
    pairs.emplace_back(atoms[i], probs[i]);
  }
  require(std::abs(total - 1.0) <= kProbabilitySumTolerance,
          "make_discrete: probabilities do not sum to 1");
  return DiscreteLaw::from_pairs(std::move(pairs));
}

inline DiscreteLaw make_discrete(std::initializer_list<double> atoms,
                                 std::initializer_list<double> probs) {
  return make_discrete(std::span<const double>(atoms.begin(), atoms.size()),
                       std::span<const double>(probs.begin(), probs.size()));
}

struct Rademacher {
  friend bool operator==(const Rademacher&, const Rademacher&) = default;
};
struct Bernoulli {
  double p = 0.5;
  friend bool operator==(const Bernoulli&, const Bernoulli&) = default;
};
struct UniformLaw {
  double a = -1.0;
  double b = 1.0;
  friend bool operator==(const UniformLaw&, const UniformLaw&) = default;
};
struct PointMass {
  double x = 0.0;
  friend bool operator==(const PointMass&, const PointMass&) = default;
};

// Generator-backed law without a closed-form characteristic function.
// Supported ids: "normal" with params {mean, sd}.
struct SamplerLaw {
  std::string id;
  std::vector<double> params;
  friend bool operator==(const SamplerLaw&, const SamplerLaw&) = default;
};

using Distribution =
    std::variant<DiscreteLaw, Rademacher, Bernoulli, UniformLaw, PointMass, SamplerLaw>;

inline Distribution make_bernoulli(double p) {
  require(p >= 0.0 && p <= 1.0, "bernoulli: p outside [0,1]");
  return Bernoulli{p};
}

inline Distribution make_uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform: need a < b");
  return UniformLaw{a, b};
}

inline Distribution make_sampler(std::string id, std::vector<double> params) {
  if (id == "normal") {
    require(params.size() == 2 && params[1] > 0.0, "normal sampler: params {mean, sd>0}");
  } else {
    throw InputError("unknown sampler id: " + id);
  }
  return SamplerLaw{std::move(id), std::move(params)};
}

inline bool is_sampler(const Distribution& F) { return std::holds_alternative<SamplerLaw>(F); }

// Exact finite-discrete form, when the law has one.
inline std::optional<DiscreteLaw> to_discrete(const Distribution& F) {
  struct Visitor {
    std::optional<DiscreteLaw> operator()(const DiscreteLaw& d) const { return d; }
    std::optional<DiscreteLaw> operator()(const Rademacher&) const {
      return make_discrete({-1.0, 1.0}, {0.5, 0.5});
    }
    std::optional<DiscreteLaw> operator()(const Bernoulli& b) const {
      return make_discrete({0.0, 1.0}, {1.0 - b.p, b.p});
    }
    std::optional<DiscreteLaw> operator()(const PointMass& m) const {
      return make_discrete({m.x}, {1.0});
    }
    std::optional<DiscreteLaw> operator()(const UniformLaw&) const { return std::nullopt; }
    std::optional<DiscreteLaw> operator()(const SamplerLaw&) const { return std::nullopt; }
  };
  return std::visit(Visitor{}, F);
}

inline DiscreteLaw require_discrete(const Distribution& F, const char* who) {
  auto d = to_discrete(F);
  if (!d) throw UnsupportedVariant(std::string(who) + ": law has no exact finite-discrete form");
  return *std::move(d);
}

// Largest |x| in the support; nullopt for unbounded laws.
inline std::optional<double> support_radius(const Distribution& F) {
  if (const auto* u = std::get_if<UniformLaw>(&F)) return std::max(std::abs(u->a), std::abs(u->b));
  if (is_sampler(F)) return std::nullopt;
  return require_discrete(F, "support_radius").max_abs_atom();
}

// Pushforward by x -> s*x.
inline DiscreteLaw scale(const DiscreteLaw& F, double s) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) pairs.emplace_back(s * F.atoms()[i], F.probs()[i]);
  return DiscreteLaw::from_pairs(std::move(pairs));
}

// Pushforward by x -> x + b.
inline DiscreteLaw shift(const DiscreteLaw& F, double b) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) pairs.emplace_back(F.atoms()[i] + b, F.probs()[i]);
  return DiscreteLaw::from_pairs(std::move(pairs));
}

}  // namespace loconc
