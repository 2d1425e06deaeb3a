#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "loconc/distribution.hpp"
#include "loconc/random.hpp"

namespace loconc {

// Coefficients a together with the summand laws defining L(sum a_k X_k).
// A single law means i.i.d. summands.
class SumSpec {
 public:
  SumSpec(std::vector<double> coeffs, Distribution law)
      : coeffs_(std::move(coeffs)), laws_{std::move(law)} {
    validate();
  }
  SumSpec(std::vector<double> coeffs, std::vector<Distribution> laws)
      : coeffs_(std::move(coeffs)), laws_(std::move(laws)) {
    require(laws_.size() == coeffs_.size() || laws_.size() == 1,
            "SumSpec: need one law or one law per coefficient");
    validate();
  }

  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  bool iid() const { return laws_.size() == 1; }
  const Distribution& law(std::size_t k) const { return iid() ? laws_.front() : laws_[k]; }

  double norm() const {
    double s = 0.0;
    for (double a : coeffs_) s += a * a;
    return std::sqrt(s);
  }
  double inf_norm() const {
    double m = 0.0;
    for (double a : coeffs_) m = std::max(m, std::abs(a));
    return m;
  }

  // Same laws, coefficients multiplied by s (V_{a,tau} is scaled(1/tau)).
  SumSpec scaled(double s) const {
    std::vector<double> c = coeffs_;
    for (double& a : c) a *= s;
    return SumSpec(std::move(c), laws_);
  }

 private:
  void validate() const {
    require(!coeffs_.empty(), "SumSpec: need at least one coefficient");
    for (double a : coeffs_) require(std::isfinite(a), "SumSpec: non-finite coefficient");
  }

  std::vector<double> coeffs_;
  std::vector<Distribution> laws_;
};

inline bool is_symmetric(const DiscreteLaw& G) {
  const auto x = G.atoms();
  const auto p = G.probs();
  const std::size_t m = x.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!atoms_coincide(x[i], -x[m - 1 - i])) return false;
    if (std::abs(p[i] - p[m - 1 - i]) > 1e-12) return false;
  }
  return true;
}

// Law of X1 - X2 for independent copies. Built from |x_i - x_j| and mirrored,
// so the result is symmetric bit-for-bit.
inline DiscreteLaw symmetrize(const DiscreteLaw& F) {
  const auto x = F.atoms();
  const auto p = F.probs();
  std::vector<std::pair<double, double>> half;
  half.reserve(x.size() * (x.size() + 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    half.emplace_back(0.0, p[i] * p[i]);
    for (std::size_t j = i + 1; j < x.size(); ++j) half.emplace_back(x[j] - x[i], 2.0 * p[i] * p[j]);
  }
  const DiscreteLaw magnitudes = DiscreteLaw::from_pairs(std::move(half));
  std::vector<std::pair<double, double>> full;
  full.reserve(2 * magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double d = magnitudes.atoms()[i];
    const double w = magnitudes.probs()[i];
    if (d == 0.0 || atoms_coincide(d, 0.0)) {
      full.emplace_back(0.0, w);
    } else {
      full.emplace_back(-d, 0.5 * w);
      full.emplace_back(d, 0.5 * w);
    }
  }
  return DiscreteLaw::from_pairs(std::move(full));
}

inline DiscreteLaw symmetrize(const Distribution& F) { return symmetrize(require_discrete(F, "symmetrize")); }

// M(tau) = E min(X~^2 / tau^2, 1) for a symmetric law G of X~.
inline double m_tau(const DiscreteLaw& G, double tau) {
  require(tau > 0.0 && std::isfinite(tau), "m_tau: tau must be positive");
  require(is_symmetric(G), "m_tau: law is not symmetric");
  double m = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const double r = G.atoms()[i] / tau;
    m += G.probs()[i] * std::min(r * r, 1.0);
  }
  return std::min(m, 1.0);
}

inline constexpr int kMaxDyadicShell = 60;

// Mixture weights over the dyadic shells A_0 = {|x| > 1},
// A_j = {2^-j < |x| <= 2^(1-j)}; mass below 2^-60 counts toward q.
struct DyadicProfile {
  double q = 0.0;
  std::vector<double> p;       // p[j], j = 0..J
  std::vector<double> beta_j;  // 4^-j p[j]
  double beta = 0.0;
  std::vector<double> mu;  // beta_j / beta; empty when beta == 0
  int J = 0;
};

// Index j of the shell containing |x| > 0, or -1 when below 2^-60.
inline int dyadic_shell(double x) {
  int e = 0;
  const double m = std::frexp(std::abs(x), &e);  // |x| = m 2^e, m in [1/2, 1)
  const int j = (m == 0.5) ? 2 - e : 1 - e;
  if (j <= 0) return 0;
  return j > kMaxDyadicShell ? -1 : j;
}

inline DyadicProfile dyadic_profile(const DiscreteLaw& G, int J = 0) {
  require(is_symmetric(G), "dyadic_profile: law is not symmetric");
  require(J >= 0, "dyadic_profile: J must be nonnegative");
  DyadicProfile prof;
  prof.J = std::min(J, kMaxDyadicShell);
  prof.p.assign(prof.J + 1, 0.0);
  for (std::size_t i = 0; i < G.size(); ++i) {
    const double x = G.atoms()[i];
    const int j = (x == 0.0) ? -1 : dyadic_shell(x);
    if (j < 0) {
      prof.q += G.probs()[i];
      continue;
    }
    if (j > prof.J) {
      prof.J = j;
      prof.p.resize(j + 1, 0.0);
    }
    prof.p[j] += G.probs()[i];
  }
  prof.beta_j.resize(prof.p.size());
  for (std::size_t j = 0; j < prof.p.size(); ++j) {
    prof.beta_j[j] = std::ldexp(prof.p[j], -2 * static_cast<int>(j));
    prof.beta += prof.beta_j[j];
  }
  if (prof.beta > 0.0) {
    prof.mu.resize(prof.beta_j.size());
    for (std::size_t j = 0; j < prof.mu.size(); ++j) prof.mu[j] = prof.beta_j[j] / prof.beta;
  }
  return prof;
}

inline std::vector<double> sample(const Distribution& F, std::size_t count, std::uint64_t seed,
                                  unsigned threads = 1) {
  require(count >= 1, "sample: count must be >= 1");
  const VariateSource draw(F);
  std::vector<double> out(count);
  for_each_chunk(count, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto eng = chunk_engine(seed, chunk);
    for (std::size_t i = begin; i < end; ++i) out[i] = draw(eng);
  });
  return out;
}

// One draw of sum a_k X_k per output slot, chunk-seeded like sample().
inline std::vector<double> sample_sum(const SumSpec& spec, std::size_t count, std::uint64_t seed,
                                      unsigned threads = 1) {
  require(count >= 1, "sample_sum: count must be >= 1");
  std::vector<VariateSource> draws;
  draws.reserve(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) draws.emplace_back(spec.law(k));
  std::vector<double> out(count, 0.0);
  for_each_chunk(count, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto eng = chunk_engine(seed, chunk, 1);
    for (std::size_t i = begin; i < end; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < spec.size(); ++k) s += spec.coeffs()[k] * draws[k](eng);
      out[i] = s;
    }
  });
  return out;
}

}  // namespace loconc
