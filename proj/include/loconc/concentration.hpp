#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loconc/dist_core.hpp"

namespace loconc {

enum class EstimateMethod { exact, monte_carlo };

inline const char* to_string(EstimateMethod m) {
  return m == EstimateMethod::exact ? "exact" : "mc";
}

// Q(F, lambda) with its provenance. Exact values carry zero sample count
// and zero half-width.
struct ConcentrationEstimate {
  double lambda = 0.0;
  double value = 0.0;
  EstimateMethod method = EstimateMethod::exact;
  std::size_t sample_count = 0;
  double ci_half_width = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline bool within_window(double left, double x, double lambda) {
  const double slack = kAtomMergeTolerance * std::max({1.0, std::abs(left), std::abs(x)});
  return x - left <= lambda + slack;
}

// Largest total weight of points falling in a closed window of width lambda,
// with the window's left end on a point. `points` is sorted. Window masses
// are prefix-sum differences, so a wider window never reports less mass.
template <class Weight>
double max_window_mass(std::span<const double> points, double lambda, Weight weight) {
  std::vector<double> prefix(points.size() + 1, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) prefix[i + 1] = prefix[i] + weight(i);
  double best = 0.0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < points.size(); ++lo) {
    hi = std::max(hi, lo);
    while (hi < points.size() && within_window(points[lo], points[hi], lambda)) ++hi;
    best = std::max(best, prefix[hi] - prefix[lo]);
  }
  return best;
}

}  // namespace detail

// sup_x F{[x, x + lambda]} for a finite-discrete law.
inline ConcentrationEstimate q_exact(const DiscreteLaw& F, double lambda) {
  require(lambda >= 0.0 && std::isfinite(lambda), "q_exact: lambda must be >= 0");
  const auto probs = F.probs();
  const double v = detail::max_window_mass(F.atoms(), lambda, [&](std::size_t i) { return probs[i]; });
  return {lambda, std::clamp(v, 0.0, 1.0), EstimateMethod::exact, 0, 0.0, 0};
}

inline ConcentrationEstimate q_exact(const Distribution& F, double lambda) {
  return q_exact(require_discrete(F, "q_exact"), lambda);
}

// Two-sided uniform CDF deviation bound at confidence 1 - delta, doubled
// because a window has two endpoints.
inline double window_ci_half_width(std::size_t count, double delta) {
  return 2.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(count)));
}

// Empirical sliding-window estimate of Q(L(sum a_k X_k), lambda). Biased
// upward at small counts; consistent as count grows.
inline ConcentrationEstimate q_monte_carlo(const SumSpec& spec, double lambda, std::size_t count,
                                           std::uint64_t seed, double delta,
                                           unsigned threads = default_threads()) {
  require(count >= 1000, "q_monte_carlo: count must be >= 1000");
  require(delta > 0.0 && delta < 1.0, "q_monte_carlo: delta must lie in (0,1)");
  require(lambda >= 0.0 && std::isfinite(lambda), "q_monte_carlo: lambda must be >= 0");
  if (lambda == 0.0) {
    for (std::size_t k = 0; k < spec.size(); ++k)
      require(spec.coeffs()[k] == 0.0 || to_discrete(spec.law(k)).has_value(),
              "q_monte_carlo: lambda = 0 with a continuous summand");
  }
  std::vector<double> xs = sample_sum(spec, count, seed, threads);
  std::sort(xs.begin(), xs.end());
  const double hits = detail::max_window_mass(xs, lambda, [](std::size_t) { return 1.0; });
  return {lambda, hits / static_cast<double>(count), EstimateMethod::monte_carlo, count,
          window_ci_half_width(count, delta), seed};
}

// 1 + floor(mu / lambda): Q(F, mu) <= factor * Q(F, lambda).
inline long long regularity_factor(double mu, double lambda) {
  require(mu > 0.0 && lambda > 0.0, "regularity_factor: arguments must be positive");
  return 1 + static_cast<long long>(std::floor(mu / lambda));
}

inline constexpr std::size_t kDefaultAtomCap = 10'000'000;

// Exact law of sum a_k X_k by iterated convolution. Each step's pair count
// (current atoms times next atoms) must stay within atom_cap.
inline DiscreteLaw exact_convolution(const SumSpec& spec, std::size_t atom_cap = kDefaultAtomCap) {
  std::vector<DiscreteLaw> terms;
  terms.reserve(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const DiscreteLaw base = require_discrete(spec.law(k), "exact_convolution");
    terms.push_back(scale(base, spec.coeffs()[k]));
  }
  DiscreteLaw acc = terms.front();
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const DiscreteLaw& next = terms[k];
    if (acc.size() > atom_cap / next.size())
      throw AtomCapExceeded("exact_convolution: " + std::to_string(acc.size()) + " x " +
                            std::to_string(next.size()) + " atoms exceeds cap " +
                            std::to_string(atom_cap));
    // acc + y is sorted for each atom y of next; merge the sorted blocks.
    pairs.clear();
    pairs.reserve(acc.size() * next.size());
    std::vector<std::size_t> bounds{0};
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double y = next.atoms()[j];
      const double py = next.probs()[j];
      for (std::size_t i = 0; i < acc.size(); ++i)
        pairs.emplace_back(acc.atoms()[i] + y, acc.probs()[i] * py);
      bounds.push_back(pairs.size());
    }
    const auto by_value = [](const auto& l, const auto& r) { return l.first < r.first; };
    while (bounds.size() > 2) {
      std::vector<std::size_t> merged{0};
      for (std::size_t b = 0; b + 2 < bounds.size(); b += 2) {
        std::inplace_merge(pairs.begin() + bounds[b], pairs.begin() + bounds[b + 1],
                           pairs.begin() + bounds[b + 2], by_value);
        merged.push_back(bounds[b + 2]);
      }
      if (bounds.size() % 2 == 0) merged.push_back(bounds.back());
      bounds = std::move(merged);
    }
    acc = DiscreteLaw::from_sorted_pairs(pairs);
  }
  return acc;
}

}  // namespace loconc
