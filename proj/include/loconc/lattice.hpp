#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "loconc/errors.hpp"
#include "loconc/extended_real.hpp"

// Arithmetic structure of a coefficient vector: distance of the dilation
// t*a to the integer lattice, its certified infimum over a t-interval, the
// admissibility conditions built on it, and the essential least common
// denominator.
//
// All searches rely on Lipschitz continuity in t: t -> dist(ta, Z^n) has
// constant ||a||, and dist(ta, Z^n) - min(gamma t ||a||, alpha) has constant
// ||a|| (1 + gamma).

namespace loconc {

inline double euclidean_norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

// dist(ta, Z^n); the nearest lattice point separates by coordinate.
// std::nearbyint rounds half to even under the default rounding mode.
inline double lattice_dist(std::span<const double> a, double t) {
  double s = 0.0;
  for (double x : a) {
    const double y = t * x;
    const double r = y - std::nearbyint(y);
    s += r * r;
  }
  return std::sqrt(s);
}

// Left end of the regime where lattice_dist(a, t) = |t| ||a|| exactly.
inline double identity_regime_end(std::span<const double> a) {
  const double m = max_abs(a);
  require(m > 0.0, "coefficient vector is zero");
  return 1.0 / (2.0 * m);
}

struct LipschitzMinimum {
  double lower = 0.0;   // certified: min f >= lower
  double upper = 0.0;   // attained: f(argmin) = upper
  double argmin = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kMaxLipschitzEvaluations = 20'000'000;

// Best-first branch and bound for min f on [lo, hi] given a Lipschitz
// constant. Stops once upper - lower <= tol.
template <class F>
LipschitzMinimum lipschitz_minimize(F&& f, double lo, double hi, double lipschitz, double tol,
                                    std::size_t max_evaluations = kMaxLipschitzEvaluations) {
  require(lo <= hi, "lipschitz_minimize: empty interval");
  require(tol > 0.0, "lipschitz_minimize: tol must be positive");
  LipschitzMinimum out;
  const double flo = f(lo);
  const double fhi = f(hi);
  out.evaluations = 2;
  out.upper = std::min(flo, fhi);
  out.argmin = flo <= fhi ? lo : hi;
  if (lo == hi || lipschitz == 0.0) {
    out.lower = out.upper;
    return out;
  }
  struct Segment {
    double lower, l, fl, r, fr;
    bool operator>(const Segment& o) const { return lower > o.lower; }
  };
  const auto bound = [lipschitz](double l, double fl, double r, double fr) {
    return 0.5 * (fl + fr) - 0.5 * lipschitz * (r - l);
  };
  std::priority_queue<Segment, std::vector<Segment>, std::greater<>> heap;
  heap.push({bound(lo, flo, hi, fhi), lo, flo, hi, fhi});
  while (!heap.empty()) {
    const Segment s = heap.top();
    if (out.upper - s.lower <= tol) {
      out.lower = s.lower;
      return out;
    }
    heap.pop();
    const double m = 0.5 * (s.l + s.r);
    if (m <= s.l || m >= s.r) continue;  // below double resolution; f(l), f(r) already seen
    const double fm = f(m);
    if (++out.evaluations > max_evaluations)
      throw std::runtime_error("lipschitz_minimize: evaluation budget exhausted");
    if (fm < out.upper) {
      out.upper = fm;
      out.argmin = m;
    }
    const double bl = bound(s.l, s.fl, m, fm);
    const double br = bound(m, fm, s.r, s.fr);
    if (bl < out.upper) heap.push({bl, s.l, s.fl, m, fm});
    if (br < out.upper) heap.push({br, m, fm, s.r, s.fr});
  }
  out.lower = out.upper;
  return out;
}

// Certified infimum of lattice_dist over [t_lo, t_hi], the largest alpha
// admissible there.
struct IntervalInfimum {
  double alpha = 0.0;    // certified lower bound, inf in [alpha, alpha + tol]
  double witness = 0.0;  // attained value lattice_dist(a, witness_t)
  double witness_t = 0.0;
  double lipschitz = 0.0;
};

inline IntervalInfimum alpha_over_interval_detail(std::span<const double> a, double t_lo, double t_hi,
                                                  double tol) {
  require(t_lo > 0.0 && t_lo <= t_hi, "alpha_over_interval: need 0 < t_lo <= t_hi");
  require(tol > 0.0, "alpha_over_interval: tol must be positive");
  const double L = euclidean_norm(a);
  require(L > 0.0, "alpha_over_interval: coefficient vector is zero");
  const auto res = lipschitz_minimize([&](double t) { return lattice_dist(a, t); }, t_lo, t_hi, L, tol);
  return {std::max(0.0, res.lower), res.upper, res.argmin, L};
}

inline double alpha_over_interval(std::span<const double> a, double t_lo, double t_hi, double tol) {
  return alpha_over_interval_detail(a, t_lo, t_hi, tol).alpha;
}

// Outcome of a certified condition check. holds == false comes with a
// witness violating the condition by more than tol; borderline marks a
// "true" that could not be certified within tol.
struct ConditionCheck {
  bool holds = true;
  bool borderline = false;
  double certified_min = 0.0;
  double witness_value = 0.0;
  double witness_t = 0.0;
};

// ||ta - m|| >= alpha for all m and t in [1/(2||a||_inf), D].
inline ConditionCheck check_condition_3b(std::span<const double> a, double D, double alpha, double tol) {
  const double t0 = identity_regime_end(a);
  require(D >= t0 * (1.0 - 1e-12), "check_condition_3b: D below 1/(2||a||_inf)");
  const auto inf = alpha_over_interval_detail(a, t0, std::max(D, t0), tol);
  ConditionCheck c;
  c.certified_min = inf.alpha;
  c.witness_value = inf.witness;
  c.witness_t = inf.witness_t;
  if (inf.witness < alpha - tol) {
    c.holds = false;
  } else if (inf.alpha < alpha) {
    c.borderline = true;
  }
  return c;
}

// f(t) = dist(ta, Z^n) - min(gamma t ||a||, alpha).
inline double rv_margin(std::span<const double> a, double a_norm, double gamma, double alpha, double t) {
  return lattice_dist(a, t) - std::min(gamma * t * a_norm, alpha);
}

// ||ta - m|| >= min(gamma t ||a||, alpha) for all m and t in [0, D]. On
// [0, 1/(2||a||_inf)] it holds by lattice_dist = t||a||; only the rest is
// searched.
inline ConditionCheck check_condition_4d(std::span<const double> a, double D, double gamma, double alpha,
                                         double tol) {
  require(D > 0.0, "check_condition_4d: D must be positive");
  require(gamma > 0.0 && gamma < 1.0, "check_condition_4d: gamma must lie in (0,1)");
  require(alpha > 0.0, "check_condition_4d: alpha must be positive");
  require(tol > 0.0, "check_condition_4d: tol must be positive");
  const double t0 = identity_regime_end(a);
  ConditionCheck c;
  if (D <= t0) {
    c.certified_min = 0.0;
    return c;
  }
  const double norm = euclidean_norm(a);
  const auto res = lipschitz_minimize([&](double t) { return rv_margin(a, norm, gamma, alpha, t); }, t0, D,
                                      norm * (1.0 + gamma), tol);
  c.certified_min = res.lower;
  c.witness_value = res.upper;
  c.witness_t = res.argmin;
  if (res.upper < -tol) {
    c.holds = false;
  } else if (res.lower < 0.0) {
    c.borderline = true;
  }
  return c;
}

inline double default_lcd_horizon(std::span<const double> a, double alpha) {
  return 1e3 * max_abs(a) / alpha;
}

// D_{alpha,gamma}(a) = inf{t > 0 : dist(ta, Z^n) <= min(gamma t ||a||, alpha)},
// searched on (0, t_max]. The margin f is positive up to 1/(2||a||_inf);
// from there Lipschitz steps t += f(t)/L cannot pass a root. Once steps fall
// below tol/4, a probe tol/2 ahead either brackets a root (refined by
// bisection) or the window is crossed.
inline ExtendedReal essential_lcd(std::span<const double> a, double gamma, double alpha, double t_max,
                                  double tol) {
  require(gamma > 0.0 && gamma < 1.0, "essential_lcd: gamma must lie in (0,1)");
  require(alpha > 0.0, "essential_lcd: alpha must be positive");
  require(t_max > 0.0, "essential_lcd: t_max must be positive");
  require(tol > 0.0, "essential_lcd: tol must be positive");
  const double norm = euclidean_norm(a);
  const double t0 = identity_regime_end(a);
  const double L = norm * (1.0 + gamma);
  const auto f = [&](double t) { return rv_margin(a, norm, gamma, alpha, t); };

  double t = t0;
  std::size_t iterations = 0;
  while (t <= t_max) {
    if (++iterations > kMaxLipschitzEvaluations)
      throw std::runtime_error("essential_lcd: iteration budget exhausted");
    const double v = f(t);
    if (v <= 0.0) return ExtendedReal(t);
    const double step = v / L;
    if (step >= 0.25 * tol) {
      t += step;
      continue;
    }
    const double probe = std::min(t + 0.5 * tol, t_max);
    if (probe <= t) break;
    if (f(probe) <= 0.0) {
      double lo = t;
      double hi = probe;
      while (hi - lo > 0.125 * tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) <= 0.0 ? hi : lo) = mid;
      }
      return ExtendedReal(hi);
    }
    t = probe;
    if (t >= t_max) break;
  }
  return ExtendedReal::infinite();
}

inline ExtendedReal essential_lcd(std::span<const double> a, double gamma, double alpha, double tol) {
  return essential_lcd(a, gamma, alpha, default_lcd_horizon(a, alpha), tol);
}

// Everything the bounds need about the arithmetic structure of a.
struct ArithmeticProfile {
  double alpha_inf = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  ExtendedReal lcd = ExtendedReal::infinite();
  double gamma = 0.0;
  double alpha = 0.0;
  double lipschitz = 0.0;
  double bracket_width = 0.0;
};

inline ArithmeticProfile arithmetic_profile(std::span<const double> a, double t_hi, double gamma,
                                            double alpha, double t_max, double tol) {
  ArithmeticProfile prof;
  prof.t_lo = identity_regime_end(a);
  prof.t_hi = std::max(t_hi, prof.t_lo);
  const auto inf = alpha_over_interval_detail(a, prof.t_lo, prof.t_hi, tol);
  prof.alpha_inf = inf.alpha;
  prof.lipschitz = inf.lipschitz;
  prof.bracket_width = inf.witness - inf.alpha;
  prof.gamma = gamma;
  prof.alpha = alpha;
  prof.lcd = essential_lcd(a, gamma, alpha, t_max, tol);
  return prof;
}

}  // namespace loconc
