#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loconc/concentration.hpp"
#include "loconc/errors.hpp"
#include "loconc/extended_real.hpp"

// Right-hand sides of the concentration inequalities with every unspecified
// absolute constant made explicit. A vacuous bound (no information, e.g.
// p = 0 or M = 0) is the typed infinite ExtendedReal.

namespace loconc {

struct ConstantSet {
  double C_front = 1.0;  // algebraic term multiplier
  double C_exp = 1.0;    // exponential term multiplier
  double c_exp = 1.0;    // exponential rate
  int p_exponent = 1;    // power of p in the fs exponential

  void validate() const {
    require(C_front > 0.0 && C_exp > 0.0 && c_exp > 0.0, "ConstantSet: constants must be positive");
    require(p_exponent == 1 || p_exponent == 2, "ConstantSet: p_exponent must be 1 or 2");
  }
  friend bool operator==(const ConstantSet&, const ConstantSet&) = default;
};

struct BoundRhs {
  ExtendedReal value = ExtendedReal::infinite();
  double algebraic = std::numeric_limits<double>::infinity();
  double exponential = 0.0;

  static BoundRhs vacuous() { return {}; }
  static BoundRhs of(double algebraic, double exponential) {
    return {ExtendedReal(algebraic + exponential), algebraic, exponential};
  }
};

namespace detail {

inline void check_lambda_family(double lambda, std::span<const double> lambda_k, std::size_t n_other) {
  require(lambda > 0.0, "bound: lambda must be positive");
  require(!lambda_k.empty() && lambda_k.size() == n_other, "bound: lambda_k and companion list differ");
  for (double l : lambda_k) require(l > 0.0 && l <= lambda, "bound: need 0 < lambda_k <= lambda");
}

inline ExtendedReal inverse_sqrt_sum(double C, double lambda, std::span<const double> lambda_k,
                                     std::span<const double> weight) {
  double s = 0.0;
  for (std::size_t k = 0; k < lambda_k.size(); ++k) s += lambda_k[k] * lambda_k[k] * weight[k];
  if (!(s > 0.0)) return ExtendedReal::infinite();
  return ExtendedReal(C * lambda / std::sqrt(s));
}

}  // namespace detail

// Kolmogorov-Rogozin: C lambda (sum lambda_k^2 (1 - Q(W_k, lambda_k)))^{-1/2}.
inline ExtendedReal kr_bound(double lambda, std::span<const double> lambda_k, std::span<const double> q_k,
                             double C) {
  detail::check_lambda_family(lambda, lambda_k, q_k.size());
  require(C > 0.0, "kr_bound: C must be positive");
  std::vector<double> w(q_k.size());
  for (std::size_t k = 0; k < q_k.size(); ++k) {
    require(q_k[k] >= 0.0 && q_k[k] <= 1.0, "kr_bound: q_k outside [0,1]");
    w[k] = 1.0 - q_k[k];
  }
  return detail::inverse_sqrt_sum(C, lambda, lambda_k, w);
}

// Esseen: C lambda (sum lambda_k^2 M_k(lambda_k))^{-1/2}.
inline ExtendedReal esseen_prop_bound(double lambda, std::span<const double> lambda_k,
                                      std::span<const double> m_k, double C) {
  detail::check_lambda_family(lambda, lambda_k, m_k.size());
  require(C > 0.0, "esseen_prop_bound: C must be positive");
  for (double m : m_k) require(m >= 0.0 && m <= 1.0, "esseen_prop_bound: M_k outside [0,1]");
  return detail::inverse_sqrt_sum(C, lambda, lambda_k, m_k);
}

// Bound on Q(F_a, 1/D) through p = 1 - Q(F, 2):
// C_front / (||a|| D sqrt p) + C_exp exp(-c_exp p^{p_exponent} alpha^2).
inline BoundRhs fs_bound(double a_norm, double D, double alpha, double p, const ConstantSet& k) {
  k.validate();
  require(a_norm > 0.0 && D > 0.0 && alpha >= 0.0, "fs_bound: need a_norm, D > 0 and alpha >= 0");
  require(p >= 0.0 && p <= 1.0, "fs_bound: p outside [0,1]");
  if (p == 0.0) return BoundRhs::vacuous();
  const double rate = k.c_exp * (k.p_exponent == 2 ? p * p : p);
  return BoundRhs::of(k.C_front / (a_norm * D * std::sqrt(p)), k.C_exp * std::exp(-rate * alpha * alpha));
}

// Gamma-weighted form: C_front / (gamma D ||a|| sqrt p) + C_exp exp(-2 p alpha^2).
inline BoundRhs rv_bound(double a_norm, double D, double gamma, double alpha, double p, const ConstantSet& k) {
  k.validate();
  require(gamma > 0.0 && gamma < 1.0, "rv_bound: gamma must lie in (0,1)");
  require(a_norm > 0.0 && D > 0.0 && alpha >= 0.0, "rv_bound: need a_norm, D > 0 and alpha >= 0");
  require(p >= 0.0 && p <= 1.0, "rv_bound: p outside [0,1]");
  if (p == 0.0) return BoundRhs::vacuous();
  return BoundRhs::of(k.C_front / (gamma * D * a_norm * std::sqrt(p)),
                      k.C_exp * std::exp(-2.0 * p * alpha * alpha));
}

// C_front / (||a|| sqrt M(1)) + C_exp exp(-c_exp alpha^2 M(1)).
inline BoundRhs thm1_bound(double a_norm, double alpha, double M1, const ConstantSet& k) {
  k.validate();
  require(a_norm > 0.0 && alpha >= 0.0, "thm1_bound: need a_norm > 0 and alpha >= 0");
  require(M1 >= 0.0 && M1 <= 1.0, "thm1_bound: M(1) outside [0,1]");
  if (M1 == 0.0) return BoundRhs::vacuous();
  return BoundRhs::of(k.C_front / (a_norm * std::sqrt(M1)), k.C_exp * std::exp(-k.c_exp * alpha * alpha * M1));
}

// As thm1_bound with gamma dividing the algebraic term.
inline BoundRhs thm2_bound(double a_norm, double gamma, double alpha, double M1, const ConstantSet& k) {
  require(gamma > 0.0 && gamma < 1.0, "thm2_bound: gamma must lie in (0,1)");
  BoundRhs r = thm1_bound(a_norm, alpha, M1, k);
  if (r.value.is_infinite()) return r;
  return BoundRhs::of(r.algebraic / gamma, r.exponential);
}

struct CorollaryInputs {
  double a_norm = 1.0;
  std::optional<double> a_inf;  // enables the small-D forms when given
  double D = 1.0;
  double tau = 1.0;
  double alpha = 0.0;
  std::optional<double> gamma;  // set: the gamma-weighted variant
  double M_tau = 0.0;
};

struct CorollaryBound {
  BoundRhs rhs;
  double lambda = 0.0;  // the bound applies to Q(F_a, tau / D)
};

// C_front / (||a|| D gamma sqrt M(tau)) + C_exp exp(-c_exp alpha^2 M(tau)) at
// lambda = tau / D. When ||a||_inf is known and D <= 1/(2||a||_inf) the
// arithmetic restriction is void and the algebraic term alone is the bound.
inline CorollaryBound corollary_bound(const CorollaryInputs& in, const ConstantSet& k) {
  k.validate();
  require(in.a_norm > 0.0 && in.D > 0.0 && in.tau > 0.0 && in.alpha >= 0.0,
          "corollary_bound: need a_norm, D, tau > 0 and alpha >= 0");
  require(in.M_tau >= 0.0 && in.M_tau <= 1.0, "corollary_bound: M(tau) outside [0,1]");
  if (in.gamma) require(*in.gamma > 0.0 && *in.gamma < 1.0, "corollary_bound: gamma must lie in (0,1)");
  CorollaryBound out;
  out.lambda = in.tau / in.D;
  if (in.M_tau == 0.0) return out;
  const double g = in.gamma.value_or(1.0);
  const double algebraic = k.C_front / (in.a_norm * in.D * g * std::sqrt(in.M_tau));
  const bool unconditional = in.a_inf && in.D * 2.0 * *in.a_inf <= 1.0 + 1e-12;
  const double exponential = unconditional ? 0.0 : k.C_exp * std::exp(-k.c_exp * in.alpha * in.alpha * in.M_tau);
  out.rhs = BoundRhs::of(algebraic, exponential);
  return out;
}

// One inequality instance: measured left side against an evaluated right side.
struct BoundReport {
  std::string inequality;
  ConcentrationEstimate lhs;
  BoundRhs rhs;
  // inputs echo; NaN where the inequality does not use the quantity
  double a_norm = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double D = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  double M = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  ConstantSet constants;

  bool vacuous() const { return rhs.value.is_infinite(); }
  // A vacuous bound is never violated.
  bool satisfied() const { return vacuous() || lhs.value <= rhs.value.value(); }
  double ratio() const {
    if (vacuous()) return 0.0;
    const double r = rhs.value.value();
    return r > 0.0 ? lhs.value / r : std::numeric_limits<double>::infinity();
  }
};

}  // namespace loconc
