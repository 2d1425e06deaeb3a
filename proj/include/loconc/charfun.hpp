#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "loconc/dist_core.hpp"
#include "loconc/lattice.hpp"
#include "loconc/quadrature.hpp"

namespace loconc {

using Complex = std::complex<double>;

// Characteristic function E exp(itX). The modulus is clamped to 1 so that
// rounding never produces |F^(t)| > 1.
inline Complex char_fn(const Distribution& F, double t) {
  struct Visitor {
    double t;
    Complex operator()(const DiscreteLaw& d) const {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double arg = t * d.atoms()[i];
        re += d.probs()[i] * std::cos(arg);
        im += d.probs()[i] * std::sin(arg);
      }
      return {re, im};
    }
    Complex operator()(const Rademacher&) const { return {std::cos(t), 0.0}; }
    Complex operator()(const Bernoulli& b) const {
      return {1.0 - b.p + b.p * std::cos(t), b.p * std::sin(t)};
    }
    Complex operator()(const UniformLaw& u) const {
      const double half = 0.5 * t * (u.b - u.a);
      const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
      return std::polar(1.0, 0.5 * t * (u.a + u.b)) * sinc;
    }
    Complex operator()(const PointMass& m) const { return std::polar(1.0, t * m.x); }
    Complex operator()(const SamplerLaw&) const {
      throw UnsupportedVariant("char_fn: sampler-backed law has no characteristic function");
    }
  };
  Complex z = std::visit(Visitor{t}, F);
  const double r = std::abs(z);
  if (r > 1.0) z /= r;
  return z;
}

// Characteristic function of sum a_k X_k: product of F_k^(a_k t).
inline Complex sum_char_fn(const SumSpec& spec, double t) {
  Complex z{1.0, 0.0};
  for (std::size_t k = 0; k < spec.size(); ++k) z *= char_fn(spec.law(k), spec.coeffs()[k] * t);
  const double r = std::abs(z);
  if (r > 1.0) z /= r;
  return z;
}

// Widest quadrature panel: pi / (sum |a_k| * max|atom_k|), enough to resolve
// every oscillation of the product of characteristic functions.
inline double esseen_panel_cap(const SumSpec& spec) {
  double rate = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto radius = support_radius(spec.law(k));
    if (!radius) throw UnsupportedVariant("esseen: unbounded summand law");
    rate += std::abs(spec.coeffs()[k]) * *radius;
  }
  return rate > 0.0 ? std::numbers::pi / rate : std::numeric_limits<double>::infinity();
}

namespace detail {

template <class Integrand>
double esseen_integral(const SumSpec& spec, double lambda, const QuadratureSettings& qs, Integrand g) {
  require(lambda > 0.0 && std::isfinite(lambda), "esseen: lambda must be positive");
  QuadratureSettings scaled = qs;
  scaled.abs_tolerance = qs.abs_tolerance / lambda;
  const double I = integrate_adaptive([&](double t) { return g(sum_char_fn(spec, t)); }, 0.0, 1.0 / lambda,
                                      scaled, esseen_panel_cap(spec));
  return lambda * I;
}

}  // namespace detail

// lambda * int_0^{1/lambda} |F_a^(t)| dt: the upper Esseen functional.
inline double esseen_upper(const SumSpec& spec, double lambda, const QuadratureSettings& qs = {}) {
  return detail::esseen_integral(spec, lambda, qs, [](Complex z) { return std::abs(z); });
}

// lambda * int_0^{1/lambda} |F_a^(t)|^2 dt: the lower Esseen functional.
inline double esseen_lower(const SumSpec& spec, double lambda, const QuadratureSettings& qs = {}) {
  return detail::esseen_integral(spec, lambda, qs, [](Complex z) { return std::norm(z); });
}

inline constexpr double kNonnegativityTolerance = 1e-12;

// lambda * int_0^{1/lambda} F_a^(t) dt for a real, nonnegative characteristic
// function. The hypothesis is checked on a grid first.
inline double esseen_symmetric(const SumSpec& spec, double lambda, const QuadratureSettings& qs = {}) {
  require(lambda > 0.0 && std::isfinite(lambda), "esseen_symmetric: lambda must be positive");
  const double T = 1.0 / lambda;
  const double cap = esseen_panel_cap(spec);
  const double panels = std::isfinite(cap) ? std::ceil(T / cap) : 1.0;
  const auto points = static_cast<std::size_t>(std::min(1e6, std::max(1000.0, 16.0 * panels)));
  for (std::size_t i = 0; i <= points; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(points);
    const Complex z = sum_char_fn(spec, t);
    if (std::abs(z.imag()) > kNonnegativityTolerance || z.real() < -kNonnegativityTolerance)
      throw HypothesisViolation("esseen_symmetric: characteristic function not real and nonnegative at t=" +
                                std::to_string(t));
  }
  return detail::esseen_integral(spec, lambda, qs, [](Complex z) { return z.real(); });
}

// Characteristic function of the auxiliary infinitely divisible law H_{z,gamma}:
// exp(-gamma/2 * sum_k (1 - cos(2 a_k z t))).
inline double h_char(std::span<const double> a, double z, double gamma, double t) {
  require(gamma > 0.0, "h_char: gamma must be positive");
  double s = 0.0;
  for (double ak : a) {
    const double half = ak * z * t;  // 1 - cos(2x) = 2 sin^2(x)
    const double sn = std::sin(half);
    s += 2.0 * sn * sn;
  }
  return std::exp(-0.5 * gamma * s);
}

struct Bound6Check {
  double lhs = 0.0;  // |F^(t)|
  double rhs = 0.0;  // exp(-(1 - |F^(t)|^2) / 2)
  bool holds = true;
};

inline Bound6Check check_bound_6(const Distribution& F, double t) {
  const double x = std::min(1.0, std::abs(char_fn(F, t)));
  const double rhs = std::exp(-0.5 * std::fma(-x, x, 1.0));
  return {x, rhs, x <= rhs};
}

enum class EnvelopeRegime { small_t, lattice, outside };

struct Bound7Check {
  double h = 1.0;         // H^_{pi,1}(t)
  double envelope = 1.0;  // exp(-c ||a||^2 t^2) or exp(-c dist(ta, Z^n)^2)
  double exponent_base = 0.0;  // ||a||^2 t^2 or dist^2
  EnvelopeRegime regime = EnvelopeRegime::outside;
  bool holds = true;
};

// Compares H^_{pi,1}(t) with the Gaussian envelope for |t| <= 1/(2||a||_inf)
// and with the lattice envelope for 1/(2||a||_inf) <= |t| <= 1.
inline Bound7Check check_bounds_7(std::span<const double> a, double t, double c_probe) {
  require(c_probe > 0.0, "check_bounds_7: c_probe must be positive");
  Bound7Check c;
  c.h = h_char(a, std::numbers::pi, 1.0, t);
  const double at = std::abs(t);
  const double t0 = identity_regime_end(a);
  if (at <= t0) {
    const double norm = euclidean_norm(a);
    c.regime = EnvelopeRegime::small_t;
    c.exponent_base = norm * norm * t * t;
  } else if (at <= 1.0) {
    const double d = lattice_dist(a, t);
    c.regime = EnvelopeRegime::lattice;
    c.exponent_base = d * d;
  } else {
    return c;
  }
  c.envelope = std::exp(-c_probe * c.exponent_base);
  c.holds = c.h <= c.envelope;
  return c;
}

// Largest c for which every check_bounds_7 comparison on the grid holds.
inline double max_feasible_c_probe(std::span<const double> a, std::span<const double> ts) {
  double best = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const Bound7Check c = check_bounds_7(a, t, 1.0);
    if (c.regime == EnvelopeRegime::outside || c.exponent_base <= 0.0) continue;
    best = std::min(best, -std::log(c.h) / c.exponent_base);
  }
  return best;
}

}  // namespace loconc
