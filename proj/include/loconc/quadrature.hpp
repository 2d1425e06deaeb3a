#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>

#include "loconc/errors.hpp"

namespace loconc {

struct QuadratureSettings {
  double abs_tolerance = 1e-8;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

namespace detail {

template <class F>
struct SimpsonState {
  F& f;
  std::size_t budget;
  std::size_t used = 0;

  // Returns the refined integral over [a, b] given f at a, m, b and the
  // coarse Simpson estimate `whole`.
  double refine(double a, double fa, double m, double fm, double b, double fb, double whole,
                double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (++used > budget)
      throw QuadratureError("adaptive Simpson: exceeded " + std::to_string(budget) + " subdivisions");
    // Always split twice so a coincidentally flat 5-point sample is not trusted.
    if (depth >= 2 && (std::abs(diff) <= 15.0 * tol || depth >= 60))
      return left + right + diff / 15.0;
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace detail

// Adaptive Simpson on [a, b] with panels no wider than max_panel. The
// absolute tolerance is shared among panels in proportion to their width.
template <class F>
double integrate_adaptive(F&& f, double a, double b, const QuadratureSettings& qs,
                          double max_panel = std::numeric_limits<double>::infinity()) {
  require(qs.abs_tolerance > 0.0, "quadrature: abs_tolerance must be positive");
  require(b >= a, "quadrature: need a <= b");
  if (b == a) return 0.0;
  const double width = b - a;
  const double panels_real = std::isfinite(max_panel) && max_panel > 0.0 ? std::ceil(width / max_panel) : 1.0;
  if (panels_real > static_cast<double>(qs.max_subdivisions))
    throw QuadratureError("quadrature: panel count exceeds max_subdivisions");
  const auto panels = static_cast<std::size_t>(std::max(1.0, panels_real));
  detail::SimpsonState<std::remove_reference_t<F>> state{f, qs.max_subdivisions};
  double total = 0.0;
  const double h = width / static_cast<double>(panels);
  double fa = f(a);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : a + h * static_cast<double>(k + 1);
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const double fb = f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += state.refine(lo, fa, mid, fm, hi, fb, whole, qs.abs_tolerance * (hi - lo) / width, 0);
    fa = fb;
  }
  return total;
}

}  // namespace loconc
