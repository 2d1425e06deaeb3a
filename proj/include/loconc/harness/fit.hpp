#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "loconc/harness/report.hpp"

namespace loconc {

inline constexpr std::array<double, 5> kExponentRateGrid{0.125, 0.25, 0.5, 1.0, 2.0};

struct FitResult {
  bool feasible = false;
  ConstantSet constants;
  std::size_t rows_used = 0;
  std::string message;
};

namespace detail {

inline bool violates_any(const std::vector<const BoundReport*>& rows, const ConstantSet& k) {
  for (const BoundReport* r : rows)
    if (r->lhs.value > evaluate_rhs(*r, k).value.value()) return true;
  return false;
}

}  // namespace detail

// Smallest C_front (C_exp = 1) for which every non-vacuous row of the given
// inequality holds, scanning c_exp over the grid. Equal C_front prefers the
// larger c_exp. Failure is reported in the result, never thrown.
inline FitResult fit_constants(const std::vector<ReportRow>& rows, const std::string& inequality) {
  FitResult out;
  std::vector<const BoundReport*> used;
  for (const auto& r : rows)
    if (r.bound.inequality == inequality && !r.bound.vacuous()) used.push_back(&r.bound);
  out.rows_used = used.size();
  if (used.empty()) {
    out.message = "no non-vacuous rows for " + inequality;
    return out;
  }
  const int p_exponent = used.front()->constants.p_exponent;

  double best_C = std::numeric_limits<double>::infinity();
  double best_c = kExponentRateGrid.front();
  for (double c : kExponentRateGrid) {
    const ConstantSet unit{1.0, 1.0, c, p_exponent};
    double C = 0.0;
    for (const BoundReport* r : used) {
      const BoundRhs shape = evaluate_rhs(*r, unit);
      C = std::max(C, (r->lhs.value - shape.exponential) / shape.algebraic);
    }
    if (!std::isfinite(C)) continue;
    if (C <= best_C) {
      best_C = C;
      best_c = c;
    }
  }
  if (!std::isfinite(best_C)) {
    out.message = "no finite constant for " + inequality;
    return out;
  }
  ConstantSet k{std::max(best_C, std::numeric_limits<double>::min()), 1.0, best_c, p_exponent};
  // The ratio and the bound formula round differently; step up until exact.
  for (int i = 0; i < 1000 && detail::violates_any(used, k); ++i)
    k.C_front = std::nextafter(k.C_front, std::numeric_limits<double>::infinity()) * (i < 64 ? 1.0 : 1.0 + 1e-12);
  if (detail::violates_any(used, k)) {
    out.message = "could not certify fitted constant for " + inequality;
    return out;
  }
  out.feasible = true;
  out.constants = k;
  return out;
}

// Rows re-evaluated under the given constants.
inline std::vector<ReportRow> with_constants(std::vector<ReportRow> rows, const ConstantSet& k) {
  for (auto& r : rows) {
    r.bound.rhs = evaluate_rhs(r.bound, k);
    r.bound.constants = k;
  }
  return rows;
}

}  // namespace loconc
