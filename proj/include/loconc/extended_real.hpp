#pragma once

#include <cassert>
#include <limits>
#include <string>

namespace loconc {

// A real number or a typed "+infinity" marker. Used for vacuous bounds and
// for essential LCDs beyond the search horizon, where a floating-point inf
// would leak into serialized reports.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v), finite_(true) {}

  static constexpr ExtendedReal infinite() { return ExtendedReal{}; }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_infinite() const { return !finite_; }

  constexpr double value() const {
    assert(finite_);
    return value_;
  }

  // Finite value or +inf, for arithmetic comparisons.
  constexpr double as_double() const {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool finite_ = false;
};

}  // namespace loconc
