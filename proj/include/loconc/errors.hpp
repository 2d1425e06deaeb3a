#pragma once

#include <stdexcept>
#include <string>

namespace loconc {

// Base for every rejected input. The CLI maps it to exit status 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested operation needs a representation the law does not have
// (e.g. exact convolution of a sampler-backed law).
class UnsupportedVariant : public InputError {
 public:
  using InputError::InputError;
};

// Exact convolution would exceed the atom budget; fall back to Monte Carlo.
class AtomCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checked analytic hypothesis failed (e.g. a characteristic function
// assumed nonnegative took a negative value).
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

}  // namespace loconc
