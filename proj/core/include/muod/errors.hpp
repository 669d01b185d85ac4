#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace muod {

// Malformed or out-of-contract input: bad dimensions, non-finite values,
// ragged CSV rows, too few usable curves.
class InvalidData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally parseable but unsupported configuration (unknown model id,
// contamination rate out of range, incompatible option combinations).
class InvalidSpec : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A zero-variance (or zero-norm) curve was passed where a correlation
// requires spread.
class DegenerateCurve : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The reference curve is constant, so regression against it is undefined.
class DegenerateReference : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative routine exhausted its iteration budget. Carries the last
// iterate so callers can inspect or reuse it.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, std::vector<double> last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

// Numerical linear-algebra failure, e.g. a covariance matrix that cannot be
// factorized even after jitter escalation.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace muod
