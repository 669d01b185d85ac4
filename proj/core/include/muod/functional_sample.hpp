#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muod/matrix.hpp"

namespace muod {

// Summary statistics of one curve under the population (divisor d) convention.
// Ratios formed from these (slope, correlation) are divisor-invariant.
struct CurveStats {
  double mean = 0.0;
  double sd = 0.0;
  double var = 0.0;
};

// n curves evaluated on d shared points. The optional grid stores domain
// values for I/O and warnings only: the index math always works on raw
// columns, and a non-equidistant grid merely earns a report warning.
class FunctionalSample {
 public:
  explicit FunctionalSample(Matrix values,
                            std::optional<std::vector<double>> grid = std::nullopt,
                            std::optional<std::vector<std::string>> ids = std::nullopt);

  std::size_t n() const { return values_.rows; }
  std::size_t d() const { return values_.cols; }
  const Matrix& values() const { return values_; }
  std::span<const double> curve(std::size_t i) const { return values_.row(i); }
  const std::optional<std::vector<double>>& grid() const { return grid_; }
  const std::optional<std::vector<std::string>>& ids() const { return ids_; }

  // True when no grid is stored or the stored grid is (numerically) uniform.
  bool grid_equidistant() const;

 private:
  Matrix values_;
  std::optional<std::vector<double>> grid_;
  std::optional<std::vector<std::string>> ids_;
};

// Mean, sd and variance of one curve. sd is exactly 0 iff max equals min,
// so constant curves are recognized without floating-point slack.
CurveStats curve_stats(std::span<const double> curve);

}  // namespace muod
