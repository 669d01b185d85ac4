#include "muod/functional_sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "muod/errors.hpp"

namespace muod {

FunctionalSample::FunctionalSample(Matrix values,
                                   std::optional<std::vector<double>> grid,
                                   std::optional<std::vector<std::string>> ids)
    : values_(std::move(values)), grid_(std::move(grid)), ids_(std::move(ids)) {
  if (values_.rows < 1) throw InvalidData("sample needs at least one curve");
  if (values_.cols < 2) throw InvalidData("curves need at least two evaluation points");
  if (values_.data.size() != values_.rows * values_.cols)
    throw InvalidData("matrix storage does not match its dimensions");
  for (std::size_t i = 0; i < values_.data.size(); ++i) {
    if (!std::isfinite(values_.data[i])) {
      throw InvalidData("non-finite value at curve " +
                        std::to_string(i / values_.cols) + ", point " +
                        std::to_string(i % values_.cols));
    }
  }
  if (grid_) {
    if (grid_->size() != values_.cols)
      throw InvalidData("grid length does not match the number of evaluation points");
    for (std::size_t t = 0; t < grid_->size(); ++t) {
      if (!std::isfinite((*grid_)[t])) throw InvalidData("non-finite grid value");
      if (t > 0 && (*grid_)[t] <= (*grid_)[t - 1])
        throw InvalidData("grid must be strictly increasing");
    }
  }
  if (ids_ && ids_->size() != values_.rows)
    throw InvalidData("id count does not match the number of curves");
}

bool FunctionalSample::grid_equidistant() const {
  if (!grid_) return true;
  const auto& g = *grid_;
  const double span = g.back() - g.front();
  const double step = span / static_cast<double>(g.size() - 1);
  for (std::size_t t = 1; t < g.size(); ++t) {
    if (std::abs((g[t] - g[t - 1]) - step) > 1e-9 * std::max(1.0, std::abs(span)))
      return false;
  }
  return true;
}

CurveStats curve_stats(std::span<const double> curve) {
  if (curve.size() < 2) throw InvalidData("curve_stats needs at least two points");
  for (double v : curve) {
    if (!std::isfinite(v)) throw InvalidData("curve_stats: non-finite value");
  }
  const auto [mn, mx] = std::minmax_element(curve.begin(), curve.end());
  CurveStats s;
  if (*mn == *mx) {
    // Constant curve: report exact zeros so sd == 0 is a reliable test.
    s.mean = *mn;
    return s;
  }
  const double d = static_cast<double>(curve.size());
  double sum = 0.0;
  for (double v : curve) sum += v;
  s.mean = sum / d;
  double ss = 0.0;
  for (double v : curve) {
    const double c = v - s.mean;
    ss += c * c;
  }
  s.var = ss / d;
  s.sd = std::sqrt(s.var);
  return s;
}

}  // namespace muod
