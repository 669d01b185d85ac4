#include "muod/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "muod/errors.hpp"

namespace muod {

namespace {

void check_finite(std::span<const double> values, std::size_t need, const char* who) {
  if (values.size() < need) {
    throw InvalidData(std::string(who) + ": needs at least " + std::to_string(need) +
                      " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidData(std::string(who) + ": non-finite value");
  }
}

double interpolated_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct TypeResult {
  std::vector<std::size_t> flagged;  // positions within the supplied values
  double threshold = 0.0;
};

TypeResult boxplot_cut(std::span<const double> values) {
  TypeResult res;
  res.threshold = boxplot_threshold(values);
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mn == *mx) return res;  // constant vector: no evidence, flag nothing
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= res.threshold) res.flagged.push_back(i);
  }
  return res;
}

TypeResult tangent_cut(std::span<const double> values) {
  TypeResult res;
  res.flagged = tangent_flags(values);
  res.threshold = std::numeric_limits<double>::infinity();
  for (const std::size_t i : res.flagged) {
    res.threshold = std::min(res.threshold, values[i]);
  }
  return res;
}

}  // namespace

double boxplot_threshold(std::span<const double> values) {
  check_finite(values, 4, "boxplot_threshold");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = interpolated_quantile(sorted, 0.25);
  const double q3 = interpolated_quantile(sorted, 0.75);
  return q3 + 1.5 * (q3 - q1);
}

std::vector<std::size_t> tangent_flags(std::span<const double> values) {
  check_finite(values, 3, "tangent_flags");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });

  const double top = values[order[n - 1]];
  // End-slope estimate: the average of the w highest gaps, scaled by 1.4.
  // The raw last gap is too noisy to cut on, and an unscaled window average
  // understates the endpoint derivative of a convexly rising tail.
  const std::size_t w = std::min<std::size_t>(7, n - 1);
  const double slope =
      1.4 * (top - values[order[n - 1 - w]]) / static_cast<double>(w);
  if (slope <= 0.0) return {};

  double x0 = static_cast<double>(n) - top / slope;
  x0 = std::clamp(x0, 0.0, static_cast<double>(n));

  std::vector<std::size_t> flagged;
  // 1-based sorted rank k is flagged when k > x0.
  for (std::size_t k = n; k >= 1; --k) {
    if (static_cast<double>(k) > x0) {
      flagged.push_back(order[k - 1]);
    } else {
      break;
    }
  }
  std::sort(flagged.begin(), flagged.end());
  return flagged;
}

OutlierReport classify(const IndexSet& indices, CutoffKind cutoff) {
  const std::size_t n = indices.magnitude.size();
  if (indices.amplitude.size() != n || indices.shape.size() != n)
    throw InvalidData("classify: index vectors have mismatched lengths");

  OutlierReport report;
  report.method = cutoff;
  report.degenerate = indices.degenerate;

  // Valid curves: everything not listed as degenerate.
  std::vector<std::size_t> valid;
  valid.reserve(n - indices.degenerate.size());
  {
    auto deg = indices.degenerate.begin();
    for (std::size_t i = 0; i < n; ++i) {
      if (deg != indices.degenerate.end() && *deg == i) {
        ++deg;
      } else {
        valid.push_back(i);
      }
    }
  }

  const auto run = [&](const std::vector<double>& values, std::vector<std::size_t>& out,
                       double& threshold) {
    std::vector<double> v(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) v[i] = values[valid[i]];
    const TypeResult res =
        cutoff == CutoffKind::Boxplot ? boxplot_cut(v) : tangent_cut(v);
    threshold = res.threshold;
    out.reserve(res.flagged.size());
    for (const std::size_t pos : res.flagged) out.push_back(valid[pos]);
  };

  run(indices.magnitude, report.magnitude_outliers, report.magnitude_threshold);
  run(indices.amplitude, report.amplitude_outliers, report.amplitude_threshold);
  run(indices.shape, report.shape_outliers, report.shape_threshold);

  std::vector<std::size_t> u;
  std::set_union(report.magnitude_outliers.begin(), report.magnitude_outliers.end(),
                 report.amplitude_outliers.begin(), report.amplitude_outliers.end(),
                 std::back_inserter(u));
  report.union_outliers.clear();
  std::set_union(u.begin(), u.end(), report.shape_outliers.begin(),
                 report.shape_outliers.end(), std::back_inserter(report.union_outliers));

  if (!report.degenerate.empty()) {
    report.warnings.push_back(
        std::to_string(report.degenerate.size()) +
        " degenerate curve(s) with zero variance: review manually, excluded "
        "from thresholds and flags");
  }
  return report;
}

}  // namespace muod
