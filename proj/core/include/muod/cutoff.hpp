#pragma once

#include <span>
#include <string>
#include <vector>

#include "muod/indices.hpp"

namespace muod {

enum class CutoffKind { Boxplot, Tangent };

// Classified outlier flags for one IndexSet. All index vectors are sorted
// ascending. Thresholds are per index type; under the tangent rule the
// stored threshold is the smallest flagged value (+infinity when nothing is
// flagged), since that rule cuts on sorted rank rather than on a value.
struct OutlierReport {
  std::vector<std::size_t> magnitude_outliers;
  std::vector<std::size_t> amplitude_outliers;
  std::vector<std::size_t> shape_outliers;
  std::vector<std::size_t> union_outliers;
  double magnitude_threshold = 0.0;
  double amplitude_threshold = 0.0;
  double shape_threshold = 0.0;
  CutoffKind method = CutoffKind::Boxplot;
  std::vector<std::size_t> degenerate;  // passed through from the IndexSet
  std::vector<std::string> warnings;
};

// Classical boxplot fence Q3 + 1.5*(Q3 - Q1), quartiles by linear
// interpolation of the sorted values at positions 1 + 0.25(n-1) and
// 1 + 0.75(n-1). Needs at least 4 finite values. Flagging compares with >=.
double boxplot_threshold(std::span<const double> values);

// Rank-based tangent rule: sort values ascending as points (k, v_k),
// k = 1..n, and estimate the curve's slope at the maximum as 1.4 times the
// average of the w = min(7, n-1) highest gaps. A non-positive slope flags
// nothing; otherwise the tangent line through (n, v_n) meets the x-axis at
// x0 = n - v_n/slope (clamped to [0, n]) and every curve of sorted rank
// k > x0 is flagged. Ties are ranked by original position, so the result
// is deterministic. Needs at least 3 finite values. Returns the flagged
// positions in `values`, sorted ascending.
std::vector<std::size_t> tangent_flags(std::span<const double> values);

// Applies the chosen rule independently to each index vector, skipping
// degenerate curves (they are reported for manual review, never flagged).
// A constant index vector flags nothing under the boxplot rule despite the
// >= comparison: it carries no outlyingness evidence.
OutlierReport classify(const IndexSet& indices, CutoffKind cutoff);

}  // namespace muod
