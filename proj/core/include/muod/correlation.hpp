#pragma once

#include <span>
#include <vector>

namespace muod {

enum class CorrelationKind { Pearson, Spearman, KendallTau, Cosine };

// Correlation between two equal-length vectors (length >= 2).
//   Pearson:    cov(x,y) / (s_x s_y)
//   Spearman:   Pearson on average ranks (ties share the mean rank)
//   KendallTau: tau-b with tie correction, O(d log d)
//   Cosine:     <x,y> / (|x| |y|)
// Throws DegenerateCurve when a rank/moment kind sees a constant input or
// Cosine sees a zero-norm input.
double correlation(std::span<const double> x, std::span<const double> y,
                   CorrelationKind kind);

// 1-based ranks with ties replaced by the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

}  // namespace muod
