#pragma once

#include <vector>

#include "muod/functional_sample.hpp"

namespace muod {

enum class MedianKind { PointwiseMedian, L1Median };

// A single reference curve the fast index path regresses against.
struct ReferenceCurve {
  std::vector<double> values;
  MedianKind kind = MedianKind::PointwiseMedian;
};

struct WeiszfeldOptions {
  double tol = 1e-8;   // relative step size for convergence
  int max_iter = 1000;
};

// Coordinate-wise median across curves. Odd counts pick an observed value,
// even counts use the midpoint of the two central order statistics. May run
// column-parallel; the result is identical for any thread count.
ReferenceCurve pointwise_median(const FunctionalSample& sample, unsigned threads = 0);

// Geometric (L1) median: the minimizer of the summed Euclidean distances to
// all curves, computed by Weiszfeld iteration started at the point-wise
// median. When an iterate coincides with data curves the Vardi-Zhang modified
// step is used: if the pull of the remaining curves exceeds the coincident
// multiplicity the iterate steps away, otherwise it is optimal and iteration
// stops. Throws ConvergenceFailure (carrying the last iterate) if max_iter is
// exhausted before the relative step drops below tol.
ReferenceCurve l1_median(const FunctionalSample& sample, const WeiszfeldOptions& opts = {});

// Summed Euclidean distance from `point` to every curve (the L1-median
// objective); exposed for diagnostics and tests.
double l1_objective(const FunctionalSample& sample, std::span<const double> point);

}  // namespace muod
