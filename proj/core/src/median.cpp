#include "muod/median.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "muod/errors.hpp"
#include "muod/parallel.hpp"

namespace muod {

namespace {

double column_median(const Matrix& m, std::size_t col, std::vector<double>& scratch) {
  const std::size_t n = m.rows;
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = m(i, col);
  const std::size_t half = n / 2;
  std::nth_element(scratch.begin(), scratch.begin() + half, scratch.end());
  const double upper = scratch[half];
  if (n % 2 == 1) return upper;
  // Even count: the lower central order statistic is the max of the left part.
  const double lower = *std::max_element(scratch.begin(), scratch.begin() + half);
  return 0.5 * (lower + upper);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

ReferenceCurve pointwise_median(const FunctionalSample& sample, unsigned threads) {
  const std::size_t d = sample.d();
  ReferenceCurve ref;
  ref.kind = MedianKind::PointwiseMedian;
  ref.values.assign(d, 0.0);
  const Matrix& m = sample.values();
  parallel_for(d, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    for (std::size_t col = begin; col < end; ++col) {
      ref.values[col] = column_median(m, col, scratch);
    }
  });
  return ref;
}

double l1_objective(const FunctionalSample& sample, std::span<const double> point) {
  if (point.size() != sample.d()) throw InvalidData("point length does not match sample");
  double total = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const auto row = sample.curve(i);
    double s = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) {
      const double diff = row[t] - point[t];
      s += diff * diff;
    }
    total += std::sqrt(s);
  }
  return total;
}

ReferenceCurve l1_median(const FunctionalSample& sample, const WeiszfeldOptions& opts) {
  if (opts.tol <= 0) throw InvalidData("l1_median: tol must be positive");
  if (opts.max_iter < 1) throw InvalidData("l1_median: max_iter must be at least 1");

  const std::size_t n = sample.n();
  const std::size_t d = sample.d();
  ReferenceCurve ref;
  ref.kind = MedianKind::L1Median;
  ref.values = pointwise_median(sample).values;
  if (n == 1) {
    ref.values.assign(sample.curve(0).begin(), sample.curve(0).end());
    return ref;
  }

  std::vector<double>& m = ref.values;
  std::vector<double> next(d), dist(n);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const double m_norm = norm2(m);
    // A curve counts as coincident when it is within rounding of the iterate;
    // its Weiszfeld weight would otherwise explode.
    const double coincide = 1e-13 * (1.0 + m_norm);

    double weight_sum = 0.0;
    std::size_t multiplicity = 0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = sample.curve(i);
      double s = 0.0;
      for (std::size_t t = 0; t < d; ++t) {
        const double diff = row[t] - m[t];
        s += diff * diff;
      }
      dist[i] = std::sqrt(s);
      if (dist[i] <= coincide) {
        ++multiplicity;
      } else {
        const double w = 1.0 / dist[i];
        weight_sum += w;
        for (std::size_t t = 0; t < d; ++t) next[t] += w * row[t];
      }
    }

    if (weight_sum == 0.0) return ref;  // every curve coincides with the iterate

    for (std::size_t t = 0; t < d; ++t) next[t] /= weight_sum;

    if (multiplicity > 0) {
      // Vardi-Zhang subgradient test at an anchor point: the pull of the
      // non-coincident curves must exceed the coincident mass to move on.
      double r2 = 0.0;
      for (std::size_t t = 0; t < d; ++t) {
        // R = sum_i (Y_i - m)/dist_i = weight_sum * (T(m) - m) by construction.
        const double rt = weight_sum * (next[t] - m[t]);
        r2 += rt * rt;
      }
      const double r = std::sqrt(r2);
      const double eta = static_cast<double>(multiplicity);
      if (r <= eta) return ref;  // optimal: subgradient contains zero
      const double step = 1.0 - eta / r;
      for (std::size_t t = 0; t < d; ++t) next[t] = m[t] + step * (next[t] - m[t]);
    }

    double step2 = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
      const double diff = next[t] - m[t];
      step2 += diff * diff;
    }
    const double rel_step = std::sqrt(step2) / (1.0 + m_norm);
    m.swap(next);
    if (rel_step < opts.tol) return ref;
  }
  throw ConvergenceFailure("l1_median: no convergence within max_iter", ref.values);
}

}  // namespace muod
