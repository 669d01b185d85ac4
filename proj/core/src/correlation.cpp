#include "muod/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "muod/errors.hpp"
#include "muod/functional_sample.hpp"

namespace muod {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidData("correlation: length mismatch");
  if (x.size() < 2) throw InvalidData("correlation: need at least two points");
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const CurveStats sx = curve_stats(x);
  const CurveStats sy = curve_stats(y);
  if (sx.sd == 0.0 || sy.sd == 0.0)
    throw DegenerateCurve("correlation: constant input has no Pearson correlation");
  const double d = static_cast<double>(x.size());
  double cov = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    cov += (x[t] - sx.mean) * (y[t] - sy.mean);
  }
  cov /= d;
  return cov / (sx.sd * sy.sd);
}

double cosine(std::span<const double> x, std::span<const double> y) {
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    dot += x[t] * y[t];
    nx += x[t] * x[t];
    ny += y[t] * y[t];
  }
  if (nx == 0.0 || ny == 0.0)
    throw DegenerateCurve("correlation: zero-norm input has no cosine similarity");
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

// Count of pairs inside maximal runs of consecutive equal keys.
template <typename Iter, typename Equal>
std::uint64_t tied_pairs(Iter begin, Iter end, Equal eq) {
  std::uint64_t pairs = 0;
  auto run = begin;
  for (auto it = begin; it != end; ++it) {
    if (it == run || eq(*run, *it)) continue;
    const std::uint64_t len = static_cast<std::uint64_t>(it - run);
    pairs += len * (len - 1) / 2;
    run = it;
  }
  const std::uint64_t len = static_cast<std::uint64_t>(end - run);
  pairs += len * (len - 1) / 2;
  return pairs;
}

// Strict inversions (a[i] > a[j] for i < j) counted by merge sort.
std::uint64_t count_inversions(std::vector<double>& a, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(a, buf, lo, mid) + count_inversions(a, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[i] <= a[j]) {
      buf[k++] = a[i++];
    } else {
      inv += mid - i;
      buf[k++] = a[j++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            a.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

// Kendall tau-b: (C - D) / sqrt((n0 - tx)(n0 - ty)) where n0 is the pair
// count and tx/ty are the tied-pair counts in x and y. Discordant pairs are
// the strict y-inversions after sorting by (x, y); pairs tied in x never
// count because their y values are already ascending.
double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  std::vector<std::pair<double, double>> xy(m);
  for (std::size_t i = 0; i < m; ++i) xy[i] = {x[order[i]], y[order[i]]};

  const std::uint64_t n0 = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  const std::uint64_t tx = tied_pairs(xy.begin(), xy.end(),
                                      [](auto a, auto b) { return a.first == b.first; });
  const std::uint64_t txy = tied_pairs(xy.begin(), xy.end(), [](auto a, auto b) {
    return a.first == b.first && a.second == b.second;
  });

  std::vector<double> ys(m), buf(m);
  for (std::size_t i = 0; i < m; ++i) ys[i] = xy[i].second;
  const std::uint64_t discordant = count_inversions(ys, buf, 0, m);
  // ys is now sorted; reuse it for the y tie count.
  const std::uint64_t ty = tied_pairs(ys.begin(), ys.end(),
                                      [](double a, double b) { return a == b; });

  const double den_x = static_cast<double>(n0 - tx);
  const double den_y = static_cast<double>(n0 - ty);
  if (den_x == 0.0 || den_y == 0.0)
    throw DegenerateCurve("correlation: constant input has no Kendall correlation");

  // Pairs untied in both coordinates split into concordant and discordant.
  const std::uint64_t untied = n0 - tx - ty + txy;
  const double concordant = static_cast<double>(untied - discordant);
  return (concordant - static_cast<double>(discordant)) / std::sqrt(den_x * den_y);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(m, 0.0);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && x[order[j + 1]] == x[order[i]]) ++j;
    // Positions i..j (0-based) share the mean 1-based rank.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double correlation(std::span<const double> x, std::span<const double> y,
                   CorrelationKind kind) {
  check_lengths(x, y);
  switch (kind) {
    case CorrelationKind::Pearson:
      return pearson(x, y);
    case CorrelationKind::Spearman: {
      const std::vector<double> rx = average_ranks(x);
      const std::vector<double> ry = average_ranks(y);
      return pearson(rx, ry);
    }
    case CorrelationKind::KendallTau: {
      const CurveStats sx = curve_stats(x);
      const CurveStats sy = curve_stats(y);
      if (sx.sd == 0.0 || sy.sd == 0.0)
        throw DegenerateCurve("correlation: constant input has no Kendall correlation");
      return kendall_tau_b(x, y);
    }
    case CorrelationKind::Cosine:
      return cosine(x, y);
  }
  throw InvalidData("correlation: unknown kind");
}

}  // namespace muod
