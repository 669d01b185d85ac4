#pragma once

#include <cstdint>
#include <vector>

#include "muod/correlation.hpp"
#include "muod/functional_sample.hpp"
#include "muod/median.hpp"

namespace muod {

enum class IndexMethod { Muod, Semifast, Fast };

struct SemifastConfig {
  double p = 0.5;          // subsample proportion in (0, 1]
  std::uint64_t seed = 0;  // subsample draw seed
};

// Which reference scheme produced an IndexSet, with its options.
struct MethodInfo {
  IndexMethod kind = IndexMethod::Fast;
  double p = 1.0;                                   // Semifast only
  std::uint64_t seed = 0;                           // Semifast only
  MedianKind median = MedianKind::PointwiseMedian;  // Fast only
};

// Per-curve outlyingness indices. Curves listed in `degenerate` (zero sd)
// have all three entries set to 0; they carry no evidence and cutoffs must
// skip them rather than threshold them.
struct IndexSet {
  std::vector<double> magnitude;  // I_M: |average regression intercept|
  std::vector<double> amplitude;  // I_A: |average regression slope - 1|
  std::vector<double> shape;      // I_S: |average correlation - 1|
  MethodInfo method;
  CorrelationKind correlation_kind = CorrelationKind::Pearson;
  std::vector<std::size_t> degenerate;  // sorted ascending
};

// The reference subsample the Semifast scheme draws for a sample of n curves:
// n_X = max(1, round(p*n)) distinct indices, drawn without replacement from
// the seeded generator and returned sorted. Exposed so external checks can
// reproduce the exact subsample behind a Semifast IndexSet.
std::vector<std::size_t> semifast_subsample(std::size_t n, const SemifastConfig& cfg);

// Indices against the full sample as reference set: for each curve i,
// averages of rho(Y_i, Y_j), slope cov(Y_i,Y_j)/var(Y_j) and intercept
// mean_i - slope*mean_j run over every non-degenerate curve j (self pair
// included). Cost O(n^2 d). Needs at least two non-degenerate curves.
IndexSet muod_indices(const FunctionalSample& sample,
                      CorrelationKind kind = CorrelationKind::Pearson,
                      unsigned threads = 0);

// Same formulas with the average over one shared subsample of proportion
// cfg.p, drawn once up front. Cost O(p n^2 d). With p = 1 the output equals
// muod_indices bit for bit. Throws InvalidData when the subsample is
// entirely degenerate.
IndexSet semifast_indices(const FunctionalSample& sample, const SemifastConfig& cfg,
                          CorrelationKind kind = CorrelationKind::Pearson,
                          unsigned threads = 0);

// Single-reference variant: regress every curve on the sample median
// (point-wise or L1). Cost O(nd). Throws DegenerateReference when the median
// curve is constant.
IndexSet fast_indices(const FunctionalSample& sample,
                      MedianKind median_kind = MedianKind::PointwiseMedian,
                      CorrelationKind kind = CorrelationKind::Pearson,
                      unsigned threads = 0);

// Fast indices against a caller-supplied reference curve.
IndexSet fast_indices_against(const FunctionalSample& sample, const ReferenceCurve& reference,
                              CorrelationKind kind = CorrelationKind::Pearson,
                              unsigned threads = 0);

}  // namespace muod
