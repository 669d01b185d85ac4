#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muod/cutoff.hpp"
#include "muod/indices.hpp"
#include "muod/simulation.hpp"

namespace muod {

// Which flag set of the report scores as "the outliers". Union means any
// type flagged the curve; AllTypes means every type did (intersection).
enum class FlagScheme { Union, Magnitude, Amplitude, Shape, AllTypes };

// The curves the scheme selects, sorted ascending.
std::vector<std::size_t> selected_flags(const OutlierReport& report, FlagScheme scheme);

// One detection recipe: index family plus options, cutoff rule, flag scheme.
struct MethodSpec {
  std::string name = "fst";
  IndexMethod kind = IndexMethod::Fast;
  MedianKind median = MedianKind::PointwiseMedian;
  CorrelationKind correlation = CorrelationKind::Pearson;
  double p = 0.5;  // Semifast subsample proportion
  CutoffKind cutoff = CutoffKind::Boxplot;
  FlagScheme scheme = FlagScheme::Union;
};

// Named presets used throughout the studies:
//   fst / fstp  fast, point-wise median, boxplot, union of the three types
//   fstl1       fast with the L1 median
//   fstmg/fstam/fstsh  fast, boxplot, single-type flags
//   sf / sf25   semifast with p = 0.5 / 0.25, boxplot, union
//   muod        full pairwise indices with the legacy tangent rule, union
// Throws InvalidSpec for unknown names.
MethodSpec method_preset(const std::string& name);

// Runs one method end to end (indices then cutoff) on a sample.
// semifast_seed feeds the subsample draw of Semifast recipes.
OutlierReport detect_with(const MethodSpec& method, const FunctionalSample& sample,
                          std::uint64_t semifast_seed = 0, unsigned threads = 0);

struct StudySpec {
  std::vector<int> models;
  std::vector<MethodSpec> methods;
  std::size_t n = 300;
  std::size_t d = 50;
  double alpha = 0.1;
  double nu = 1.0;
  int replications = 100;
  std::uint64_t base_seed = 20220419;
  unsigned threads = 0;  // workers across replications
};

// One (model, method) cell. Raw per-replication rates are retained; the
// spread is the sample standard deviation (divisor r - 1, zero for r = 1).
// TPR fields are absent for models that produce no outliers.
struct CellResult {
  int model = 0;
  std::string method;
  std::vector<double> tpr_raw;
  std::vector<double> fpr_raw;
  std::optional<double> tpr_mean;
  std::optional<double> tpr_sd;
  double fpr_mean = 0.0;
  double fpr_sd = 0.0;
};

struct EvalResult {
  std::vector<CellResult> cells;
};

struct Rates {
  std::optional<double> tpr;  // absent when the truth has no outliers
  double fpr = 0.0;
};

// Percent of true outliers flagged and percent of non-outliers flagged.
// `flagged` holds curve indices into `truth`.
Rates tpr_fpr(const std::vector<std::size_t>& flagged, const std::vector<bool>& truth);

// Monte-Carlo accuracy study: for every model and replication r the data
// seed is hash(base_seed, model, r), so adding methods never perturbs the
// generated stream and all methods see identical data. Replications may run
// concurrently; aggregation order is fixed. Deterministic given base_seed.
EvalResult run_study(const StudySpec& spec);

struct TimingRecord {
  std::string method;
  std::size_t n = 0;
  std::size_t d = 0;
  double median_seconds = 0.0;
  int runs = 0;
};

struct BenchmarkSpec {
  MethodSpec method;
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (n, d)
  int runs = 5;
  double alpha = 0.05;
  std::uint64_t seed = 7;
  unsigned threads = 0;  // workers inside the timed pipeline
};

// Times the detect pipeline (indices plus cutoff, generation and I/O
// excluded) on Model 2 data of each requested size, strictly sequentially,
// recording the median of `runs` repetitions. Sizes whose data cannot be
// allocated are skipped rather than fatal.
std::vector<TimingRecord> benchmark(const BenchmarkSpec& spec);

// Least-squares slope of log(median_seconds) against log(n).
double fit_loglog_slope(const std::vector<TimingRecord>& records);

}  // namespace muod
