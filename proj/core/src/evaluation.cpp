#include "muod/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <mutex>
#include <new>
#include <stdexcept>

#include "muod/errors.hpp"
#include "muod/parallel.hpp"
#include "muod/rng.hpp"

namespace muod {

namespace {

MethodSpec preset(std::string name, IndexMethod kind, MedianKind median, double p,
                  CutoffKind cutoff, FlagScheme scheme) {
  MethodSpec m;
  m.name = std::move(name);
  m.kind = kind;
  m.median = median;
  m.p = p;
  m.cutoff = cutoff;
  m.scheme = scheme;
  return m;
}

}  // namespace

MethodSpec method_preset(const std::string& name) {
  if (name == "fst" || name == "fstp")
    return preset("fst", IndexMethod::Fast, MedianKind::PointwiseMedian, 0.5,
                  CutoffKind::Boxplot, FlagScheme::Union);
  if (name == "fstl1")
    return preset("fstl1", IndexMethod::Fast, MedianKind::L1Median, 0.5,
                  CutoffKind::Boxplot, FlagScheme::Union);
  if (name == "fstmg")
    return preset("fstmg", IndexMethod::Fast, MedianKind::PointwiseMedian, 0.5,
                  CutoffKind::Boxplot, FlagScheme::Magnitude);
  if (name == "fstam")
    return preset("fstam", IndexMethod::Fast, MedianKind::PointwiseMedian, 0.5,
                  CutoffKind::Boxplot, FlagScheme::Amplitude);
  if (name == "fstsh")
    return preset("fstsh", IndexMethod::Fast, MedianKind::PointwiseMedian, 0.5,
                  CutoffKind::Boxplot, FlagScheme::Shape);
  if (name == "sf")
    return preset("sf", IndexMethod::Semifast, MedianKind::PointwiseMedian, 0.5,
                  CutoffKind::Boxplot, FlagScheme::Union);
  if (name == "sf25")
    return preset("sf25", IndexMethod::Semifast, MedianKind::PointwiseMedian, 0.25,
                  CutoffKind::Boxplot, FlagScheme::Union);
  if (name == "muod")
    return preset("muod", IndexMethod::Muod, MedianKind::PointwiseMedian, 0.5,
                  CutoffKind::Tangent, FlagScheme::Union);
  throw InvalidSpec("unknown method preset: " + name);
}

OutlierReport detect_with(const MethodSpec& method, const FunctionalSample& sample,
                          std::uint64_t semifast_seed, unsigned threads) {
  IndexSet idx;
  switch (method.kind) {
    case IndexMethod::Muod:
      idx = muod_indices(sample, method.correlation, threads);
      break;
    case IndexMethod::Semifast: {
      SemifastConfig cfg;
      cfg.p = method.p;
      cfg.seed = semifast_seed;
      idx = semifast_indices(sample, cfg, method.correlation, threads);
      break;
    }
    case IndexMethod::Fast:
      idx = fast_indices(sample, method.median, method.correlation, threads);
      break;
  }
  return classify(idx, method.cutoff);
}

Rates tpr_fpr(const std::vector<std::size_t>& flagged, const std::vector<bool>& truth) {
  std::size_t n_out = 0;
  for (bool b : truth)
    if (b) ++n_out;
  const std::size_t n_in = truth.size() - n_out;

  std::size_t hit = 0, false_alarm = 0;
  for (std::size_t i : flagged) {
    if (i >= truth.size()) throw InvalidData("flagged index out of range");
    if (truth[i])
      ++hit;
    else
      ++false_alarm;
  }

  Rates r;
  if (n_out > 0) r.tpr = 100.0 * static_cast<double>(hit) / static_cast<double>(n_out);
  r.fpr = n_in > 0 ? 100.0 * static_cast<double>(false_alarm) / static_cast<double>(n_in)
                   : 0.0;
  return r;
}

std::vector<std::size_t> selected_flags(const OutlierReport& report, FlagScheme scheme) {
  switch (scheme) {
    case FlagScheme::Magnitude: return report.magnitude_outliers;
    case FlagScheme::Amplitude: return report.amplitude_outliers;
    case FlagScheme::Shape: return report.shape_outliers;
    case FlagScheme::AllTypes: {
      // Flag lists are sorted, so the three-way intersection is two merges.
      std::vector<std::size_t> ma;
      std::set_intersection(report.magnitude_outliers.begin(),
                            report.magnitude_outliers.end(),
                            report.amplitude_outliers.begin(),
                            report.amplitude_outliers.end(), std::back_inserter(ma));
      std::vector<std::size_t> all;
      std::set_intersection(ma.begin(), ma.end(), report.shape_outliers.begin(),
                            report.shape_outliers.end(), std::back_inserter(all));
      return all;
    }
    case FlagScheme::Union: break;
  }
  return report.union_outliers;
}

namespace {

// Offset separating subsample seeds from data seeds in the hash ladder.
constexpr std::uint64_t kSubsampleTag = 0x53554253414d50ULL;

// Mean and sample standard deviation (divisor r - 1; zero spread for r = 1).
std::pair<double, double> mean_sd(const std::vector<double>& v) {
  const auto r = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= r;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (r - 1.0))};
}

}  // namespace

EvalResult run_study(const StudySpec& spec) {
  if (spec.replications < 1) throw InvalidSpec("replications must be positive");
  if (spec.models.empty()) throw InvalidSpec("no models requested");
  if (spec.methods.empty()) throw InvalidSpec("no methods requested");

  const auto reps = static_cast<std::size_t>(spec.replications);
  const std::size_t n_methods = spec.methods.size();

  EvalResult out;
  for (int model : spec.models) {
    // rates[m][r] for method m, replication r; filled concurrently, distinct slots.
    std::vector<std::vector<Rates>> rates(n_methods, std::vector<Rates>(reps));
    std::exception_ptr first_error;
    std::mutex error_mutex;

    parallel_for(reps, spec.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        try {
          SimulationSpec sim;
          sim.model = model;
          sim.n = spec.n;
          sim.d = spec.d;
          sim.alpha = spec.alpha;
          sim.nu = spec.nu;
          sim.seed = seed_mix(spec.base_seed, static_cast<std::uint64_t>(model),
                              static_cast<std::uint64_t>(r));
          LabeledSample data = generate(sim);
          for (std::size_t m = 0; m < n_methods; ++m) {
            // Subsample seed is independent of the data stream but fixed per cell.
            const std::uint64_t sub_seed = seed_mix(sim.seed, kSubsampleTag + m);
            OutlierReport rep = detect_with(spec.methods[m], data.sample, sub_seed, 1);
            rates[m][r] =
                tpr_fpr(selected_flags(rep, spec.methods[m].scheme), data.is_outlier);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });

    if (first_error) {
      // Rethrow with the cell named but the type kept, so callers can still
      // distinguish configuration errors from numerical failures.
      const std::string where = "study cell failed (model " + std::to_string(model) + "): ";
      try {
        std::rethrow_exception(first_error);
      } catch (const InvalidSpec& e) {
        throw InvalidSpec(where + e.what());
      } catch (const InvalidData& e) {
        throw InvalidData(where + e.what());
      } catch (const DegenerateCurve& e) {
        throw DegenerateCurve(where + e.what());
      } catch (const DegenerateReference& e) {
        throw DegenerateReference(where + e.what());
      } catch (const ConvergenceFailure& e) {
        throw ConvergenceFailure(where + e.what(), e.last_iterate());
      } catch (const NumericalFailure& e) {
        throw NumericalFailure(where + e.what());
      } catch (const std::exception& e) {
        throw std::runtime_error(where + e.what());
      }
    }

    for (std::size_t m = 0; m < n_methods; ++m) {
      CellResult cell;
      cell.model = model;
      cell.method = spec.methods[m].name;
      bool has_tpr = true;
      for (std::size_t r = 0; r < reps; ++r) {
        const Rates& rr = rates[m][r];
        if (rr.tpr)
          cell.tpr_raw.push_back(*rr.tpr);
        else
          has_tpr = false;
        cell.fpr_raw.push_back(rr.fpr);
      }
      if (has_tpr && !cell.tpr_raw.empty()) {
        auto [tm, ts] = mean_sd(cell.tpr_raw);
        cell.tpr_mean = tm;
        cell.tpr_sd = ts;
      } else {
        cell.tpr_raw.clear();
      }
      auto [fm, fs] = mean_sd(cell.fpr_raw);
      cell.fpr_mean = fm;
      cell.fpr_sd = fs;
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<TimingRecord> benchmark(const BenchmarkSpec& spec) {
  if (spec.runs < 1) throw InvalidSpec("benchmark runs must be positive");
  std::vector<TimingRecord> out;
  for (auto [n, d] : spec.sizes) {
    std::optional<LabeledSample> data;
    try {
      SimulationSpec sim;
      sim.model = 2;
      sim.n = n;
      sim.d = d;
      sim.alpha = spec.alpha;
      sim.seed = seed_mix(spec.seed, n, d);
      data = generate(sim);
    } catch (const std::bad_alloc&) {
      continue;  // size does not fit in memory, skip it
    }

    std::vector<double> secs;
    secs.reserve(static_cast<std::size_t>(spec.runs));
    for (int run = 0; run < spec.runs; ++run) {
      const auto t0 = std::chrono::steady_clock::now();
      OutlierReport rep = detect_with(spec.method, data->sample,
                                      seed_mix(spec.seed, kSubsampleTag), spec.threads);
      const auto t1 = std::chrono::steady_clock::now();
      if (rep.union_outliers.size() > data->sample.n())
        throw NumericalFailure("impossible flag count");  // keeps the call un-elided
      secs.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(secs.begin(), secs.end());
    TimingRecord rec;
    rec.method = spec.method.name;
    rec.n = n;
    rec.d = d;
    rec.median_seconds = secs[secs.size() / 2];
    if (secs.size() % 2 == 0)
      rec.median_seconds = 0.5 * (secs[secs.size() / 2 - 1] + secs[secs.size() / 2]);
    rec.runs = spec.runs;
    out.push_back(std::move(rec));
  }
  return out;
}

double fit_loglog_slope(const std::vector<TimingRecord>& records) {
  if (records.size() < 2) throw InvalidData("slope fit needs at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto k = static_cast<double>(records.size());
  for (const TimingRecord& r : records) {
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(std::max(r.median_seconds, 1e-9));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  if (denom <= 0.0) throw InvalidData("slope fit needs distinct sizes");
  return (k * sxy - sx * sy) / denom;
}

}  // namespace muod
