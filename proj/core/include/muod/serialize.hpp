#pragma once

#include <string>
#include <vector>

#include "muod/cutoff.hpp"
#include "muod/evaluation.hpp"
#include "muod/functional_sample.hpp"
#include "muod/indices.hpp"

namespace muod {

// Detection output in three shapes. All are deterministic byte-for-byte for
// a given report. Curves are named by their stored ids, falling back to the
// 0-based row index. The scheme picks which set the top-level "flagged"
// entry carries; per-type sets are always present.
//
// JSON layout:
//   { "method": ..., "params": {...}, "thresholds": {...},
//     "outliers": {"magnitude": [...], "amplitude": [...], "shape": [...],
//                  "union": [...]},
//     "flagged": [...], "degenerate": [...], "warnings": [...] }
std::string report_to_json(const OutlierReport& report, const IndexSet& indices,
                           const FunctionalSample& sample,
                           FlagScheme scheme = FlagScheme::Union);

// One row per curve: id, the three index values, one 0/1 flag per type,
// and the scheme's verdict in a final `flagged` column.
std::string report_to_csv(const OutlierReport& report, const IndexSet& indices,
                          const FunctionalSample& sample,
                          FlagScheme scheme = FlagScheme::Union);

// Human-oriented summary of thresholds, flagged curves and warnings.
std::string report_to_text(const OutlierReport& report, const IndexSet& indices,
                           const FunctionalSample& sample,
                           FlagScheme scheme = FlagScheme::Union);

const char* flag_scheme_name(FlagScheme scheme);

// Study table, one row per (model, method):
//   model,method,tpr_mean,tpr_sd,fpr_mean,fpr_sd  ("-" when TPR is undefined).
std::string eval_to_csv(const EvalResult& result);
std::string eval_to_json(const EvalResult& result);

// Timing table: method,n,d,median_seconds,runs.
std::string timing_to_csv(const std::vector<TimingRecord>& records);

}  // namespace muod
