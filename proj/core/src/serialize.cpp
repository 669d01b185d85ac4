#include "muod/serialize.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "muod/csv.hpp"

namespace muod {

namespace {

using nlohmann::ordered_json;

const char* method_name(IndexMethod kind) {
  switch (kind) {
    case IndexMethod::Muod: return "muod";
    case IndexMethod::Semifast: return "semifast";
    case IndexMethod::Fast: return "fast";
  }
  return "fast";
}

const char* correlation_name(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::Pearson: return "pearson";
    case CorrelationKind::Spearman: return "spearman";
    case CorrelationKind::KendallTau: return "kendall";
    case CorrelationKind::Cosine: return "cosine";
  }
  return "pearson";
}

const char* cutoff_name(CutoffKind kind) {
  return kind == CutoffKind::Tangent ? "tangent" : "boxplot";
}

const char* median_name(MedianKind kind) {
  return kind == MedianKind::L1Median ? "l1" : "pointwise";
}

std::string curve_name(const FunctionalSample& sample, std::size_t i) {
  if (sample.ids()) return (*sample.ids())[i];
  return std::to_string(i);
}

ordered_json names_of(const FunctionalSample& sample, const std::vector<std::size_t>& rows) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i : rows) arr.push_back(curve_name(sample, i));
  return arr;
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

}  // namespace

const char* flag_scheme_name(FlagScheme scheme) {
  switch (scheme) {
    case FlagScheme::Union: return "union";
    case FlagScheme::Magnitude: return "magnitude";
    case FlagScheme::Amplitude: return "amplitude";
    case FlagScheme::Shape: return "shape";
    case FlagScheme::AllTypes: return "all-types";
  }
  return "union";
}

std::string report_to_json(const OutlierReport& report, const IndexSet& indices,
                           const FunctionalSample& sample, FlagScheme scheme) {
  ordered_json root;
  root["method"] = method_name(indices.method.kind);

  ordered_json params;
  params["correlation"] = correlation_name(indices.correlation_kind);
  params["cutoff"] = cutoff_name(report.method);
  params["flag_scheme"] = flag_scheme_name(scheme);
  switch (indices.method.kind) {
    case IndexMethod::Semifast:
      params["p"] = indices.method.p;
      params["seed"] = indices.method.seed;
      break;
    case IndexMethod::Fast:
      params["median"] = median_name(indices.method.median);
      break;
    case IndexMethod::Muod:
      break;
  }
  root["params"] = std::move(params);

  ordered_json thresholds;
  thresholds["magnitude"] = report.magnitude_threshold;
  thresholds["amplitude"] = report.amplitude_threshold;
  thresholds["shape"] = report.shape_threshold;
  root["thresholds"] = std::move(thresholds);

  ordered_json outliers;
  outliers["magnitude"] = names_of(sample, report.magnitude_outliers);
  outliers["amplitude"] = names_of(sample, report.amplitude_outliers);
  outliers["shape"] = names_of(sample, report.shape_outliers);
  outliers["union"] = names_of(sample, report.union_outliers);
  root["outliers"] = std::move(outliers);

  root["flagged"] = names_of(sample, selected_flags(report, scheme));
  root["degenerate"] = names_of(sample, report.degenerate);
  root["warnings"] = report.warnings;

  return root.dump(2) + "\n";
}

std::string report_to_csv(const OutlierReport& report, const IndexSet& indices,
                          const FunctionalSample& sample, FlagScheme scheme) {
  const std::vector<std::size_t> selected = selected_flags(report, scheme);
  std::ostringstream out;
  out << "id,magnitude,amplitude,shape,flag_magnitude,flag_amplitude,flag_shape,flagged\n";
  for (std::size_t i = 0; i < sample.n(); ++i) {
    out << curve_name(sample, i) << ',' << format_double(indices.magnitude[i]) << ','
        << format_double(indices.amplitude[i]) << ',' << format_double(indices.shape[i])
        << ',' << (contains(report.magnitude_outliers, i) ? 1 : 0) << ','
        << (contains(report.amplitude_outliers, i) ? 1 : 0) << ','
        << (contains(report.shape_outliers, i) ? 1 : 0) << ','
        << (contains(selected, i) ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string report_to_text(const OutlierReport& report, const IndexSet& indices,
                           const FunctionalSample& sample, FlagScheme scheme) {
  std::ostringstream out;
  out << "method: " << method_name(indices.method.kind)
      << "  correlation: " << correlation_name(indices.correlation_kind)
      << "  cutoff: " << cutoff_name(report.method) << '\n';
  if (indices.method.kind == IndexMethod::Fast)
    out << "median: " << median_name(indices.method.median) << '\n';
  if (indices.method.kind == IndexMethod::Semifast)
    out << "p: " << format_double(indices.method.p) << "  seed: " << indices.method.seed
        << '\n';
  out << "curves: " << sample.n() << "\n\n";

  const auto section = [&](const char* label, const std::vector<std::size_t>& rows,
                           double threshold) {
    out << label << " (threshold " << format_double(threshold) << "): " << rows.size()
        << " flagged";
    if (!rows.empty()) {
      out << ':';
      for (std::size_t i : rows) out << ' ' << curve_name(sample, i);
    }
    out << '\n';
  };
  section("magnitude", report.magnitude_outliers, report.magnitude_threshold);
  section("amplitude", report.amplitude_outliers, report.amplitude_threshold);
  section("shape", report.shape_outliers, report.shape_threshold);

  out << "union: " << report.union_outliers.size() << " flagged";
  if (!report.union_outliers.empty()) {
    out << ':';
    for (std::size_t i : report.union_outliers) out << ' ' << curve_name(sample, i);
  }
  out << '\n';

  const std::vector<std::size_t> selected = selected_flags(report, scheme);
  out << "flagged (" << flag_scheme_name(scheme) << "): " << selected.size();
  if (!selected.empty()) {
    out << ':';
    for (std::size_t i : selected) out << ' ' << curve_name(sample, i);
  }
  out << '\n';

  if (!report.degenerate.empty()) {
    out << "degenerate:";
    for (std::size_t i : report.degenerate) out << ' ' << curve_name(sample, i);
    out << '\n';
  }
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string eval_to_csv(const EvalResult& result) {
  std::ostringstream out;
  out << "model,method,tpr_mean,tpr_sd,fpr_mean,fpr_sd\n";
  for (const CellResult& c : result.cells) {
    out << c.model << ',' << c.method << ',';
    if (c.tpr_mean)
      out << format_double(*c.tpr_mean) << ',' << format_double(*c.tpr_sd);
    else
      out << "-,-";
    out << ',' << format_double(c.fpr_mean) << ',' << format_double(c.fpr_sd) << '\n';
  }
  return out.str();
}

std::string eval_to_json(const EvalResult& result) {
  ordered_json cells = ordered_json::array();
  for (const CellResult& c : result.cells) {
    ordered_json cell;
    cell["model"] = c.model;
    cell["method"] = c.method;
    if (c.tpr_mean) {
      cell["tpr_mean"] = *c.tpr_mean;
      cell["tpr_sd"] = *c.tpr_sd;
    } else {
      cell["tpr_mean"] = nullptr;
      cell["tpr_sd"] = nullptr;
    }
    cell["fpr_mean"] = c.fpr_mean;
    cell["fpr_sd"] = c.fpr_sd;
    cells.push_back(std::move(cell));
  }
  ordered_json root;
  root["cells"] = std::move(cells);
  return root.dump(2) + "\n";
}

std::string timing_to_csv(const std::vector<TimingRecord>& records) {
  std::ostringstream out;
  out << "method,n,d,median_seconds,runs\n";
  for (const TimingRecord& r : records)
    out << r.method << ',' << r.n << ',' << r.d << ',' << format_double(r.median_seconds)
        << ',' << r.runs << '\n';
  return out.str();
}

}  // namespace muod
