// Command-line front end: detect outliers in CSV curves, generate synthetic
// samples, run accuracy studies and timing ladders.
//
// Exit codes: 0 success, 1 unexpected failure, 2 input or configuration
// error, 3 numerical or degeneracy failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <system_error>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "muod/csv.hpp"
#include "muod/cutoff.hpp"
#include "muod/errors.hpp"
#include "muod/evaluation.hpp"
#include "muod/indices.hpp"
#include "muod/serialize.hpp"
#include "muod/simulation.hpp"

namespace {

using namespace muod;

enum class OutputFormat { Json, Csv, Text };

// Shared CheckedTransformer tables; the CLI names match the library enums.
const std::map<std::string, IndexMethod> kMethodNames{
    {"fast", IndexMethod::Fast},
    {"semifast", IndexMethod::Semifast},
    {"muod", IndexMethod::Muod}};
const std::map<std::string, MedianKind> kMedianNames{
    {"pointwise", MedianKind::PointwiseMedian}, {"l1", MedianKind::L1Median}};
const std::map<std::string, CorrelationKind> kCorrelationNames{
    {"pearson", CorrelationKind::Pearson},
    {"spearman", CorrelationKind::Spearman},
    {"kendall", CorrelationKind::KendallTau},
    {"cosine", CorrelationKind::Cosine}};
const std::map<std::string, CutoffKind> kCutoffNames{
    {"boxplot", CutoffKind::Boxplot}, {"tangent", CutoffKind::Tangent}};
const std::map<std::string, FlagScheme> kSchemeNames{
    {"union", FlagScheme::Union},
    {"magnitude", FlagScheme::Magnitude},
    {"amplitude", FlagScheme::Amplitude},
    {"shape", FlagScheme::Shape},
    {"all-types", FlagScheme::AllTypes}};
const std::map<std::string, OutputFormat> kFormatNames{
    {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}, {"text", OutputFormat::Text}};

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw InvalidData("cannot write " + output_path);
  out << text;
  if (!out) throw InvalidData("write failed for " + output_path);
}

struct DetectConfig {
  std::string input;
  IndexMethod method = IndexMethod::Fast;
  MedianKind median = MedianKind::PointwiseMedian;
  CorrelationKind correlation = CorrelationKind::Pearson;
  CutoffKind cutoff = CutoffKind::Boxplot;
  double p = 0.5;
  std::uint64_t seed = 0;
  FlagScheme scheme = FlagScheme::Union;
  OutputFormat format = OutputFormat::Json;
  std::string output;
  unsigned threads = 0;
  bool median_given = false;
  bool p_given = false;
};

void run_detect(const DetectConfig& cfg) {
  if (cfg.median_given && cfg.method != IndexMethod::Fast)
    throw InvalidSpec("--median applies to the fast method only");
  if (cfg.p_given && cfg.method != IndexMethod::Semifast)
    throw InvalidSpec("--p applies to the semifast method only");

  const FunctionalSample sample = read_curves_csv(cfg.input);

  IndexSet idx;
  switch (cfg.method) {
    case IndexMethod::Muod:
      idx = muod_indices(sample, cfg.correlation, cfg.threads);
      break;
    case IndexMethod::Semifast: {
      SemifastConfig sf;
      sf.p = cfg.p;
      sf.seed = cfg.seed;
      idx = semifast_indices(sample, sf, cfg.correlation, cfg.threads);
      break;
    }
    case IndexMethod::Fast:
      idx = fast_indices(sample, cfg.median, cfg.correlation, cfg.threads);
      break;
  }
  const OutlierReport report = classify(idx, cfg.cutoff);

  std::string text;
  switch (cfg.format) {
    case OutputFormat::Json: text = report_to_json(report, idx, sample, cfg.scheme); break;
    case OutputFormat::Csv: text = report_to_csv(report, idx, sample, cfg.scheme); break;
    case OutputFormat::Text: text = report_to_text(report, idx, sample, cfg.scheme); break;
  }
  emit(text, cfg.output);
}

struct SimulateConfig {
  SimulationSpec spec;
  std::string out_dir = ".";
};

void run_simulate(const SimulateConfig& cfg) {
  std::error_code dir_err;
  std::filesystem::create_directories(cfg.out_dir, dir_err);
  if (dir_err)
    throw muod::InvalidData("cannot create output directory " + cfg.out_dir + ": " +
                            dir_err.message());

  const LabeledSample data = generate(cfg.spec);

  // Re-wrap the values with integer ids so detect can echo meaningful names.
  std::vector<std::string> ids;
  ids.reserve(data.sample.n());
  for (std::size_t i = 0; i < data.sample.n(); ++i) ids.push_back(std::to_string(i));
  const FunctionalSample with_ids(data.sample.values(), data.sample.grid(), ids);

  std::vector<int> submodel(data.sample.n(), 0);
  for (const CurveDetail& cd : data.detail) {
    const auto it = cd.params.find("submodel");
    if (it != cd.params.end()) submodel[cd.index] = static_cast<int>(it->second);
  }

  write_curves_csv(cfg.out_dir + "/curves.csv", with_ids);
  write_labels_csv(cfg.out_dir + "/labels.csv", ids, data.is_outlier, submodel);
}

struct EvaluateConfig {
  StudySpec study;
  std::vector<std::string> method_names{"fst"};
  OutputFormat format = OutputFormat::Csv;
  std::string output;
};

void run_evaluate(EvaluateConfig& cfg) {
  for (const std::string& name : cfg.method_names)
    cfg.study.methods.push_back(method_preset(name));
  const EvalResult result = run_study(cfg.study);
  emit(cfg.format == OutputFormat::Json ? eval_to_json(result) : eval_to_csv(result),
       cfg.output);
}

struct BenchConfig {
  BenchmarkSpec spec;
  std::string method_name = "fst";
  std::vector<std::size_t> ns{1000, 2000, 4000};
  std::size_t d = 100;
  std::string output;
  bool print_slope = false;
};

void run_bench(BenchConfig& cfg) {
  cfg.spec.method = method_preset(cfg.method_name);
  for (std::size_t n : cfg.ns) cfg.spec.sizes.emplace_back(n, cfg.d);
  const std::vector<TimingRecord> records = benchmark(cfg.spec);
  std::string text = timing_to_csv(records);
  if (cfg.print_slope && records.size() >= 2)
    text += "# loglog_slope," + format_double(fit_loglog_slope(records)) + "\n";
  emit(text, cfg.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnitude, amplitude and shape outlier detection for functional data"};
  app.require_subcommand(1);

  DetectConfig det;
  CLI::App* detect = app.add_subcommand("detect", "Classify outliers in a CSV of curves");
  detect->add_option("input", det.input, "CSV file, one curve per row")
      ->required()
      ->envname("MUOD_INPUT");
  detect->add_option("--method", det.method, "Index family")
      ->transform(CLI::CheckedTransformer(kMethodNames))
      ->envname("MUOD_METHOD");
  detect->add_option("--median", det.median, "Reference median (fast method only)")
      ->transform(CLI::CheckedTransformer(kMedianNames))
      ->envname("MUOD_MEDIAN");
  detect->add_option("--correlation", det.correlation, "Correlation for the shape index")
      ->transform(CLI::CheckedTransformer(kCorrelationNames))
      ->envname("MUOD_CORRELATION");
  detect->add_option("--cutoff", det.cutoff, "Threshold rule")
      ->transform(CLI::CheckedTransformer(kCutoffNames))
      ->envname("MUOD_CUTOFF");
  detect->add_option("--p", det.p, "Reference subsample proportion (semifast only)")
      ->envname("MUOD_P");
  detect->add_option("--seed", det.seed, "Subsample seed (semifast only)")
      ->envname("MUOD_SEED");
  detect->add_option("--flag-scheme", det.scheme, "Which flag set counts as the outliers")
      ->transform(CLI::CheckedTransformer(kSchemeNames))
      ->envname("MUOD_FLAG_SCHEME");
  detect->add_option("--format", det.format, "Output shape")
      ->transform(CLI::CheckedTransformer(kFormatNames))
      ->envname("MUOD_FORMAT");
  detect->add_option("--output", det.output, "Write here instead of stdout")
      ->envname("MUOD_OUTPUT");
  detect->add_option("--threads", det.threads, "Worker threads (0 = machine parallelism)")
      ->envname("MUOD_THREADS");
  detect->callback([&] {
    det.median_given = detect->count("--median") > 0;
    det.p_given = detect->count("--p") > 0;
    run_detect(det);
  });

  SimulateConfig sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a labeled synthetic sample as CSV");
  simulate->add_option("--model", sim.spec.model, "Contamination model, 1 to 8")
      ->required()
      ->envname("MUOD_MODEL");
  simulate->add_option("--n", sim.spec.n, "Number of curves")->envname("MUOD_N");
  simulate->add_option("--d", sim.spec.d, "Points per curve")->envname("MUOD_D");
  simulate->add_option("--alpha", sim.spec.alpha, "Contamination rate in [0, 1)")
      ->envname("MUOD_ALPHA");
  simulate->add_option("--nu", sim.spec.nu, "Noise variance scale (models 2, 3, 4, 6)")
      ->envname("MUOD_NU");
  simulate->add_option("--seed", sim.spec.seed, "Generator seed")->envname("MUOD_SEED");
  simulate->add_option("--m7-lo", sim.spec.m7_lo, "Model 7 contamination amplitude low end")
      ->envname("MUOD_M7_LO");
  simulate->add_option("--m7-hi", sim.spec.m7_hi, "Model 7 contamination amplitude high end")
      ->envname("MUOD_M7_HI");
  simulate
      ->add_option("--out-dir", sim.out_dir, "Directory for curves.csv and labels.csv")
      ->envname("MUOD_OUT_DIR");
  simulate->callback([&] { run_simulate(sim); });

  EvaluateConfig ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Replicate detection accuracy across models");
  evaluate->add_option("--models", ev.study.models, "Model ids to evaluate")
      ->required()
      ->envname("MUOD_MODELS");
  evaluate->add_option("--methods", ev.method_names, "Method presets to compare")
      ->envname("MUOD_METHODS");
  evaluate->add_option("--n", ev.study.n, "Curves per replication")->envname("MUOD_N");
  evaluate->add_option("--d", ev.study.d, "Points per curve")->envname("MUOD_D");
  evaluate->add_option("--alpha", ev.study.alpha, "Contamination rate")
      ->envname("MUOD_ALPHA");
  evaluate->add_option("--nu", ev.study.nu, "Noise variance scale")->envname("MUOD_NU");
  evaluate->add_option("--reps", ev.study.replications, "Replications per model")
      ->envname("MUOD_REPS");
  evaluate->add_option("--seed", ev.study.base_seed, "Base seed of the replication ladder")
      ->envname("MUOD_SEED");
  evaluate->add_option("--threads", ev.study.threads, "Replication workers")
      ->envname("MUOD_THREADS");
  evaluate->add_option("--format", ev.format, "csv or json")
      ->transform(CLI::CheckedTransformer(kFormatNames))
      ->envname("MUOD_FORMAT");
  evaluate->add_option("--output", ev.output, "Write here instead of stdout")
      ->envname("MUOD_OUTPUT");
  evaluate->callback([&] { run_evaluate(ev); });

  BenchConfig be;
  CLI::App* bench = app.add_subcommand("bench", "Time the detection pipeline across sizes");
  bench->add_option("--method", be.method_name, "Method preset to time")
      ->envname("MUOD_METHOD");
  bench->add_option("--n", be.ns, "Sample sizes to time")->envname("MUOD_N");
  bench->add_option("--d", be.d, "Points per curve")->envname("MUOD_D");
  bench->add_option("--runs", be.spec.runs, "Repetitions per size (median is kept)")
      ->envname("MUOD_RUNS");
  bench->add_option("--alpha", be.spec.alpha, "Contamination rate of the timed data")
      ->envname("MUOD_ALPHA");
  bench->add_option("--seed", be.spec.seed, "Data seed")->envname("MUOD_SEED");
  bench->add_option("--threads", be.spec.threads, "Worker threads inside the pipeline")
      ->envname("MUOD_THREADS");
  bench->add_flag("--slope", be.print_slope, "Append the fitted log-log slope");
  bench->add_option("--output", be.output, "Write here instead of stdout")
      ->envname("MUOD_OUTPUT");
  bench->callback([&] { run_bench(be); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const InvalidData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidSpec& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateCurve& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateReference& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
