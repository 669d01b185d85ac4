#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "muod/errors.hpp"
#include "muod/evaluation.hpp"

using namespace muod;

namespace {

std::vector<bool> truth_from_bits(unsigned bits, std::size_t n) {
  std::vector<bool> t(n, false);
  for (std::size_t i = 0; i < n; ++i) t[i] = (bits >> i) & 1u;
  return t;
}

std::vector<std::size_t> flags_from_bits(unsigned bits, std::size_t n) {
  std::vector<std::size_t> f;
  for (std::size_t i = 0; i < n; ++i)
    if ((bits >> i) & 1u) f.push_back(i);
  return f;
}

}  // namespace

TEST_CASE("rate arithmetic hand cases") {
  // three outliers, two caught, one false alarm among seven clean curves
  const std::vector<bool> truth{true, true, true, false, false, false, false, false, false, false};
  const Rates r = tpr_fpr({0, 1, 5}, truth);
  REQUIRE(r.tpr.has_value());
  CHECK(*r.tpr == doctest::Approx(200.0 / 3.0).epsilon(1e-15));
  CHECK(r.fpr == doctest::Approx(100.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("eighty percent recall case") {
  std::vector<bool> truth(35, false);
  for (std::size_t i = 0; i < 5; ++i) truth[i] = true;
  const Rates r = tpr_fpr({0, 1, 2, 3, 7}, truth);
  CHECK(*r.tpr == doctest::Approx(80.0).epsilon(1e-15));
  CHECK(r.fpr == doctest::Approx(100.0 / 30.0).epsilon(1e-15));
}

TEST_CASE("no outliers means no recall to speak of") {
  const std::vector<bool> truth(8, false);
  const Rates r = tpr_fpr({2, 4}, truth);
  CHECK_FALSE(r.tpr.has_value());
  CHECK(r.fpr == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("empty flag set") {
  const std::vector<bool> truth{true, false, false, false};
  const Rates r = tpr_fpr({}, truth);
  CHECK(*r.tpr == 0.0);
  CHECK(r.fpr == 0.0);
}

TEST_CASE("out-of-range flag is invalid") {
  CHECK_THROWS_AS(tpr_fpr({4}, std::vector<bool>(4, false)), InvalidData);
}

TEST_CASE("rates agree with exhaustive counting on every small instance") {
  const std::size_t n = 6;
  for (unsigned tb = 0; tb < (1u << n); ++tb) {
    const std::vector<bool> truth = truth_from_bits(tb, n);
    for (unsigned fb = 0; fb < (1u << n); ++fb) {
      const std::vector<std::size_t> flags = flags_from_bits(fb, n);
      std::size_t hit = 0, miss_alarm = 0, n_out = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (truth[i]) ++n_out;
        const bool flagged = (fb >> i) & 1u;
        if (flagged && truth[i]) ++hit;
        if (flagged && !truth[i]) ++miss_alarm;
      }
      const Rates r = tpr_fpr(flags, truth);
      if (n_out == 0) {
        CHECK_FALSE(r.tpr.has_value());
      } else {
        CHECK(*r.tpr == doctest::Approx(100.0 * static_cast<double>(hit) /
                                        static_cast<double>(n_out)).epsilon(1e-14));
      }
      if (n_out < n)
        CHECK(r.fpr == doctest::Approx(100.0 * static_cast<double>(miss_alarm) /
                                       static_cast<double>(n - n_out)).epsilon(1e-14));
    }
  }
}

TEST_CASE("presets resolve and unknown names do not") {
  CHECK(method_preset("fst").kind == IndexMethod::Fast);
  CHECK(method_preset("fst").scheme == FlagScheme::Union);
  CHECK(method_preset("fstl1").median == MedianKind::L1Median);
  CHECK(method_preset("fstmg").scheme == FlagScheme::Magnitude);
  CHECK(method_preset("fstam").scheme == FlagScheme::Amplitude);
  CHECK(method_preset("fstsh").scheme == FlagScheme::Shape);
  CHECK(method_preset("sf").kind == IndexMethod::Semifast);
  CHECK(method_preset("sf").p == 0.5);
  CHECK(method_preset("sf25").p == 0.25);
  CHECK(method_preset("muod").kind == IndexMethod::Muod);
  CHECK(method_preset("muod").cutoff == CutoffKind::Tangent);
  CHECK_THROWS_AS(method_preset("nope"), InvalidSpec);
}

TEST_CASE("scheme selection follows set arithmetic") {
  OutlierReport rep;
  rep.magnitude_outliers = {0, 2, 5};
  rep.amplitude_outliers = {2, 3, 5};
  rep.shape_outliers = {1, 2, 5, 7};
  rep.union_outliers = {0, 1, 2, 3, 5, 7};
  CHECK(selected_flags(rep, FlagScheme::Union) == rep.union_outliers);
  CHECK(selected_flags(rep, FlagScheme::Magnitude) == rep.magnitude_outliers);
  CHECK(selected_flags(rep, FlagScheme::AllTypes) == std::vector<std::size_t>{2, 5});
}

TEST_CASE("study runs are deterministic and statistically coherent") {
  StudySpec spec;
  spec.models = {1, 2};
  spec.methods = {method_preset("fst"), method_preset("muod")};
  spec.n = 60;
  spec.d = 20;
  spec.alpha = 0.1;
  spec.replications = 8;
  spec.base_seed = 271828;
  spec.threads = 1;

  const EvalResult a = run_study(spec);
  spec.threads = 3;  // worker count must not leak into the results
  const EvalResult b = run_study(spec);
  REQUIRE(a.cells.size() == 4);
  REQUIRE(b.cells.size() == 4);
  for (std::size_t c = 0; c < a.cells.size(); ++c) {
    CHECK(a.cells[c].model == b.cells[c].model);
    CHECK(a.cells[c].method == b.cells[c].method);
    CHECK(a.cells[c].tpr_raw == b.cells[c].tpr_raw);
    CHECK(a.cells[c].fpr_raw == b.cells[c].fpr_raw);
  }

  for (const CellResult& cell : a.cells) {
    // the first model has no outliers, so no recall is defined
    if (cell.model == 1) {
      CHECK_FALSE(cell.tpr_mean.has_value());
      CHECK(cell.tpr_raw.empty());
    } else {
      REQUIRE(cell.tpr_mean.has_value());
      REQUIRE(cell.tpr_raw.size() == 8);
      // aggregate must reproduce from the raw rates
      double mean = 0.0;
      for (double v : cell.tpr_raw) mean += v;
      mean /= 8.0;
      CHECK(*cell.tpr_mean == doctest::Approx(mean).epsilon(1e-12));
      double ss = 0.0;
      for (double v : cell.tpr_raw) ss += (v - mean) * (v - mean);
      CHECK(*cell.tpr_sd == doctest::Approx(std::sqrt(ss / 7.0)).epsilon(1e-12));
      const auto [lo, hi] = std::minmax_element(cell.tpr_raw.begin(), cell.tpr_raw.end());
      CHECK(*cell.tpr_mean >= *lo);
      CHECK(*cell.tpr_mean <= *hi);
    }
    REQUIRE(cell.fpr_raw.size() == 8);
  }
}

TEST_CASE("single replication collapses spread to zero") {
  StudySpec spec;
  spec.models = {2};
  spec.methods = {method_preset("fst")};
  spec.n = 40;
  spec.d = 15;
  spec.replications = 1;
  spec.base_seed = 5;
  const EvalResult r = run_study(spec);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].tpr_raw.size() == 1);
  CHECK(*r.cells[0].tpr_mean == r.cells[0].tpr_raw[0]);
  CHECK(*r.cells[0].tpr_sd == 0.0);
  CHECK(r.cells[0].fpr_sd == 0.0);
}

TEST_CASE("study validation fails fast with the configuration error kept") {
  StudySpec spec;
  spec.models = {12};
  spec.methods = {method_preset("fst")};
  spec.replications = 2;
  CHECK_THROWS_AS(run_study(spec), InvalidSpec);
  spec.models = {};
  CHECK_THROWS_AS(run_study(spec), InvalidSpec);
  spec.models = {2};
  spec.replications = 0;
  CHECK_THROWS_AS(run_study(spec), InvalidSpec);
}

TEST_CASE("timing records carry medians and the slope fit recovers exponents") {
  std::vector<TimingRecord> linear;
  for (std::size_t n : {100ul, 200ul, 400ul, 800ul}) {
    TimingRecord r;
    r.method = "x";
    r.n = n;
    r.d = 10;
    r.median_seconds = 1e-3 * static_cast<double>(n);
    r.runs = 3;
    linear.push_back(r);
  }
  CHECK(fit_loglog_slope(linear) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<TimingRecord> quadratic(linear);
  for (TimingRecord& r : quadratic)
    r.median_seconds = 1e-6 * static_cast<double>(r.n) * static_cast<double>(r.n);
  CHECK(fit_loglog_slope(quadratic) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_loglog_slope({linear[0]}), InvalidData);
}

TEST_CASE("pipeline timing smoke run") {
  BenchmarkSpec spec;
  spec.method = method_preset("fst");
  spec.sizes = {{200, 20}, {400, 20}};
  spec.runs = 2;
  spec.seed = 9;
  const std::vector<TimingRecord> recs = benchmark(spec);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].n == 200);
  CHECK(recs[1].n == 400);
  for (const TimingRecord& r : recs) {
    CHECK(r.median_seconds > 0.0);
    CHECK(r.runs == 2);
    CHECK(r.method == "fst");
  }
}
