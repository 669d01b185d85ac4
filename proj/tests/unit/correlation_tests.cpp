#include <doctest.h>

#include <cmath>
#include <vector>

#include "muod/correlation.hpp"
#include "muod/errors.hpp"
#include "muod/rng.hpp"

#include "oracle.hpp"

using namespace muod;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t d, bool with_ties) {
  std::vector<double> x(d);
  for (double& v : x) v = with_ties ? std::round(rng.uniform(-3.0, 3.0)) : rng.uniform(-3.0, 3.0);
  return x;
}

}  // namespace

TEST_CASE("a curve correlates perfectly with itself under every kind") {
  const std::vector<double> x{0.3, 1.7, -2.0, 4.4, 0.0};
  for (CorrelationKind kind : {CorrelationKind::Pearson, CorrelationKind::Spearman,
                               CorrelationKind::KendallTau, CorrelationKind::Cosine})
    CHECK(correlation(x, x, kind) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negating flips the sign for pearson") {
  const std::vector<double> x{1.0, 2.0, 5.0, -1.0};
  std::vector<double> y(x);
  for (double& v : y) v = -v;
  CHECK(correlation(x, y, CorrelationKind::Pearson) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(correlation(x, y, CorrelationKind::KendallTau) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("kendall hand value with one swap") {
  // one discordant pair among six
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{1.0, 3.0, 2.0, 4.0};
  CHECK(correlation(x, y, CorrelationKind::KendallTau) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("fast kendall equals exhaustive pair counting, ties included") {
  Rng rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t d = 5 + static_cast<std::size_t>(rng.uniform_int(0, 25));
    const bool ties = rep % 2 == 0;
    const std::vector<double> x = random_vector(rng, d, ties);
    const std::vector<double> y = random_vector(rng, d, ties);
    double want;
    try {
      want = oracle::kendall_exhaustive(x, y);
    } catch (...) {
      continue;  // fully tied draw, nothing to compare
    }
    CHECK(correlation(x, y, CorrelationKind::KendallTau) ==
          doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("spearman and cosine match their oracles") {
  Rng rng(555);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 4 + static_cast<std::size_t>(rng.uniform_int(0, 20));
    const std::vector<double> x = random_vector(rng, d, rep % 3 == 0);
    const std::vector<double> y = random_vector(rng, d, rep % 3 == 0);
    try {
      const double ws = oracle::spearman(x, y);
      CHECK(correlation(x, y, CorrelationKind::Spearman) ==
            doctest::Approx(ws).epsilon(1e-11));
    } catch (...) {
    }
    try {
      const double wc = oracle::cosine(x, y);
      CHECK(correlation(x, y, CorrelationKind::Cosine) ==
            doctest::Approx(wc).epsilon(1e-11));
    } catch (...) {
    }
  }
}

TEST_CASE("pearson matches the compensated oracle") {
  Rng rng(808);
  for (int rep = 0; rep < 30; ++rep) {
    const std::vector<double> x = random_vector(rng, 12, false);
    const std::vector<double> y = random_vector(rng, 12, false);
    CHECK(correlation(x, y, CorrelationKind::Pearson) ==
          doctest::Approx(oracle::pearson(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("all kinds stay within [-1, 1]") {
  Rng rng(4242);
  for (int rep = 0; rep < 25; ++rep) {
    const std::vector<double> x = random_vector(rng, 9, rep % 2 == 0);
    const std::vector<double> y = random_vector(rng, 9, rep % 2 == 0);
    for (CorrelationKind kind : {CorrelationKind::Pearson, CorrelationKind::Spearman,
                                 CorrelationKind::KendallTau, CorrelationKind::Cosine}) {
      double r;
      try {
        r = correlation(x, y, kind);
      } catch (...) {
        continue;
      }
      CHECK(r <= 1.0 + 1e-12);
      CHECK(r >= -1.0 - 1e-12);
    }
  }
}

TEST_CASE("constant input is rejected where spread is required") {
  const std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(correlation(flat, x, CorrelationKind::Pearson), DegenerateCurve);
  CHECK_THROWS_AS(correlation(x, flat, CorrelationKind::Spearman), DegenerateCurve);
  CHECK_THROWS_AS(correlation(x, flat, CorrelationKind::KendallTau), DegenerateCurve);
  const std::vector<double> zero{0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(correlation(x, zero, CorrelationKind::Cosine), DegenerateCurve);
  // a nonzero constant has spread zero but norm nonzero: cosine is defined
  CHECK_NOTHROW(correlation(x, flat, CorrelationKind::Cosine));
}

TEST_CASE("length mismatch is invalid") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 2.0};
  CHECK_THROWS_AS(correlation(x, y, CorrelationKind::Pearson), InvalidData);
}

TEST_CASE("average ranks break ties by averaging positions") {
  const std::vector<double> x{3.0, 1.0, 3.0, 2.0};
  const std::vector<double> r = average_ranks(x);
  CHECK(r == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}
