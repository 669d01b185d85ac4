#include <doctest.h>

#include <cmath>
#include <vector>

#include "muod/errors.hpp"
#include "muod/functional_sample.hpp"
#include "muod/matrix.hpp"
#include "muod/rng.hpp"

#include "oracle.hpp"

using namespace muod;

namespace {

Matrix make(std::size_t rows, std::size_t cols, std::vector<double> data) {
  Matrix m;
  m.rows = rows;
  m.cols = cols;
  m.data = std::move(data);
  return m;
}

}  // namespace

TEST_CASE("curve_stats on a constant curve is exactly zero variance") {
  const std::vector<double> x{1.0, 1.0, 1.0, 1.0};
  const CurveStats st = curve_stats(x);
  CHECK(st.mean == 1.0);
  CHECK(st.sd == 0.0);
  CHECK(st.var == 0.0);
}

TEST_CASE("curve_stats hand case") {
  const std::vector<double> x{0.0, 2.0};
  const CurveStats st = curve_stats(x);
  CHECK(st.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(st.var == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(st.sd == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("curve_stats matches the compensated oracle on random data") {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(10);
    for (double& v : x) v = rng.uniform(-5.0, 5.0);
    const CurveStats st = curve_stats(x);
    const oracle::Stats os = oracle::stats(x);
    CHECK(st.mean == doctest::Approx(os.mean).epsilon(1e-12));
    CHECK(st.var == doctest::Approx(os.var).epsilon(1e-12));
    CHECK(st.sd == doctest::Approx(os.sd).epsilon(1e-12));
  }
}

TEST_CASE("curve_stats zero sd exactly when max equals min") {
  // Tiny spread must not collapse to zero, equal values must.
  const std::vector<double> tiny{1.0, 1.0 + 1e-15, 1.0, 1.0};
  CHECK(curve_stats(tiny).sd > 0.0);
  const std::vector<double> flat{-3.5, -3.5, -3.5};
  CHECK(curve_stats(flat).sd == 0.0);
}

TEST_CASE("curve_stats rejects short and non-finite input") {
  CHECK_THROWS_AS(curve_stats(std::vector<double>{1.0}), InvalidData);
  CHECK_THROWS_AS(curve_stats(std::vector<double>{1.0, std::nan("")}), InvalidData);
  CHECK_THROWS_AS(curve_stats(std::vector<double>{1.0, INFINITY}), InvalidData);
}

TEST_CASE("FunctionalSample validates shape, grid and ids") {
  CHECK_NOTHROW(FunctionalSample(make(2, 2, {1, 2, 3, 4})));
  // one evaluation point is not a curve
  CHECK_THROWS_AS(FunctionalSample(make(2, 1, {1, 2})), InvalidData);
  // non-finite cell
  CHECK_THROWS_AS(FunctionalSample(make(2, 2, {1, 2, std::nan(""), 4})), InvalidData);
  // grid must strictly increase and match d
  CHECK_THROWS_AS(FunctionalSample(make(1, 3, {1, 2, 3}), std::vector<double>{0.0, 0.0, 1.0}),
                  InvalidData);
  CHECK_THROWS_AS(FunctionalSample(make(1, 3, {1, 2, 3}), std::vector<double>{0.0, 1.0}),
                  InvalidData);
  // ids must match n
  CHECK_THROWS_AS(FunctionalSample(make(2, 2, {1, 2, 3, 4}), std::nullopt,
                                   std::vector<std::string>{"a"}),
                  InvalidData);
}

TEST_CASE("FunctionalSample reports grid spacing") {
  const FunctionalSample uniform(make(1, 3, {1, 2, 3}), std::vector<double>{0.0, 0.5, 1.0});
  CHECK(uniform.grid_equidistant());
  const FunctionalSample skewed(make(1, 3, {1, 2, 3}), std::vector<double>{0.0, 0.1, 1.0});
  CHECK_FALSE(skewed.grid_equidistant());
  const FunctionalSample none(make(1, 3, {1, 2, 3}));
  CHECK(none.grid_equidistant());
}

TEST_CASE("Matrix row view aliases storage") {
  const Matrix m = make(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m(1, 2) == 6.0);
  const auto r = m.row(1);
  CHECK(r.size() == 3);
  CHECK(r[0] == 4.0);
}
