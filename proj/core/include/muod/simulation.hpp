#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "muod/functional_sample.hpp"
#include "muod/matrix.hpp"
#include "muod/rng.hpp"

namespace muod {

// Synthetic-data request. Models 1 through 8 share a main process of smooth
// trend plus Gaussian-process noise and differ in their contamination:
//   1: clean (never any outliers)     5: covariance-changed noise
//   2: constant vertical shift +-8    6: added sine wave, random phase
//   3: short spike of width 0.05      7: sine/cosine amplitude change
//   4: reversed asymmetric trend      8: mixture of 2, 3, 5 and 6
// Models 1 to 6 and 8 live on [0, 1], Model 7 on [0, 2*pi]; grids are d
// equidistant points including both endpoints.
struct SimulationSpec {
  int model = 1;
  std::size_t n = 1;
  std::size_t d = 2;
  double alpha = 0.0;      // contamination rate in [0, 1)
  double nu = 1.0;         // noise-variance scale, models 2/3/4/6 only
  std::uint64_t seed = 0;
  double m7_lo = 1.5;      // Model 7 contamination amplitude range for p, q
  double m7_hi = 2.5;
};

// Drawn parameters behind one generated curve, keyed by symbol name:
// "k", "T", "theta", "a", "b", "p", "q", "u", "submodel".
struct CurveDetail {
  std::size_t index = 0;
  std::map<std::string, double> params;
};

struct LabeledSample {
  FunctionalSample sample;
  std::vector<bool> is_outlier;      // exactly round(alpha*n) true entries
  std::vector<CurveDetail> detail;   // every outlier; Model 7 also records
                                     // the main curves' (a, b)
};

using Kernel = std::function<double(double, double)>;

// scale * exp(-|t-s|): the baseline noise covariance.
Kernel exp_kernel(double scale = 1.0);
// 0.3 * exp(-|t-s|/0.3): Model 4 noise.
Kernel model4_kernel();
// 5 * exp(-2*|t-s|^0.5): Model 5 contamination noise.
Kernel model5_kernel();

// Reusable Cholesky factor of a kernel evaluated on a grid. Factorization
// adds escalating diagonal jitter (1e-12 up to 1e-6, x10 steps) when the
// matrix is numerically semi-definite and throws NumericalFailure when even
// the largest jitter fails.
class GpFactor {
 public:
  GpFactor(const Kernel& cov, const std::vector<double>& grid);
  std::size_t dim() const { return d_; }
  // One exact zero-mean multivariate normal draw; consumes d normals.
  void draw(Rng& rng, std::span<double> out) const;

 private:
  std::size_t d_ = 0;
  std::vector<double> chol_;  // lower triangle, row-major d x d
};

// `count` exact zero-mean Gaussian-process draws on the grid, one per row.
Matrix gp_sample(const Kernel& cov, const std::vector<double>& grid,
                 std::size_t count, Rng& rng);

// Generates a labeled sample. Deterministic: equal SimulationSpec values
// (seed included) always produce the same bits. Outlier rows are a uniform
// random subset of positions; each row's random parameters are drawn in a
// fixed documented order (position set first, then per row ascending:
// contamination parameters, then the noise draw).
LabeledSample generate(const SimulationSpec& spec);

}  // namespace muod
