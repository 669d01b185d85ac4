#include "muod/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>

#include "muod/errors.hpp"

namespace muod {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> equidistant_grid(double lo, double hi, std::size_t d) {
  std::vector<double> g(d);
  for (std::size_t k = 0; k < d; ++k) {
    g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(d - 1);
  }
  return g;
}

void validate(const SimulationSpec& spec) {
  if (spec.model < 1 || spec.model > 8)
    throw InvalidSpec("generate: model must be 1..8, got " + std::to_string(spec.model));
  if (spec.n < 1) throw InvalidSpec("generate: n must be at least 1");
  if (spec.d < 2) throw InvalidSpec("generate: d must be at least 2");
  if (!(spec.alpha >= 0.0 && spec.alpha < 1.0))
    throw InvalidSpec("generate: alpha must lie in [0, 1)");
  if (!(spec.nu > 0.0)) throw InvalidSpec("generate: nu must be positive");
  if (spec.nu != 1.0 && spec.model != 2 && spec.model != 3 && spec.model != 4 &&
      spec.model != 6) {
    throw InvalidSpec("generate: the noise scale nu is defined for models 2, 3, 4, 6 only");
  }
  if (!(spec.m7_lo <= spec.m7_hi))
    throw InvalidSpec("generate: Model 7 amplitude range is empty");
}

}  // namespace

Kernel exp_kernel(double scale) {
  return [scale](double s, double t) { return scale * std::exp(-std::abs(t - s)); };
}

Kernel model4_kernel() {
  return [](double s, double t) { return 0.3 * std::exp(-std::abs(s - t) / 0.3); };
}

Kernel model5_kernel() {
  return [](double s, double t) {
    return 5.0 * std::exp(-2.0 * std::sqrt(std::abs(t - s)));
  };
}

GpFactor::GpFactor(const Kernel& cov, const std::vector<double>& grid) : d_(grid.size()) {
  if (d_ < 1) throw InvalidData("gp factor: empty grid");
  Eigen::MatrixXd k(d_, d_);
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = cov(grid[i], grid[j]);
      if (!std::isfinite(v)) throw InvalidData("gp factor: kernel produced a non-finite value");
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }

  // |t-s| kernels on fine grids are numerically semi-definite; escalate
  // diagonal jitter from 1e-12 to 1e-6 before giving up.
  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd attempt = k;
    if (jitter > 0.0) attempt.diagonal().array() += jitter;
    const Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success) {
      const Eigen::MatrixXd l = llt.matrixL();
      chol_.assign(d_ * d_, 0.0);
      for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          chol_[i * d_ + j] = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
      return;
    }
    if (jitter == 0.0) {
      jitter = 1e-12;
    } else if (jitter < 1e-6) {
      jitter *= 10.0;
    } else {
      throw NumericalFailure(
          "gp factor: covariance not factorizable even with 1e-6 diagonal jitter");
    }
  }
}

void GpFactor::draw(Rng& rng, std::span<double> out) const {
  if (out.size() != d_) throw InvalidData("gp draw: output length mismatch");
  // out = L z with z standard normal, z drawn first so exactly d normals are
  // consumed per curve regardless of the factor's structure.
  std::vector<double> z(d_);
  for (std::size_t t = 0; t < d_; ++t) z[t] = rng.normal();
  for (std::size_t i = 0; i < d_; ++i) {
    const double* row = chol_.data() + i * d_;
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += row[j] * z[j];
    out[i] = s;
  }
}

Matrix gp_sample(const Kernel& cov, const std::vector<double>& grid, std::size_t count,
                 Rng& rng) {
  const GpFactor factor(cov, grid);
  Matrix m(count, grid.size());
  for (std::size_t i = 0; i < count; ++i) factor.draw(rng, m.row(i));
  return m;
}

namespace {

// Contamination recipe of one of the mixture's source models (2, 3, 5, 6);
// used directly by those models and drawn uniformly by Model 8.
void fill_contamination(int model, const std::vector<double>& grid, Rng& rng,
                        const GpFactor& noise_exp, const GpFactor& noise_m5,
                        std::span<double> row, CurveDetail& detail) {
  const std::size_t d = grid.size();
  switch (model) {
    case 2: {
      const double k = rng.uniform_int(0, 1) == 0 ? -1.0 : 1.0;
      detail.params["k"] = k;
      noise_exp.draw(rng, row);
      for (std::size_t t = 0; t < d; ++t) row[t] += 4.0 * grid[t] + 8.0 * k;
      return;
    }
    case 3: {
      const double k = rng.uniform_int(0, 1) == 0 ? -1.0 : 1.0;
      const double start = rng.uniform(0.1, 0.9);
      detail.params["k"] = k;
      detail.params["T"] = start;
      noise_exp.draw(rng, row);
      for (std::size_t t = 0; t < d; ++t) {
        const bool spike = grid[t] >= start && grid[t] <= start + 0.05;
        row[t] += 4.0 * grid[t] + (spike ? 8.0 * k : 0.0);
      }
      return;
    }
    case 5: {
      noise_m5.draw(rng, row);
      for (std::size_t t = 0; t < d; ++t) row[t] += 4.0 * grid[t];
      return;
    }
    case 6: {
      const double theta = rng.uniform(0.25, 0.75);
      detail.params["theta"] = theta;
      noise_exp.draw(rng, row);
      for (std::size_t t = 0; t < d; ++t) {
        row[t] += 4.0 * grid[t] + 2.0 * std::sin(4.0 * (grid[t] + theta) * kPi);
      }
      return;
    }
    default:
      throw InvalidSpec("generate: no contamination recipe for model " + std::to_string(model));
  }
}

}  // namespace

LabeledSample generate(const SimulationSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  const std::size_t d = spec.d;
  const std::vector<double> grid =
      spec.model == 7 ? equidistant_grid(0.0, 2.0 * kPi, d) : equidistant_grid(0.0, 1.0, d);
  // The noise process lives on the unit interval for every model; model 7
  // only stretches the sinusoid's angle, not the noise correlation length.
  const std::vector<double> noise_grid =
      spec.model == 7 ? equidistant_grid(0.0, 1.0, d) : grid;

  const std::size_t n_out =
      spec.model == 1
          ? 0
          : static_cast<std::size_t>(std::llround(spec.alpha * static_cast<double>(n)));

  // Base noise of the main process. nu != 1 swaps in the scaled exponential
  // kernel for both main and contamination draws (models 2, 3, 4, 6).
  Kernel base_kernel = exp_kernel(1.0);
  if (spec.nu != 1.0) {
    base_kernel = exp_kernel(spec.nu);
  } else if (spec.model == 4) {
    base_kernel = model4_kernel();
  }
  const GpFactor noise_base(base_kernel, noise_grid);

  // Model 5's contamination kernel (also one of Model 8's source models).
  const bool needs_m5 = spec.model == 5 || spec.model == 8;
  const GpFactor noise_m5(needs_m5 ? model5_kernel() : exp_kernel(1.0),
                          needs_m5 ? grid : std::vector<double>{0.0});

  Rng rng(spec.seed);
  const std::vector<std::size_t> positions = rng.sample_without_replacement(n, n_out);
  std::vector<bool> is_outlier(n, false);
  for (const std::size_t p : positions) is_outlier[p] = true;

  Matrix values(n, d);
  std::vector<CurveDetail> detail;

  for (std::size_t i = 0; i < n; ++i) {
    const auto row = values.row(i);
    if (is_outlier[i]) {
      CurveDetail cd;
      cd.index = i;
      switch (spec.model) {
        case 2:
        case 3:
        case 5:
        case 6:
          fill_contamination(spec.model, grid, rng, noise_base, noise_m5, row, cd);
          break;
        case 4: {
          noise_base.draw(rng, row);
          for (std::size_t t = 0; t < d; ++t) {
            const double g = grid[t];
            row[t] += 30.0 * std::pow(g, 1.5) * (1.0 - g);
          }
          break;
        }
        case 7: {
          const double u = static_cast<double>(rng.uniform_int(0, 1));
          const double p = rng.uniform(spec.m7_lo, spec.m7_hi);
          const double q = rng.uniform(spec.m7_lo, spec.m7_hi);
          cd.params["u"] = u;
          cd.params["p"] = p;
          cd.params["q"] = q;
          noise_base.draw(rng, row);
          for (std::size_t t = 0; t < d; ++t) {
            const double g = grid[t];
            row[t] += (9.0 * std::sin(g) + 9.0 * std::cos(g)) * (1.0 - u) +
                      (p * std::sin(g) + q * std::cos(g)) * u;
          }
          break;
        }
        case 8: {
          static constexpr int kSources[4] = {2, 3, 5, 6};
          const int sub = kSources[rng.uniform_int(0, 3)];
          cd.params["submodel"] = static_cast<double>(sub);
          fill_contamination(sub, grid, rng, noise_base, noise_m5, row, cd);
          break;
        }
        default:
          throw InvalidSpec("generate: model 1 cannot have outliers");
      }
      detail.push_back(std::move(cd));
    } else {
      switch (spec.model) {
        case 4: {
          noise_base.draw(rng, row);
          for (std::size_t t = 0; t < d; ++t) {
            const double g = grid[t];
            row[t] += 30.0 * g * std::pow(1.0 - g, 1.5);
          }
          break;
        }
        case 7: {
          const double a = rng.uniform(3.0, 8.0);
          const double b = rng.uniform(3.0, 8.0);
          CurveDetail cd;
          cd.index = i;
          cd.params["a"] = a;
          cd.params["b"] = b;
          detail.push_back(std::move(cd));
          noise_base.draw(rng, row);
          for (std::size_t t = 0; t < d; ++t) {
            const double g = grid[t];
            row[t] += a * std::sin(g) + b * std::cos(g);
          }
          break;
        }
        default: {
          noise_base.draw(rng, row);
          for (std::size_t t = 0; t < d; ++t) row[t] += 4.0 * grid[t];
          break;
        }
      }
    }
  }

  return LabeledSample{FunctionalSample(std::move(values), grid), std::move(is_outlier),
                       std::move(detail)};
}

}  // namespace muod
