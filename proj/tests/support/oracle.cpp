#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

double kahan_sum(std::span<const double> x) {
  double s = 0.0, c = 0.0;
  for (double v : x) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double kahan_dot_centered(std::span<const double> x, double mx, std::span<const double> y,
                          double my) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = (x[i] - mx) * (y[i] - my);
    const double t = s + (v - c);
    c = (t - s) - (v - c);
    s = t;
  }
  return s;
}

}  // namespace

Stats stats(std::span<const double> x) {
  Stats st;
  // A constant vector has variance exactly zero; the two-pass estimate would
  // report ~1e-31 instead because the rounded mean misses the value by an ulp.
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mn == *mx) {
    st.mean = *mn;
    return st;
  }
  const auto n = static_cast<double>(x.size());
  st.mean = kahan_sum(x) / n;
  st.var = kahan_dot_centered(x, st.mean, x, st.mean) / n;
  if (st.var < 0.0) st.var = 0.0;
  st.sd = std::sqrt(st.var);
  return st;
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const Stats sx = stats(x), sy = stats(y);
  if (sx.sd == 0.0 || sy.sd == 0.0) throw std::runtime_error("constant input to pearson");
  const double cov = kahan_dot_centered(x, sx.mean, y, sy.mean) / static_cast<double>(x.size());
  return cov / (sx.sd * sy.sd);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  return pearson(rx, ry);
}

double cosine(std::span<const double> x, std::span<const double> y) {
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) throw std::runtime_error("zero vector in cosine");
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

double kendall_exhaustive(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;  // tied in both, counted in neither
      if (dx == 0.0)
        ++tied_x;
      else if (dy == 0.0)
        ++tied_y;
      else if ((dx > 0) == (dy > 0))
        ++concordant;
      else
        ++discordant;
    }
  const auto nn = static_cast<long long>(n);
  const long long n0 = nn * (nn - 1) / 2;
  // tie counts per value are recovered from pair totals
  long long tx_pairs = 0, ty_pairs = 0;
  {
    std::vector<double> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && xs[j + 1] == xs[i]) ++j;
      const long long run = static_cast<long long>(j - i + 1);
      tx_pairs += run * (run - 1) / 2;
      i = j + 1;
    }
    std::vector<double> ys(y.begin(), y.end());
    std::sort(ys.begin(), ys.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && ys[j + 1] == ys[i]) ++j;
      const long long run = static_cast<long long>(j - i + 1);
      ty_pairs += run * (run - 1) / 2;
      i = j + 1;
    }
  }
  const double den_x = static_cast<double>(n0 - tx_pairs);
  const double den_y = static_cast<double>(n0 - ty_pairs);
  if (den_x <= 0.0 || den_y <= 0.0) throw std::runtime_error("constant input to kendall");
  return static_cast<double>(concordant - discordant) / std::sqrt(den_x * den_y);
}

double correlation(std::span<const double> x, std::span<const double> y,
                   muod::CorrelationKind kind) {
  switch (kind) {
    case muod::CorrelationKind::Pearson: return pearson(x, y);
    case muod::CorrelationKind::Spearman: return spearman(x, y);
    case muod::CorrelationKind::KendallTau: return kendall_exhaustive(x, y);
    case muod::CorrelationKind::Cosine: return cosine(x, y);
  }
  throw std::runtime_error("unknown correlation kind");
}

Triple pairwise(const muod::Matrix& m, const std::vector<std::size_t>& refs,
                muod::CorrelationKind kind) {
  const std::size_t n = m.rows;
  const auto d = static_cast<double>(m.cols);
  Triple out;
  out.magnitude.assign(n, 0.0);
  out.amplitude.assign(n, 0.0);
  out.shape.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto yi = m.row(i);
    const Stats si = stats(yi);
    if (si.sd == 0.0) continue;  // constant query rows keep zero indices
    double rho_sum = 0, beta_sum = 0, alpha_sum = 0;
    std::size_t used = 0;
    for (std::size_t j : refs) {
      const auto xj = m.row(j);
      const Stats sj = stats(xj);
      if (sj.sd == 0.0) continue;  // constant references carry no regression
      const double cov = kahan_dot_centered(yi, si.mean, xj, sj.mean) / d;
      const double beta = cov / sj.var;
      rho_sum += oracle::correlation(yi, xj, kind);
      beta_sum += beta;
      alpha_sum += si.mean - beta * sj.mean;
      ++used;
    }
    if (used == 0) continue;
    const auto k = static_cast<double>(used);
    out.shape[i] = std::abs(rho_sum / k - 1.0);
    out.amplitude[i] = std::abs(beta_sum / k - 1.0);
    out.magnitude[i] = std::abs(alpha_sum / k);
  }
  return out;
}

Triple against_reference(const muod::Matrix& m, std::span<const double> ref,
                         muod::CorrelationKind kind) {
  const std::size_t n = m.rows;
  const auto d = static_cast<double>(m.cols);
  const Stats sr = stats(ref);
  if (sr.sd == 0.0) throw std::runtime_error("constant reference");
  Triple out;
  out.magnitude.assign(n, 0.0);
  out.amplitude.assign(n, 0.0);
  out.shape.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto yi = m.row(i);
    const Stats si = stats(yi);
    if (si.sd == 0.0) continue;
    const double cov = kahan_dot_centered(yi, si.mean, ref, sr.mean) / d;
    const double beta = cov / sr.var;
    out.shape[i] = std::abs(oracle::correlation(yi, ref, kind) - 1.0);
    out.amplitude[i] = std::abs(beta - 1.0);
    out.magnitude[i] = std::abs(si.mean - beta * sr.mean);
  }
  return out;
}

std::vector<double> column_median_sorted(const muod::Matrix& m) {
  std::vector<double> med(m.cols);
  std::vector<double> col(m.rows);
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (std::size_t i = 0; i < m.rows; ++i) col[i] = m(i, j);
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    med[j] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return med;
}

double l1_objective(const muod::Matrix& m, std::span<const double> point) {
  double f = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double ss = 0.0;
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double diff = row[j] - point[j];
      ss += diff * diff;
    }
    f += std::sqrt(ss);
  }
  return f;
}

std::vector<double> l1_median_descent(const muod::Matrix& m) {
  const std::size_t d = m.cols;
  std::vector<double> p(d, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < d; ++j) p[j] += m(i, j);
  for (double& v : p) v /= static_cast<double>(m.rows);

  std::vector<double> grad(d), trial(d);
  double f = l1_objective(m, p);
  for (int it = 0; it < 20000; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
      double ss = 0.0;
      const auto row = m.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = p[j] - row[j];
        ss += diff * diff;
      }
      const double dist = std::sqrt(ss);
      if (dist < 1e-300) continue;  // subgradient 0 at a coincident point
      for (std::size_t j = 0; j < d; ++j) grad[j] += (p[j] - row[j]) / dist;
    }
    double gnorm2 = 0.0;
    for (double g : grad) gnorm2 += g * g;
    if (gnorm2 < 1e-22) break;

    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = p[j] - step * grad[j];
      const double ft = l1_objective(m, trial);
      if (ft < f - 1e-4 * step * gnorm2) {
        p = trial;
        f = ft;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no descent direction left at double precision
  }
  return p;
}

double quantile_type7(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace oracle
