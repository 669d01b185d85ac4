#include "muod/indices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "muod/errors.hpp"
#include "muod/parallel.hpp"
#include "muod/rng.hpp"

namespace muod {

namespace {

// Queries are processed in small tiles so each pass over the reference rows
// serves several dot products from cache.
constexpr std::size_t kQueryTile = 16;

// Fixed-order eight-lane dot product: deterministic for any thread count and
// wide enough for the compiler to keep it in SIMD registers.
inline double dot8(const double* a, const double* b, std::size_t d) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, s7 = 0;
  std::size_t t = 0;
  for (; t + 8 <= d; t += 8) {
    s0 += a[t] * b[t];
    s1 += a[t + 1] * b[t + 1];
    s2 += a[t + 2] * b[t + 2];
    s3 += a[t + 3] * b[t + 3];
    s4 += a[t + 4] * b[t + 4];
    s5 += a[t + 5] * b[t + 5];
    s6 += a[t + 6] * b[t + 6];
    s7 += a[t + 7] * b[t + 7];
  }
  double tail = 0;
  for (; t < d; ++t) tail += a[t] * b[t];
  return (((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7))) + tail;
}

struct Moments {
  double mean = 0, sd = 0, var = 0;
  double qnorm = 0;  // sqrt(var + mean^2) = |Y| / sqrt(d), for cosine
};

std::vector<Moments> all_moments(const FunctionalSample& sample, unsigned threads) {
  std::vector<Moments> m(sample.n());
  parallel_for(sample.n(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const CurveStats s = curve_stats(sample.curve(i));
      m[i] = {s.mean, s.sd, s.var, std::sqrt(s.var + s.mean * s.mean)};
    }
  });
  return m;
}

std::vector<std::size_t> degenerate_of(const std::vector<Moments>& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].sd == 0.0) out.push_back(i);
  }
  return out;
}

// Centered copy of every non-degenerate row; degenerate rows are left zero.
Matrix centered_matrix(const FunctionalSample& sample, const std::vector<Moments>& mom,
                       unsigned threads) {
  Matrix w(sample.n(), sample.d());
  parallel_for(sample.n(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (mom[i].sd == 0.0) continue;
      const auto src = sample.curve(i);
      const auto dst = w.row(i);
      const double mean = mom[i].mean;
      for (std::size_t t = 0; t < src.size(); ++t) dst[t] = src[t] - mean;
    }
  });
  return w;
}

// Row-wise average ranks, centered; plus the population sd of each rank row.
struct RankData {
  Matrix centered;         // centered rank rows for non-degenerate curves
  std::vector<double> sd;  // rank sd per curve
};

RankData rank_data(const FunctionalSample& sample, const std::vector<Moments>& mom,
                   unsigned threads) {
  RankData r{Matrix(sample.n(), sample.d()), std::vector<double>(sample.n(), 0.0)};
  parallel_for(sample.n(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (mom[i].sd == 0.0) continue;
      const std::vector<double> ranks = average_ranks(sample.curve(i));
      const CurveStats s = curve_stats(ranks);
      r.sd[i] = s.sd;
      const auto dst = r.centered.row(i);
      for (std::size_t t = 0; t < ranks.size(); ++t) dst[t] = ranks[t] - s.mean;
    }
  });
  return r;
}

// Shape-correlation policies for the pairwise engine. Each receives the
// centered covariance of the raw rows and may use extra per-curve data.
struct PearsonRho {
  const std::vector<Moments>& mom;
  double operator()(std::size_t q, std::size_t r, double cov, const FunctionalSample&) const {
    return cov / (mom[q].sd * mom[r].sd);
  }
};

struct CosineRho {
  const std::vector<Moments>& mom;
  double operator()(std::size_t q, std::size_t r, double cov, const FunctionalSample&) const {
    return (cov + mom[q].mean * mom[r].mean) / (mom[q].qnorm * mom[r].qnorm);
  }
};

struct SpearmanRho {
  const RankData& ranks;
  double d;
  double operator()(std::size_t q, std::size_t r, double, const FunctionalSample&) const {
    const double dotc = dot8(ranks.centered.row(q).data(), ranks.centered.row(r).data(),
                             static_cast<std::size_t>(d));
    return (dotc / d) / (ranks.sd[q] * ranks.sd[r]);
  }
};

struct KendallRho {
  double operator()(std::size_t q, std::size_t r, double, const FunctionalSample& s) const {
    return correlation(s.curve(q), s.curve(r), CorrelationKind::KendallTau);
  }
};

// Pairwise engine shared by the full-reference and subsample schemes: for
// every query curve, stream the retained reference rows in ascending order
// and accumulate correlation, slope and intercept sums. Per-query summation
// order is fixed, so results do not depend on the thread count.
template <typename Rho>
void accumulate_pairwise(const FunctionalSample& sample, const Matrix& w,
                         const std::vector<Moments>& mom,
                         const std::vector<std::size_t>& refs, const Rho& rho,
                         unsigned threads, IndexSet& out) {
  const std::size_t n = sample.n();
  const std::size_t d = sample.d();
  const double dd = static_cast<double>(d);
  const double k = static_cast<double>(refs.size());

  parallel_for(n, threads, [&](std::size_t qb, std::size_t qe) {
    double sum_rho[kQueryTile], sum_beta[kQueryTile], sum_alpha[kQueryTile];
    for (std::size_t tile = qb; tile < qe; tile += kQueryTile) {
      const std::size_t tile_end = std::min(qe, tile + kQueryTile);
      const std::size_t tile_n = tile_end - tile;
      std::fill(sum_rho, sum_rho + tile_n, 0.0);
      std::fill(sum_beta, sum_beta + tile_n, 0.0);
      std::fill(sum_alpha, sum_alpha + tile_n, 0.0);

      for (const std::size_t r : refs) {
        const double* wr = w.row(r).data();
        const double mean_r = mom[r].mean;
        const double inv_var_r = 1.0 / mom[r].var;
        for (std::size_t qi = 0; qi < tile_n; ++qi) {
          const std::size_t q = tile + qi;
          if (mom[q].sd == 0.0) continue;
          const double cov = dot8(w.row(q).data(), wr, d) / dd;
          const double beta = cov * inv_var_r;
          sum_rho[qi] += rho(q, r, cov, sample);
          sum_beta[qi] += beta;
          sum_alpha[qi] += mom[q].mean - beta * mean_r;
        }
      }

      for (std::size_t qi = 0; qi < tile_n; ++qi) {
        const std::size_t q = tile + qi;
        if (mom[q].sd == 0.0) continue;
        out.shape[q] = std::abs(sum_rho[qi] / k - 1.0);
        out.amplitude[q] = std::abs(sum_beta[qi] / k - 1.0);
        out.magnitude[q] = std::abs(sum_alpha[qi] / k);
      }
    }
  });
}

IndexSet pairwise_indices(const FunctionalSample& sample,
                          const std::vector<std::size_t>& candidate_refs,
                          CorrelationKind kind, unsigned threads,
                          std::size_t min_retained, const char* scheme) {
  const std::size_t n = sample.n();
  const std::vector<Moments> mom = all_moments(sample, threads);

  IndexSet out;
  out.correlation_kind = kind;
  out.magnitude.assign(n, 0.0);
  out.amplitude.assign(n, 0.0);
  out.shape.assign(n, 0.0);
  out.degenerate = degenerate_of(mom);

  // Degenerate curves are dropped from the reference set; the averaging
  // denominator is the retained count.
  std::vector<std::size_t> refs;
  refs.reserve(candidate_refs.size());
  std::set_difference(candidate_refs.begin(), candidate_refs.end(),
                      out.degenerate.begin(), out.degenerate.end(),
                      std::back_inserter(refs));
  if (refs.size() < min_retained) {
    throw InvalidData(std::string(scheme) + ": fewer than " +
                      std::to_string(min_retained) + " usable reference curves");
  }

  const Matrix w = centered_matrix(sample, mom, threads);
  switch (kind) {
    case CorrelationKind::Pearson:
      accumulate_pairwise(sample, w, mom, refs, PearsonRho{mom}, threads, out);
      break;
    case CorrelationKind::Cosine:
      accumulate_pairwise(sample, w, mom, refs, CosineRho{mom}, threads, out);
      break;
    case CorrelationKind::Spearman: {
      const RankData ranks = rank_data(sample, mom, threads);
      accumulate_pairwise(sample, w, mom, refs,
                          SpearmanRho{ranks, static_cast<double>(sample.d())}, threads, out);
      break;
    }
    case CorrelationKind::KendallTau:
      accumulate_pairwise(sample, w, mom, refs, KendallRho{}, threads, out);
      break;
  }
  return out;
}

}  // namespace

std::vector<std::size_t> semifast_subsample(std::size_t n, const SemifastConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0))
    throw InvalidData("semifast: p must lie in (0, 1]");
  const auto n_x = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.p * static_cast<double>(n))));
  Rng rng(cfg.seed);
  return rng.sample_without_replacement(n, std::min(n_x, n));
}

IndexSet muod_indices(const FunctionalSample& sample, CorrelationKind kind,
                      unsigned threads) {
  if (sample.n() < 2) throw InvalidData("muod_indices: need at least two curves");
  std::vector<std::size_t> all(sample.n());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  IndexSet out = pairwise_indices(sample, all, kind, threads, 2, "muod_indices");
  out.method = MethodInfo{IndexMethod::Muod, 1.0, 0, MedianKind::PointwiseMedian};
  return out;
}

IndexSet semifast_indices(const FunctionalSample& sample, const SemifastConfig& cfg,
                          CorrelationKind kind, unsigned threads) {
  if (sample.n() < 2) throw InvalidData("semifast_indices: need at least two curves");
  const std::vector<std::size_t> sub = semifast_subsample(sample.n(), cfg);
  IndexSet out = pairwise_indices(sample, sub, kind, threads, 1, "semifast_indices");
  out.method = MethodInfo{IndexMethod::Semifast, cfg.p, cfg.seed, MedianKind::PointwiseMedian};
  return out;
}

IndexSet fast_indices_against(const FunctionalSample& sample, const ReferenceCurve& reference,
                              CorrelationKind kind, unsigned threads) {
  const std::size_t n = sample.n();
  const std::size_t d = sample.d();
  if (reference.values.size() != d)
    throw InvalidData("fast_indices: reference length does not match the sample");

  const CurveStats ref_stats = curve_stats(reference.values);
  if (ref_stats.sd == 0.0)
    throw DegenerateReference("fast_indices: the median curve is constant");

  const std::vector<Moments> mom = all_moments(sample, threads);

  IndexSet out;
  out.method = MethodInfo{IndexMethod::Fast, 1.0, 0, reference.kind};
  out.correlation_kind = kind;
  out.magnitude.assign(n, 0.0);
  out.amplitude.assign(n, 0.0);
  out.shape.assign(n, 0.0);
  out.degenerate = degenerate_of(mom);

  const double dd = static_cast<double>(d);
  const double ref_qnorm = std::sqrt(ref_stats.var + ref_stats.mean * ref_stats.mean);

  // Rank transform of the reference, for the Spearman kind only.
  std::vector<double> ref_ranks;
  double ref_rank_mean = 0, ref_rank_sd = 0;
  if (kind == CorrelationKind::Spearman) {
    ref_ranks = average_ranks(reference.values);
    const CurveStats rs = curve_stats(ref_ranks);
    ref_rank_mean = rs.mean;
    ref_rank_sd = rs.sd;
    if (ref_rank_sd == 0.0)
      throw DegenerateReference("fast_indices: the median curve is constant in ranks");
  }

  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    std::vector<double> q_ranks;
    for (std::size_t i = b; i < e; ++i) {
      if (mom[i].sd == 0.0) continue;
      const auto row = sample.curve(i);
      // Centered-on-the-fly covariance against the reference.
      double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
      std::size_t t = 0;
      for (; t + 4 <= d; t += 4) {
        s0 += (row[t] - mom[i].mean) * (reference.values[t] - ref_stats.mean);
        s1 += (row[t + 1] - mom[i].mean) * (reference.values[t + 1] - ref_stats.mean);
        s2 += (row[t + 2] - mom[i].mean) * (reference.values[t + 2] - ref_stats.mean);
        s3 += (row[t + 3] - mom[i].mean) * (reference.values[t + 3] - ref_stats.mean);
      }
      double cov = (s0 + s1) + (s2 + s3);
      for (; t < d; ++t)
        cov += (row[t] - mom[i].mean) * (reference.values[t] - ref_stats.mean);
      cov /= dd;

      double rho = 0.0;
      switch (kind) {
        case CorrelationKind::Pearson:
          rho = cov / (mom[i].sd * ref_stats.sd);
          break;
        case CorrelationKind::Cosine:
          rho = (cov + mom[i].mean * ref_stats.mean) / (mom[i].qnorm * ref_qnorm);
          break;
        case CorrelationKind::Spearman: {
          q_ranks = average_ranks(row);
          const CurveStats qs = curve_stats(q_ranks);
          double dotc = 0.0;
          for (std::size_t u = 0; u < d; ++u)
            dotc += (q_ranks[u] - qs.mean) * (ref_ranks[u] - ref_rank_mean);
          rho = (dotc / dd) / (qs.sd * ref_rank_sd);
          break;
        }
        case CorrelationKind::KendallTau:
          rho = correlation(row, reference.values, CorrelationKind::KendallTau);
          break;
      }

      const double beta = cov / ref_stats.var;
      const double alpha = mom[i].mean - beta * ref_stats.mean;
      out.shape[i] = std::abs(rho - 1.0);
      out.amplitude[i] = std::abs(beta - 1.0);
      out.magnitude[i] = std::abs(alpha);
    }
  });
  return out;
}

IndexSet fast_indices(const FunctionalSample& sample, MedianKind median_kind,
                      CorrelationKind kind, unsigned threads) {
  const ReferenceCurve ref = median_kind == MedianKind::PointwiseMedian
                                 ? pointwise_median(sample, threads)
                                 : l1_median(sample);
  return fast_indices_against(sample, ref, kind, threads);
}

}  // namespace muod
