#include "hpce/sensitivity.hpp"

#include <cmath>
#include <vector>

#include "hpce/errors.hpp"
#include "hpce/hermite.hpp"
#include "hpce/parallel.hpp"
#include "hpce/rng.hpp"

namespace hpce {

SobolResult sobol_indices(const PceModel& model) {
  const int m = model.dim();
  SobolResult res;
  res.main = Eigen::VectorXd::Zero(m);
  res.total = Eigen::VectorXd::Zero(m);
  res.main_se = Eigen::VectorXd::Zero(m);
  res.total_se = Eigen::VectorXd::Zero(m);
  res.index_sets_note =
      "main: terms with alpha_i > 0 and alpha_j = 0 for j != i; "
      "total: all terms with alpha_i > 0; fitted support only";

  double variance = 0.0;
  for (const PceTerm& t : model.terms()) {
    const double contrib = t.beta * t.beta * hermite_norm_sq(t.alpha);
    variance += contrib;
    const int inter = interaction_degree(t.alpha);
    for (int v = 0; v < m; ++v) {
      if (t.alpha[static_cast<std::size_t>(v)] != 0) {
        res.total[v] += contrib;
        if (inter == 1) res.main[v] += contrib;
      }
    }
  }
  res.model_variance = variance;
  if (!(variance > 0.0)) {
    throw NumericError("sobol_indices: degenerate model with zero variance");
  }
  res.main /= variance;
  res.total /= variance;
  return res;
}

namespace {

// Sums over one pick-freeze sample block for a single variable.
struct PairSums {
  // The Janon pair (y_B, y_ABi) shares exactly variable i, so its
  // correlation estimates S_i; the Jansen difference y_A - y_ABi isolates
  // the complement and estimates S_Ti.
  double prod = 0;      // sum y_B y_ABi
  double mean = 0;      // sum (y_B + y_ABi) / 2
  double sq = 0;        // sum (y_B^2 + y_ABi^2) / 2
  double jansen = 0;    // sum (y_A - y_ABi)^2 / 2

  void add(double fa, double fb, double fab) {
    prod += fb * fab;
    mean += 0.5 * (fb + fab);
    sq += 0.5 * (fb * fb + fab * fab);
    jansen += 0.5 * (fa - fab) * (fa - fab);
  }

  // Janon/Monod main-effect estimator: efficient when S_i is large.
  double main_estimate(double n) const {
    const double m = mean / n;
    const double v = sq / n - m * m;
    return (prod / n - m * m) / v;
  }
  // Jansen total-effect estimator, normalized by the same pair variance.
  double total_estimate(double n) const {
    const double m = mean / n;
    const double v = sq / n - m * m;
    return (jansen / n) / v;
  }
};

}  // namespace

SobolResult mc_sobol_reference(
    const std::function<double(const Eigen::VectorXd&)>& model, int dim,
    std::int64_t n, std::uint64_t seed, int threads) {
  if (n < 1000) throw ConfigError("mc_sobol_reference: need n >= 1e3");

  const std::int64_t chunk = 4096;
  const std::int64_t n_chunks = (n + chunk - 1) / chunk;

  struct Accum {
    double sum_a = 0, sum_b = 0, sumsq_a = 0, sumsq_b = 0;
    std::vector<PairSums> pairs;
  };
  std::vector<Accum> per_chunk(static_cast<std::size_t>(n_chunks));

  parallel_chunks(n, chunk, threads, [&](std::int64_t c, std::int64_t begin,
                                         std::int64_t end) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    Accum acc;
    acc.pairs.assign(static_cast<std::size_t>(dim), PairSums{});
    Eigen::VectorXd xa(dim), xb(dim), xab(dim);
    for (std::int64_t i = begin; i < end; ++i) {
      for (int v = 0; v < dim; ++v) xa[v] = rng.normal();
      for (int v = 0; v < dim; ++v) xb[v] = rng.normal();
      const double fa = model(xa);
      const double fb = model(xb);
      acc.sum_a += fa;
      acc.sum_b += fb;
      acc.sumsq_a += fa * fa;
      acc.sumsq_b += fb * fb;
      for (int v = 0; v < dim; ++v) {
        xab = xa;
        xab[v] = xb[v];
        acc.pairs[static_cast<std::size_t>(v)].add(fa, fb, model(xab));
      }
    }
    per_chunk[static_cast<std::size_t>(c)] = std::move(acc);
  });

  // Deterministic reduction in chunk order.
  Accum tot;
  tot.pairs.assign(static_cast<std::size_t>(dim), PairSums{});
  for (const Accum& acc : per_chunk) {
    tot.sum_a += acc.sum_a;
    tot.sum_b += acc.sum_b;
    tot.sumsq_a += acc.sumsq_a;
    tot.sumsq_b += acc.sumsq_b;
    for (int v = 0; v < dim; ++v) {
      PairSums& p = tot.pairs[static_cast<std::size_t>(v)];
      const PairSums& q = acc.pairs[static_cast<std::size_t>(v)];
      p.prod += q.prod;
      p.mean += q.mean;
      p.sq += q.sq;
      p.jansen += q.jansen;
    }
  }

  const double nn = static_cast<double>(n);
  const double mean_all = (tot.sum_a + tot.sum_b) / (2.0 * nn);
  const double var_all =
      (tot.sumsq_a + tot.sumsq_b) / (2.0 * nn) - mean_all * mean_all;

  SobolResult res;
  res.main.resize(dim);
  res.total.resize(dim);
  res.main_se.resize(dim);
  res.total_se.resize(dim);
  res.model_variance = var_all;
  res.index_sets_note =
      "pick-freeze estimate (Janon main, Jansen total); errors from the "
      "spread of per-chunk estimates";
  if (!(var_all > 0.0)) {
    res.degenerate = true;
    res.main.setConstant(std::nan(""));
    res.total.setConstant(std::nan(""));
    res.main_se.setConstant(std::nan(""));
    res.total_se.setConstant(std::nan(""));
    return res;
  }

  for (int v = 0; v < dim; ++v) {
    const PairSums& p = tot.pairs[static_cast<std::size_t>(v)];
    res.main[v] = p.main_estimate(nn);
    res.total[v] = p.total_estimate(nn);
  }

  // Standard errors from the spread of single-chunk estimates (full-size
  // chunks only), scaled to the full sample size.
  std::vector<const Accum*> full;
  for (std::int64_t c = 0; c + 1 < n_chunks; ++c) {
    full.push_back(&per_chunk[static_cast<std::size_t>(c)]);
  }
  if (n_chunks >= 1 && n % chunk == 0) {
    full.push_back(&per_chunk[static_cast<std::size_t>(n_chunks - 1)]);
  }
  const std::size_t k = full.size();
  if (k >= 4) {
    const double scale = std::sqrt(static_cast<double>(chunk) / nn);
    for (int v = 0; v < dim; ++v) {
      double m1 = 0, m2 = 0, t1 = 0, t2 = 0;
      for (const Accum* acc : full) {
        const PairSums& p = acc->pairs[static_cast<std::size_t>(v)];
        const double sm = p.main_estimate(static_cast<double>(chunk));
        const double st = p.total_estimate(static_cast<double>(chunk));
        m1 += sm;
        m2 += sm * sm;
        t1 += st;
        t2 += st * st;
      }
      const double kk = static_cast<double>(k);
      const double sd_m = std::sqrt(std::max(0.0, m2 / kk - (m1 / kk) * (m1 / kk)));
      const double sd_t = std::sqrt(std::max(0.0, t2 / kk - (t1 / kk) * (t1 / kk)));
      res.main_se[v] = sd_m * scale;
      res.total_se[v] = sd_t * scale;
    }
  } else {
    // too few chunks for a spread estimate: fall back to a crude bound
    res.main_se.setConstant(1.0 / std::sqrt(nn));
    res.total_se.setConstant(1.0 / std::sqrt(nn));
  }
  return res;
}

}  // namespace hpce
