#include "hpce/reliability.hpp"

#include <cmath>

#include "hpce/errors.hpp"
#include "hpce/hierarchy.hpp"
#include "hpce/parallel.hpp"
#include "hpce/rng.hpp"

namespace hpce {

std::vector<int> screen(const SobolResult& sobol, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("screen: threshold must lie in (0,1)");
  }
  std::vector<int> retained;
  for (Eigen::Index i = 0; i < sobol.total.size(); ++i) {
    if (sobol.total[i] > threshold) retained.push_back(static_cast<int>(i));
  }
  if (retained.empty()) {
    throw ConfigError("screen: no variable has S_Ti above " +
                      std::to_string(threshold) +
                      "; lower the screening threshold");
  }
  return retained;
}

ReconstructedModel reconstruct(const std::vector<int>& retained,
                               const Eigen::MatrixXd& xi_full,
                               const Eigen::VectorXd& f_centered,
                               double f_mean, int p_max, int max_components,
                               std::size_t memory_budget_bytes) {
  if (retained.empty()) throw ConfigError("reconstruct: empty retained set");
  const int r = static_cast<int>(retained.size());

  Eigen::MatrixXd xi_reduced(xi_full.rows(), r);
  for (int j = 0; j < r; ++j) {
    xi_reduced.col(j) = xi_full.col(retained[static_cast<std::size_t>(j)]);
  }

  const BasisPartition partition = enumerate_partition(r, p_max);
  const std::uint64_t p_reduced = count_basis(r, p_max);

  ReconstructedModel out;
  out.retained = retained;
  if (p_reduced < static_cast<std::uint64_t>(xi_full.rows())) {
    out.strategy = "olsr_reconstruct";
    out.model = olsr_fit(partition, xi_reduced, f_centered, f_mean,
                         memory_budget_bytes);
  } else {
    out.strategy = "sohplsr_reconstruct";
    out.model = sohplsr_fit(partition, xi_reduced, f_centered, f_mean,
                            max_components).pce;
  }
  return out;
}

ReliabilityResult failure_probability(const PceModel& metamodel, double limit,
                                      std::int64_t n_mc, std::uint64_t seed,
                                      int threads) {
  if (n_mc < 1) throw ConfigError("failure_probability: n_mc must be >= 1");
  const int dim = metamodel.dim();

  const std::int64_t chunk = 8192;
  const std::int64_t n_chunks = (n_mc + chunk - 1) / chunk;
  std::vector<std::int64_t> fails(static_cast<std::size_t>(n_chunks), 0);

  parallel_chunks(n_mc, chunk, threads, [&](std::int64_t c, std::int64_t begin,
                                            std::int64_t end) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    Eigen::VectorXd xi(dim);
    std::int64_t count = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      for (int v = 0; v < dim; ++v) xi[v] = rng.normal();
      if (metamodel.evaluate(xi) > limit) ++count;
    }
    fails[static_cast<std::size_t>(c)] = count;
  });

  std::int64_t total = 0;
  for (std::int64_t c : fails) total += c;

  ReliabilityResult res;
  res.pf = static_cast<double>(total) / static_cast<double>(n_mc);
  res.pf_se = std::sqrt(res.pf * (1.0 - res.pf) / static_cast<double>(n_mc));
  res.n_mc = n_mc;
  res.seed = seed;
  res.zero_failure_warning = (total == 0);
  return res;
}

McEstimate direct_mc_reference(
    const std::function<double(const Eigen::VectorXd&)>& model, int dim,
    double limit, std::int64_t n_mc, std::uint64_t seed, int threads) {
  if (n_mc < 1) throw ConfigError("direct_mc_reference: n_mc must be >= 1");

  const std::int64_t chunk = 8192;
  const std::int64_t n_chunks = (n_mc + chunk - 1) / chunk;
  std::vector<std::int64_t> fails(static_cast<std::size_t>(n_chunks), 0);

  parallel_chunks(n_mc, chunk, threads, [&](std::int64_t c, std::int64_t begin,
                                            std::int64_t end) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    Eigen::VectorXd xi(dim);
    std::int64_t count = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      for (int v = 0; v < dim; ++v) xi[v] = rng.normal();
      if (model(xi) > limit) ++count;
    }
    fails[static_cast<std::size_t>(c)] = count;
  });

  std::int64_t total = 0;
  for (std::int64_t c : fails) total += c;

  McEstimate est;
  est.n = n_mc;
  est.pf = static_cast<double>(total) / static_cast<double>(n_mc);
  est.se = std::sqrt(est.pf * (1.0 - est.pf) / static_cast<double>(n_mc));
  est.zero_failure_warning = (total == 0);
  return est;
}

}  // namespace hpce
