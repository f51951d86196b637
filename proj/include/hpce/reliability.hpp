#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hpce/pce_model.hpp"
#include "hpce/sensitivity.hpp"

namespace hpce {

// Variables with S_Ti above the threshold, ascending (0-based indices).
// Throws ConfigError when nothing survives the threshold.
std::vector<int> screen(const SobolResult& sobol, double threshold);

// Surrogate over the retained variables only, refit to the training data:
// OLSR when the reduced basis is smaller than the sample size, otherwise
// the hierarchical fit.
struct ReconstructedModel {
  PceModel model;            // dim = |retained|
  std::vector<int> retained; // 0-based original variable indices
  std::string strategy;      // "olsr_reconstruct" | "sohplsr_reconstruct"
};

ReconstructedModel reconstruct(const std::vector<int>& retained,
                               const Eigen::MatrixXd& xi_full,
                               const Eigen::VectorXd& f_centered,
                               double f_mean, int p_max,
                               int max_components = 200,
                               std::size_t memory_budget_bytes =
                                   std::size_t(4) << 30);

struct ReliabilityResult {
  std::vector<int> retained;  // 0-based
  double threshold = 0.0;     // screening threshold on S_Ti
  std::string strategy;
  double pf = 0.0;
  double pf_se = 0.0;
  std::int64_t n_mc = 0;
  std::uint64_t seed = 0;
  bool zero_failure_warning = false;
};

// Monte Carlo exceedance probability of the surrogate: samples the model's
// standard-Gaussian inputs, counts evaluate(xi) > limit. Deterministic for
// fixed (seed, n_mc) independent of the thread count.
ReliabilityResult failure_probability(const PceModel& metamodel, double limit,
                                      std::int64_t n_mc, std::uint64_t seed,
                                      int threads);

struct McEstimate {
  double pf = 0.0;
  double se = 0.0;
  std::int64_t n = 0;
  bool zero_failure_warning = false;
};

// Brute-force reference on the true model (not the surrogate).
McEstimate direct_mc_reference(
    const std::function<double(const Eigen::VectorXd&)>& model, int dim,
    double limit, std::int64_t n_mc, std::uint64_t seed, int threads);

}  // namespace hpce
