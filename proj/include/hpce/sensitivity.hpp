#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "hpce/pce_model.hpp"

namespace hpce {

struct SobolResult {
  Eigen::VectorXd main;       // S_i
  Eigen::VectorXd total;      // S_Ti
  Eigen::VectorXd main_se;    // standard errors (zero for the exact route)
  Eigen::VectorXd total_se;
  double model_variance = 0.0;
  bool degenerate = false;    // constant model: indices are meaningless
  std::string index_sets_note;
};

// Coefficient post-processing:
//   S_i  sums beta^2 E[Psi^2] over terms involving variable i alone,
//   S_Ti over all terms with alpha_i > 0; both normalized by the model
// variance. Throws NumericError on a zero-variance model.
SobolResult sobol_indices(const PceModel& model);

// Saltelli/Jansen pick-freeze reference on a black-box xi -> y model.
// Deterministic for fixed (seed, n); chunk-seeded so the result does not
// depend on the thread count. Cost: (dim + 2) * n model evaluations.
SobolResult mc_sobol_reference(
    const std::function<double(const Eigen::VectorXd&)>& model, int dim,
    std::int64_t n, std::uint64_t seed, int threads);

}  // namespace hpce
