#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hpce/distributions.hpp"

namespace hpce {

// Training design: unit-hypercube, standard-Gaussian and (optionally)
// physical coordinates of each sample, plus the centered responses.
struct DesignOfExperiments {
  Eigen::MatrixXd unit;               // N x M, in [0,1)
  Eigen::MatrixXd gaussian;           // N x M
  Eigen::MatrixXd physical;           // N x M or empty when no marginals apply
  Eigen::VectorXd response_centered;  // F, empirical mean zero
  double response_mean = 0.0;         // subtracted mean (the Y-bar estimate)

  Eigen::Index n_samples() const { return gaussian.rows(); }
  Eigen::Index dim() const { return gaussian.cols(); }
};

// Sobol design mapped to Gaussian space; `skip` defaults to dropping the
// degenerate all-zeros point. Physical coordinates are filled when
// marginals are supplied.
DesignOfExperiments make_design(Eigen::Index n, int dim, std::uint64_t skip,
                                const std::vector<MarginalSpec>* marginals);

// Runs the model on every design row (parallel over fixed chunks) and
// stores the centered responses.
void attach_responses(DesignOfExperiments& doe,
                      const std::function<double(const Eigen::VectorXd&)>& model,
                      int threads);

void attach_responses(DesignOfExperiments& doe, const Eigen::VectorXd& raw);

// CSV exchange: header "u_1..u_M,xi_1..xi_M[,x_1..x_M],response"; values are
// printed with 17 significant digits so the round trip is bit-exact.
void write_design_csv(const std::string& path, const DesignOfExperiments& doe);
DesignOfExperiments read_design_csv(const std::string& path);

}  // namespace hpce
