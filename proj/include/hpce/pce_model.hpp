#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "hpce/multi_index.hpp"

namespace hpce {

// Polynomial-chaos surrogate in coefficient form:
//   y(xi) = constant + sum_alpha beta_alpha Psi_alpha(xi).
// The constant already folds in the training response mean and the
// centering means of the polynomial columns.
struct PceTerm {
  MultiIndex alpha;
  double beta = 0.0;
};

class PceModel {
 public:
  PceModel() = default;
  PceModel(int dim, int max_degree, double constant, std::vector<PceTerm> terms);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  double constant() const { return constant_; }
  const std::vector<PceTerm>& terms() const { return terms_; }

  double evaluate(const Eigen::VectorXd& xi) const;
  Eigen::VectorXd evaluate_batch(const Eigen::MatrixXd& xi, int threads) const;

  // sum beta^2 E[Psi^2] over the support.
  double variance() const;

  // Terms with |beta| <= tol dropped (tidies fp noise in reports).
  PceModel pruned(double tol) const;

 private:
  int dim_ = 0;
  int max_degree_ = 0;
  double constant_ = 0.0;
  std::vector<PceTerm> terms_;

  // flattened support for fast evaluation: (variable, degree) pairs
  std::vector<int> support_offsets_;
  std::vector<std::pair<int, int>> support_;
  void build_support();
};

// JSON schema {M, p_max, F_mean, entries:[{alpha, beta}]}; doubles survive
// the round trip bit-exactly.
std::string to_json(const PceModel& model);
PceModel pce_from_json(const std::string& json_text);

void save_model(const std::string& path, const PceModel& model,
                const std::string& extra_json = "");
PceModel load_model(const std::string& path);

}  // namespace hpce
