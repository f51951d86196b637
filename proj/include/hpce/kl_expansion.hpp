#pragma once

#include <vector>

#include <Eigen/Core>

namespace hpce {

// One-dimensional lognormal random field E(x) = exp(N(x)) on [0, L], where
// N has exponential correlation exp(-|x-x'|/l) and is truncated to the
// leading Karhunen-Loeve modes.
struct RandomFieldSpec {
  double domain_length = 0.0;      // L, m
  double correlation_length = 0.0; // l, m
  double mean = 0.0;               // mu_E of the lognormal field, Pa
  double cov = 0.0;                // delta_E, coefficient of variation
  int n_terms = 0;                 // number of retained KL modes

  void validate() const;
  double underlying_std() const;   // sigma_N = sqrt(ln(1 + cov^2))
  double underlying_mean() const;  // mu_N = ln(mean) - sigma_N^2 / 2
};

// Analytic eigenpair of the unit-variance exponential kernel on [0, L].
// Eigenfunctions are L2-normalized: integral over [0,L] of f^2 = 1.
struct KlMode {
  double eigenvalue = 0.0;
  double omega = 0.0;  // frequency of the mode
  bool even = true;    // cos family (about the interval midpoint) vs sin
  double norm = 1.0;   // normalization constant
};

class KlExpansion {
 public:
  explicit KlExpansion(const RandomFieldSpec& spec);

  const RandomFieldSpec& spec() const { return spec_; }
  int n_terms() const { return static_cast<int>(modes_.size()); }
  double eigenvalue(int k) const { return modes_[static_cast<std::size_t>(k)].eigenvalue; }
  double eigenfunction(int k, double x) const;  // x in [0, L]

  // sum(lambda_k) / L; tends to 1 as n_terms grows (Mercer trace identity).
  double captured_variance_ratio() const;

  // Values of sqrt(lambda_k) * f_k at the given abscissae, one column per
  // mode; the building block of field realizations.
  Eigen::MatrixXd mode_values(const std::vector<double>& x) const;

 private:
  RandomFieldSpec spec_;
  std::vector<KlMode> modes_;
};

// Field sample E(x) = exp(mu_N + sigma_N * sum_k sqrt(lambda_k) f_k(x) xi_k)
// at the requested points.
Eigen::VectorXd field_realization(const RandomFieldSpec& spec,
                                  const KlExpansion& kl,
                                  const Eigen::VectorXd& xi,
                                  const std::vector<double>& x);

}  // namespace hpce
