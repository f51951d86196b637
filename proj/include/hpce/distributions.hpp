#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace hpce {

// Standard normal CDF, accurate to machine precision via erfc.
double normal_cdf(double x);

// Inverse standard normal CDF. Requires p in (0, 1); rational approximation
// polished with one Halley step so that |Phi(Phi^-1(p)) - p| <~ 1e-15 p.
double normal_quantile(double p);

enum class MarginalKind { standard_gaussian, lognormal, gumbel_max };

std::string to_string(MarginalKind kind);
MarginalKind marginal_kind_from_string(const std::string& name);

// Physical-space marginal described by its mean and standard deviation.
struct MarginalSpec {
  MarginalKind kind = MarginalKind::standard_gaussian;
  double mean = 0.0;
  double std = 1.0;

  void validate() const;
  double quantile(double u) const;       // inverse CDF
  double cdf(double x) const;
  double from_gaussian(double xi) const; // quantile(Phi(xi)), closed form
};

// Elementwise Phi^{-1}; entries must lie strictly inside (0, 1).
Eigen::MatrixXd to_gaussian(const Eigen::MatrixXd& unit);

// Columnwise isoprobabilistic map from standard-Gaussian coordinates.
Eigen::MatrixXd to_physical(const Eigen::MatrixXd& gaussian,
                            const std::vector<MarginalSpec>& marginals);

}  // namespace hpce
