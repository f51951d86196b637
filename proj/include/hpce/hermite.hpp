#pragma once

#include <Eigen/Core>

#include "hpce/multi_index.hpp"

namespace hpce {

// Probabilists' Hermite polynomial He_n(x), orthogonal w.r.t. the standard
// Gaussian density, computed by the three-term recurrence
// He_{n+1} = x He_n - n He_{n-1}.
double hermite_value(int degree, double x);

// Tensor product Psi_alpha(xi) = prod_k He_{alpha_k}(xi_k).
double multi_hermite_value(const MultiIndex& alpha, const Eigen::VectorXd& xi);

// E[Psi_alpha^2] = prod_k alpha_k!  (exact, as a double).
double hermite_norm_sq(const MultiIndex& alpha);

}  // namespace hpce
