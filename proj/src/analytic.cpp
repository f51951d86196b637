#include <cmath>

#include "hpce/errors.hpp"
#include "hpce/models.hpp"

namespace hpce {

// Closed-form Sobol decompositions. In Hermite coordinates:
//   additive:  sum a_k xi_k,          D = sum a_k^2
//   product:   xi1 xi2 = Psi_(1,1),   D = 1
//   mixed:     xi1 + xi1 xi2,         D = 2
//   cubic:     xi1^3 = He3 + 3 He1,   D = 6 + 9 = 15
AnalyticCase analytic_case(const std::string& name, int dim) {
  if (dim < 1) throw ConfigError("analytic_case: dim must be >= 1");
  AnalyticCase c;
  c.name = name;
  c.dim = dim;
  c.exact_main = Eigen::VectorXd::Zero(dim);
  c.exact_total = Eigen::VectorXd::Zero(dim);

  if (name == "additive") {
    Eigen::VectorXd a(dim);
    for (int k = 0; k < dim; ++k) a[k] = 1.0 / (k + 1);
    const double d = a.squaredNorm();
    c.fn = [a](const Eigen::VectorXd& xi) { return a.dot(xi); };
    c.exact_main = a.array().square() / d;
    c.exact_total = c.exact_main;
    c.variance = d;
    return c;
  }
  if (name == "product") {
    if (dim < 2) throw ConfigError("analytic_case: product needs dim >= 2");
    c.fn = [](const Eigen::VectorXd& xi) { return xi[0] * xi[1]; };
    c.exact_total[0] = 1.0;
    c.exact_total[1] = 1.0;
    c.variance = 1.0;
    return c;
  }
  if (name == "mixed") {
    if (dim < 2) throw ConfigError("analytic_case: mixed needs dim >= 2");
    c.fn = [](const Eigen::VectorXd& xi) { return xi[0] + xi[0] * xi[1]; };
    c.exact_main[0] = 0.5;
    c.exact_total[0] = 1.0;
    c.exact_total[1] = 0.5;
    c.variance = 2.0;
    return c;
  }
  if (name == "cubic") {
    c.fn = [](const Eigen::VectorXd& xi) { return xi[0] * xi[0] * xi[0]; };
    c.exact_main[0] = 1.0;
    c.exact_total[0] = 1.0;
    c.variance = 15.0;
    return c;
  }
  throw ConfigError("analytic_case: unknown case '" + name + "'");
}

}  // namespace hpce
