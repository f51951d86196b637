#include "hpce/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include "hpce/errors.hpp"

namespace hpce {

double hermite_value(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("hermite_value: degree < 0");
  if (!std::isfinite(x)) throw NumericError("hermite_value: non-finite x");
  if (degree == 0) return 1.0;
  double prev = 1.0;  // He_0
  double cur = x;     // He_1
  for (int n = 1; n < degree; ++n) {
    const double next = x * cur - static_cast<double>(n) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double multi_hermite_value(const MultiIndex& alpha, const Eigen::VectorXd& xi) {
  if (static_cast<Eigen::Index>(alpha.size()) != xi.size()) {
    throw std::invalid_argument("multi_hermite_value: dimension mismatch");
  }
  double prod = 1.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] != 0) prod *= hermite_value(alpha[k], xi[static_cast<Eigen::Index>(k)]);
  }
  return prod;
}

double hermite_norm_sq(const MultiIndex& alpha) {
  double prod = 1.0;
  for (int a : alpha) {
    for (int j = 2; j <= a; ++j) prod *= static_cast<double>(j);
  }
  if (!std::isfinite(prod)) {
    throw OverflowError("hermite_norm_sq: factorial product overflows double");
  }
  return prod;
}

}  // namespace hpce
