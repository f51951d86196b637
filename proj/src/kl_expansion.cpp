#include "hpce/kl_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hpce/errors.hpp"

namespace hpce {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Bisection for a strictly bracketed root; f(lo) and f(hi) must differ in
// sign. Converges to ~1e-14 relative.
template <typename F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericError("kl_expansion: root bracket violated on [" +
                       std::to_string(lo) + ", " + std::to_string(hi) +
                       "], f(lo)=" + std::to_string(flo) +
                       ", f(hi)=" + std::to_string(fhi));
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void RandomFieldSpec::validate() const {
  if (!(domain_length > 0.0) || !(correlation_length > 0.0) || !(cov > 0.0) ||
      !(mean > 0.0) || n_terms < 1) {
    throw ConfigError("RandomFieldSpec: require L > 0, l > 0, cov > 0, mean > 0, n_terms >= 1");
  }
}

double RandomFieldSpec::underlying_std() const {
  return std::sqrt(std::log1p(cov * cov));
}

double RandomFieldSpec::underlying_mean() const {
  const double s2 = std::log1p(cov * cov);
  return std::log(mean) - 0.5 * s2;
}

KlExpansion::KlExpansion(const RandomFieldSpec& spec) : spec_(spec) {
  spec.validate();
  const double a = 0.5 * spec.domain_length;   // half interval
  const double c = 1.0 / spec.correlation_length;

  // Transcendental equations of the exponential kernel on [-a, a], in
  // theta = omega * a:
  //   even family: a*c - theta*tan(theta) = 0,   theta in ((n-1)pi, (n-1)pi + pi/2)
  //   odd  family: theta + a*c*tan(theta) = 0,   theta in ((n-1/2)pi, n pi)
  const int per_family = spec.n_terms;  // generate n of each, keep largest n
  std::vector<KlMode> modes;
  modes.reserve(2 * static_cast<std::size_t>(per_family));
  const double pad = 1e-9;
  for (int n = 1; n <= per_family; ++n) {
    {
      const double lo = (n - 1) * kPi + pad;
      const double hi = (n - 1) * kPi + 0.5 * kPi - pad;
      const double theta =
          bisect([&](double t) { return a * c - t * std::tan(t); }, lo, hi);
      const double omega = theta / a;
      KlMode m;
      m.even = true;
      m.omega = omega;
      m.eigenvalue = 2.0 * c / (omega * omega + c * c);
      m.norm = std::sqrt(a + std::sin(2.0 * theta) / (2.0 * omega));
      modes.push_back(m);
    }
    {
      const double lo = (n - 0.5) * kPi + pad;
      const double hi = n * kPi - pad;
      const double theta =
          bisect([&](double t) { return t + a * c * std::tan(t); }, lo, hi);
      const double omega = theta / a;
      KlMode m;
      m.even = false;
      m.omega = omega;
      m.eigenvalue = 2.0 * c / (omega * omega + c * c);
      m.norm = std::sqrt(a - std::sin(2.0 * theta) / (2.0 * omega));
      modes.push_back(m);
    }
  }
  std::sort(modes.begin(), modes.end(), [](const KlMode& x, const KlMode& y) {
    return x.eigenvalue > y.eigenvalue;
  });
  modes.resize(static_cast<std::size_t>(spec.n_terms));
  modes_ = std::move(modes);
}

double KlExpansion::eigenfunction(int k, double x) const {
  const KlMode& m = modes_[static_cast<std::size_t>(k)];
  const double t = x - 0.5 * spec_.domain_length;  // shift to [-a, a]
  return (m.even ? std::cos(m.omega * t) : std::sin(m.omega * t)) / m.norm;
}

double KlExpansion::captured_variance_ratio() const {
  double sum = 0.0;
  for (const KlMode& m : modes_) sum += m.eigenvalue;
  return sum / spec_.domain_length;
}

Eigen::MatrixXd KlExpansion::mode_values(const std::vector<double>& x) const {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(x.size()), n_terms());
  for (int k = 0; k < n_terms(); ++k) {
    const double scale = std::sqrt(eigenvalue(k));
    for (std::size_t i = 0; i < x.size(); ++i) {
      values(static_cast<Eigen::Index>(i), k) = scale * eigenfunction(k, x[i]);
    }
  }
  return values;
}

Eigen::VectorXd field_realization(const RandomFieldSpec& spec,
                                  const KlExpansion& kl,
                                  const Eigen::VectorXd& xi,
                                  const std::vector<double>& x) {
  if (xi.size() != kl.n_terms()) {
    throw ConfigError("field_realization: xi length must equal n_terms");
  }
  const double mu_n = spec.underlying_mean();
  const double sigma_n = spec.underlying_std();
  const Eigen::VectorXd gauss = kl.mode_values(x) * xi;
  Eigen::VectorXd out(gauss.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = std::exp(mu_n + sigma_n * gauss[i]);
  }
  return out;
}

}  // namespace hpce
