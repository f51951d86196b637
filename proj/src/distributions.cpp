#include "hpce/distributions.hpp"

#include <cmath>

#include "hpce/errors.hpp"

namespace hpce {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

// Acklam's rational approximation for the inverse normal CDF.
double quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericError("normal_quantile: p must lie strictly in (0,1)");
  }
  double x = quantile_estimate(p);
  // One Halley step against the exact CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

std::string to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::standard_gaussian: return "standard_gaussian";
    case MarginalKind::lognormal: return "lognormal";
    case MarginalKind::gumbel_max: return "gumbel_max";
  }
  return "unknown";
}

MarginalKind marginal_kind_from_string(const std::string& name) {
  if (name == "standard_gaussian" || name == "gaussian" || name == "normal") {
    return MarginalKind::standard_gaussian;
  }
  if (name == "lognormal") return MarginalKind::lognormal;
  if (name == "gumbel_max" || name == "extreme1" || name == "gumbel") {
    return MarginalKind::gumbel_max;
  }
  throw ConfigError("unknown marginal kind: " + name);
}

void MarginalSpec::validate() const {
  if (!(std > 0.0)) {
    throw ConfigError("marginal " + to_string(kind) + ": std must be > 0");
  }
  if (kind == MarginalKind::lognormal && !(mean > 0.0)) {
    throw ConfigError("lognormal marginal: mean must be > 0");
  }
}

namespace {

struct LognormalParams {
  double lambda;  // log-scale location
  double zeta;    // log-scale std
};

LognormalParams lognormal_params(const MarginalSpec& s) {
  const double zeta2 = std::log1p((s.std / s.mean) * (s.std / s.mean));
  return {std::log(s.mean) - 0.5 * zeta2, std::sqrt(zeta2)};
}

struct GumbelParams {
  double location;  // mu_g
  double scale;     // beta_g
};

GumbelParams gumbel_params(const MarginalSpec& s) {
  const double beta = s.std * std::sqrt(6.0) / kPi;
  return {s.mean - kEulerGamma * beta, beta};
}

}  // namespace

double MarginalSpec::quantile(double u) const {
  validate();
  if (!(u > 0.0 && u < 1.0)) {
    throw NumericError("marginal quantile: u must lie strictly in (0,1)");
  }
  switch (kind) {
    case MarginalKind::standard_gaussian:
      return mean + std * normal_quantile(u);
    case MarginalKind::lognormal: {
      const auto lp = lognormal_params(*this);
      return std::exp(lp.lambda + lp.zeta * normal_quantile(u));
    }
    case MarginalKind::gumbel_max: {
      const auto gp = gumbel_params(*this);
      return gp.location - gp.scale * std::log(-std::log(u));
    }
  }
  throw NumericError("marginal quantile: unreachable");
}

double MarginalSpec::cdf(double x) const {
  validate();
  switch (kind) {
    case MarginalKind::standard_gaussian:
      return normal_cdf((x - mean) / std);
    case MarginalKind::lognormal: {
      if (!(x > 0.0)) return 0.0;
      const auto lp = lognormal_params(*this);
      return normal_cdf((std::log(x) - lp.lambda) / lp.zeta);
    }
    case MarginalKind::gumbel_max: {
      const auto gp = gumbel_params(*this);
      return std::exp(-std::exp(-(x - gp.location) / gp.scale));
    }
  }
  throw NumericError("marginal cdf: unreachable");
}

double MarginalSpec::from_gaussian(double xi) const {
  validate();
  switch (kind) {
    case MarginalKind::standard_gaussian:
      return mean + std * xi;
    case MarginalKind::lognormal: {
      const auto lp = lognormal_params(*this);
      return std::exp(lp.lambda + lp.zeta * xi);
    }
    case MarginalKind::gumbel_max: {
      const auto gp = gumbel_params(*this);
      // Evaluate in whichever tail of Phi is free of cancellation.
      if (xi <= 0.0) {
        const double u = 0.5 * std::erfc(-xi / kSqrt2);
        return gp.location - gp.scale * std::log(-std::log(u));
      }
      const double sf = 0.5 * std::erfc(xi / kSqrt2);
      if (sf < 1e-12) {
        return gp.location - gp.scale * std::log(sf);  // -ln u ~ sf
      }
      return gp.location - gp.scale * std::log(-std::log1p(-sf));
    }
  }
  throw NumericError("marginal from_gaussian: unreachable");
}

Eigen::MatrixXd to_gaussian(const Eigen::MatrixXd& unit) {
  Eigen::MatrixXd out(unit.rows(), unit.cols());
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
      out(i, j) = normal_quantile(unit(i, j));
    }
  }
  return out;
}

Eigen::MatrixXd to_physical(const Eigen::MatrixXd& gaussian,
                            const std::vector<MarginalSpec>& marginals) {
  if (static_cast<Eigen::Index>(marginals.size()) != gaussian.cols()) {
    throw ConfigError("to_physical: one marginal per column required");
  }
  Eigen::MatrixXd out(gaussian.rows(), gaussian.cols());
  for (Eigen::Index j = 0; j < gaussian.cols(); ++j) {
    const MarginalSpec& m = marginals[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < gaussian.rows(); ++i) {
      out(i, j) = m.from_gaussian(gaussian(i, j));
    }
  }
  return out;
}

}  // namespace hpce
