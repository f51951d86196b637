#include "hpce/pls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "hpce/errors.hpp"

namespace hpce {

namespace {

constexpr double kCovarianceEps = 1e-13;   // relative no-covariance cutoff
constexpr double kLeverageCeiling = 1.0 - 1e-12;
// Two eps* values closer than this are ties; parsimony picks the smaller
// model (eps* is normalized, so an absolute floor is meaningful).
constexpr double kEpsTieTol = 1e-12;

}  // namespace

Eigen::VectorXd PlsBlockModel::fitted() const {
  if (empty()) return Eigen::VectorXd::Zero(scores.rows());
  return scores * inner_coeffs;
}

ComponentResult extract_component(Eigen::MatrixXd& e_cur, Eigen::VectorXd& f_cur) {
  ComponentResult res;
  Eigen::VectorXd cov = e_cur.transpose() * f_cur;
  const double cov_norm = cov.norm();
  const double scale = e_cur.norm() * f_cur.norm();
  if (cov_norm <= kCovarianceEps * (scale + 1e-300)) {
    res.status = ExtractStatus::no_covariance;
    return res;
  }
  res.w = cov / cov_norm;
  res.t = e_cur * res.w;
  const double tt = res.t.squaredNorm();
  if (tt <= kCovarianceEps * kCovarianceEps * (e_cur.squaredNorm() + 1e-300)) {
    res.status = ExtractStatus::degenerate_score;
    return res;
  }
  res.b = res.t.dot(f_cur) / tt;
  res.p = (e_cur.transpose() * res.t) / tt;
  e_cur.noalias() -= res.t * res.p.transpose();
  f_cur.noalias() -= res.b * res.t;
  return res;
}

Eigen::VectorXd hat_diagonal(const Eigen::MatrixXd& scores) {
  const Eigen::Index n = scores.rows();
  Eigen::VectorXd hat = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    const double tt = scores.col(j).squaredNorm();
    if (!(tt > 0.0)) {
      throw NumericError("hat_diagonal: rank-deficient score matrix");
    }
    hat.array() += scores.col(j).array().square() / tt;
  }
  return hat;
}

CvError corrected_cv(const Eigen::VectorXd& f, const Eigen::VectorXd& f_hat,
                     const Eigen::MatrixXd& scores, double variance) {
  const Eigen::Index n = f.size();
  CvError cv;
  if (scores.cols() == 0) {
    // Empty model: normalized error of predicting the mean.
    cv.hat_diag = Eigen::VectorXd::Zero(n);
    return cv;
  }
  cv.hat_diag = hat_diagonal(scores);
  if ((cv.hat_diag.array() >= kLeverageCeiling).any()) {
    throw NumericError("corrected_cv: saturated leverage (component count too "
                       "high for the sample size)");
  }
  double err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (f[i] - f_hat[i]) / (1.0 - cv.hat_diag[i]);
    err += r * r;
  }
  err /= static_cast<double>(n);
  if (!(variance > 0.0)) {
    throw NumericError("corrected_cv: zero response variance");
  }
  cv.eps_loo_p = err / variance;
  double trace = 0.0;
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    trace += 1.0 / scores.col(j).squaredNorm();
  }
  cv.trace_term = trace;
  const double h = static_cast<double>(scores.cols());
  cv.eps_star = cv.eps_loo_p / (1.0 - h / static_cast<double>(n)) * (1.0 + trace);
  return cv;
}

PlsFitResult pls_fit(const Eigen::MatrixXd& e_centered,
                     const Eigen::VectorXd& f_centered,
                     const Eigen::VectorXd& col_means,
                     const PlsOptions& options) {
  const Eigen::Index n = e_centered.rows();
  const Eigen::Index k = e_centered.cols();
  if (n < 3) throw ConfigError("pls_fit: need at least 3 samples");
  if (f_centered.size() != n) throw ConfigError("pls_fit: response length mismatch");

  PlsFitResult out;
  out.model.col_means =
      col_means.size() == k ? col_means : Eigen::VectorXd::Zero(k);
  out.model.weights.resize(k, 0);
  out.model.scores.resize(n, 0);
  out.model.loadings.resize(k, 0);
  out.residual = f_centered;

  const double variance =
      f_centered.squaredNorm() / static_cast<double>(n - 1);
  if (!(variance > 0.0)) {
    out.cv.hat_diag = Eigen::VectorXd::Zero(n);
    return out;  // nothing to explain: empty model, eps* = 1
  }

  const int cap = static_cast<int>(std::min<Eigen::Index>(
      {static_cast<Eigen::Index>(options.max_components), n - 1, k}));

  Eigen::MatrixXd e_work = e_centered;
  Eigen::VectorXd f_work = f_centered;

  std::vector<Eigen::VectorXd> ws, ts, ps;
  std::vector<double> bs, eps_trace, score_norms;
  Eigen::VectorXd f_hat = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd hat = Eigen::VectorXd::Zero(n);
  double trace_term = 0.0;

  for (int h = 1; h <= cap; ++h) {
    ComponentResult comp = extract_component(e_work, f_work);
    if (comp.status != ExtractStatus::ok) break;

    const double tt = comp.t.squaredNorm();
    Eigen::VectorXd hat_next = hat + comp.t.array().square().matrix() / tt;
    if ((hat_next.array() >= kLeverageCeiling).any()) break;  // saturated

    ws.push_back(std::move(comp.w));
    ps.push_back(std::move(comp.p));
    bs.push_back(comp.b);
    f_hat += comp.b * comp.t;
    hat = std::move(hat_next);
    trace_term += 1.0 / tt;
    ts.push_back(std::move(comp.t));
    score_norms.push_back(tt);

    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = (f_centered[i] - f_hat[i]) / (1.0 - hat[i]);
      err += r * r;
    }
    err /= static_cast<double>(n);
    const double eps = err / variance;
    const double eps_star = eps / (1.0 - static_cast<double>(h) / n) *
                            (1.0 + trace_term);
    eps_trace.push_back(eps_star);
    if (options.early_stop && h >= 2 && eps_star > eps_trace[h - 2]) break;
  }

  if (ts.empty()) {
    out.cv.hat_diag = Eigen::VectorXd::Zero(n);
    return out;
  }

  // Truncate at the argmin of the evaluated trace (smallest h on ties).
  // The empty model enters the argmin at eps* = 1: a block whose best fit
  // cannot beat predicting the mean contributes nothing.
  int best = 0;
  for (int j = 1; j < static_cast<int>(eps_trace.size()); ++j) {
    if (eps_trace[j] < eps_trace[best] - kEpsTieTol) best = j;
  }
  if (options.early_stop && eps_trace[best] >= 1.0 - kEpsTieTol) {
    out.model.eps_star_trace = Eigen::Map<Eigen::VectorXd>(
        eps_trace.data(), static_cast<Eigen::Index>(eps_trace.size()));
    out.cv.hat_diag = Eigen::VectorXd::Zero(n);
    return out;
  }
  const int h_sel = options.early_stop ? best + 1
                                       : static_cast<int>(ts.size());

  out.model.weights.resize(k, h_sel);
  out.model.scores.resize(n, h_sel);
  out.model.loadings.resize(k, h_sel);
  out.model.inner_coeffs.resize(h_sel);
  for (int j = 0; j < h_sel; ++j) {
    out.model.weights.col(j) = ws[static_cast<std::size_t>(j)];
    out.model.scores.col(j) = ts[static_cast<std::size_t>(j)];
    out.model.loadings.col(j) = ps[static_cast<std::size_t>(j)];
    out.model.inner_coeffs[j] = bs[static_cast<std::size_t>(j)];
  }
  out.model.eps_star_trace =
      Eigen::Map<Eigen::VectorXd>(eps_trace.data(),
                                  static_cast<Eigen::Index>(eps_trace.size()));
  out.residual = f_centered - out.model.fitted();
  out.cv = corrected_cv(f_centered, out.model.fitted(), out.model.scores,
                        variance);
  return out;
}

Eigen::MatrixXd weight_map(const PlsBlockModel& model) {
  const int h = model.n_components();
  if (h == 0) return Eigen::MatrixXd(model.weights.rows(), 0);
  const Eigen::MatrixXd ptw = model.loadings.transpose() * model.weights;
  // P^T W is unit upper triangular by construction; invert by back-solve.
  const Eigen::MatrixXd inv = ptw.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(h, h));
  const double cond = ptw.cwiseAbs().maxCoeff() * inv.cwiseAbs().maxCoeff() *
                      static_cast<double>(h);
  if (!(cond < 1e12)) {
    throw NumericError("weight_map: ill-conditioned P^T W (cond estimate " +
                       std::to_string(cond) + ")");
  }
  return model.weights * inv;
}

}  // namespace hpce
