#pragma once

#include <Eigen/Core>

namespace hpce {

// Single-response PLS regression fit of a centered predictor block.
// Columns of `weights` have unit norm; `scores` are mutually orthogonal;
// loadings^T * weights is unit upper triangular, which keeps the weight map
// W (P^T W)^{-1} well defined.
struct PlsBlockModel {
  Eigen::MatrixXd weights;         // K x h
  Eigen::MatrixXd scores;          // N x h (training scores)
  Eigen::MatrixXd loadings;        // K x h
  Eigen::VectorXd inner_coeffs;    // b, length h
  Eigen::VectorXd eps_star_trace;  // corrected CV error after 1..h_eval comps
  Eigen::VectorXd col_means;       // predictor centering means (K)

  int n_components() const { return static_cast<int>(scores.cols()); }
  bool empty() const { return scores.cols() == 0; }

  // Training predictions T b.
  Eigen::VectorXd fitted() const;
};

// Corrected cross-validation error of Eq-style pseudo leave-one-out form.
struct CvError {
  double eps_loo_p = 1.0;     // pseudo LOO error over sample variance
  double eps_star = 1.0;      // after the overfitting penalty
  Eigen::VectorXd hat_diag;   // leverage of each sample, in [0, 1)
  double trace_term = 0.0;    // tr((T^T T)^{-1})
};

enum class ExtractStatus { ok, no_covariance, degenerate_score };

struct ComponentResult {
  ExtractStatus status = ExtractStatus::ok;
  Eigen::VectorXd w;  // unit weight vector
  Eigen::VectorXd t;  // score
  Eigen::VectorXd p;  // loading
  double b = 0.0;     // inner regression coefficient
};

// One PLS step: w = E^T F / |E^T F|, t = E w, b = t^T F / t^T t,
// p = E^T t / t^T t, then deflation E <- E - t p^T, F <- F - b t (in place).
// With a no_covariance / degenerate_score status, E and F are untouched.
ComponentResult extract_component(Eigen::MatrixXd& e_cur, Eigen::VectorXd& f_cur);

// Leverages h_i = sum_j t_ij^2 / (t_j^T t_j) using score orthogonality.
Eigen::VectorXd hat_diagonal(const Eigen::MatrixXd& scores);

// Pseudo LOO error with the (1 - h/N)^{-1} (1 + tr((T^T T)^{-1})) penalty.
// `variance` is the unbiased sample variance of the centered response.
// Throws NumericError when some leverage reaches 1 (saturated).
CvError corrected_cv(const Eigen::VectorXd& f, const Eigen::VectorXd& f_hat,
                     const Eigen::MatrixXd& scores, double variance);

struct PlsOptions {
  int max_components = 200;
  // Stop at the first increase of eps*; otherwise extract max_components
  // (or until rank/covariance is exhausted).
  bool early_stop = true;
};

struct PlsFitResult {
  PlsBlockModel model;
  CvError cv;                // at the selected component count
  Eigen::VectorXd residual;  // F - T b at the selected count
};

// Sequential extraction with the eps*-based stopping rule; the returned
// model is truncated at the argmin of the evaluated eps* trace (smallest h
// on ties). An identically-zero response gives the empty model with
// eps* = 1 by convention.
PlsFitResult pls_fit(const Eigen::MatrixXd& e_centered,
                     const Eigen::VectorXd& f_centered,
                     const Eigen::VectorXd& col_means,
                     const PlsOptions& options = {});

// R = W (P^T W)^{-1}: maps centered predictor rows to scores, both for the
// training block (E R = T exactly) and for new points.
Eigen::MatrixXd weight_map(const PlsBlockModel& model);

}  // namespace hpce
