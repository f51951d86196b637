#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "hpce/errors.hpp"
#include "hpce/pls.hpp"
#include "hpce/rng.hpp"
#include "oracles.hpp"

using namespace hpce;

namespace {

Eigen::MatrixXd random_centered(int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd e(n, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) e(i, j) = rng.normal();
    e.col(j).array() -= e.col(j).mean();
  }
  return e;
}

Eigen::VectorXd centered(Eigen::VectorXd v) {
  v.array() -= v.mean();
  return v;
}

}  // namespace

TEST_CASE("single column PLS equals univariate least squares") {
  const Eigen::MatrixXd e = random_centered(25, 1, 11);
  Rng rng(12);
  Eigen::VectorXd f(25);
  for (int i = 0; i < 25; ++i) f[i] = 3.0 * e(i, 0) + 0.1 * rng.normal();
  f = centered(f);

  Eigen::MatrixXd ew = e;
  Eigen::VectorXd fw = f;
  const ComponentResult comp = extract_component(ew, fw);
  REQUIRE(comp.status == ExtractStatus::ok);
  CHECK(std::abs(std::abs(comp.w[0]) - 1.0) < 1e-12);
  const double ols = e.col(0).dot(f) / e.col(0).squaredNorm();
  CHECK(comp.b * comp.w[0] == doctest::Approx(ols).epsilon(1e-12));
  CHECK(std::abs(fw.dot(comp.t)) < 1e-10 * fw.norm() * comp.t.norm());
}

TEST_CASE("orthonormal predictors with a single-direction response") {
  // E with orthonormal columns, F = 2 * first column: one component fits
  // exactly and deflation wipes the response.
  Eigen::MatrixXd raw = random_centered(20, 5, 21);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  const Eigen::MatrixXd e =
      qr.householderQ() * Eigen::MatrixXd::Identity(20, 5);
  const Eigen::VectorXd f = 2.0 * e.col(0);

  Eigen::MatrixXd ew = e;
  Eigen::VectorXd fw = f;
  const ComponentResult comp = extract_component(ew, fw);
  REQUIRE(comp.status == ExtractStatus::ok);
  CHECK((comp.b * comp.t - f).norm() < 1e-10);
  CHECK(fw.norm() < 1e-10);
}

TEST_CASE("deflation orthogonality on a random instance") {
  Eigen::MatrixXd e = random_centered(20, 5, 31);
  Rng rng(32);
  Eigen::VectorXd f(20);
  for (int i = 0; i < 20; ++i) f[i] = rng.normal();
  f = centered(f);
  const ComponentResult comp = extract_component(e, f);
  REQUIRE(comp.status == ExtractStatus::ok);
  CHECK(std::abs(f.dot(comp.t)) < 1e-10);     // residual orthogonal to score
  CHECK((e * comp.w).norm() < 1e-10);          // deflated block kills w
}

TEST_CASE("no-covariance and degenerate signals") {
  Eigen::MatrixXd e = random_centered(20, 3, 41);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(20);
  const ComponentResult comp = extract_component(e, f);
  CHECK(comp.status == ExtractStatus::no_covariance);
}

TEST_CASE("pls_fit on a noiseless two-column target drives eps* to zero") {
  const Eigen::MatrixXd e = random_centered(50, 10, 51);
  const Eigen::VectorXd f = centered(2.0 * e.col(1) - 1.5 * e.col(6));
  const PlsFitResult fit =
      pls_fit(e, f, Eigen::VectorXd::Zero(10), PlsOptions{});
  CHECK(fit.cv.eps_star < 1e-10);
  CHECK(fit.residual.norm() < 1e-8 * f.norm());
}

TEST_CASE("pls_fit on constant response returns the empty model") {
  const Eigen::MatrixXd e = random_centered(20, 4, 61);
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(20);
  const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(4));
  CHECK(fit.model.empty());
  CHECK(fit.cv.eps_star == 1.0);
  CHECK(fit.cv.eps_loo_p == 1.0);
}

TEST_CASE("pls_fit returns the empty model when no fit beats the mean") {
  // response statistically independent of the predictors
  const Eigen::MatrixXd e = random_centered(40, 5, 71);
  Rng rng(72);
  Eigen::VectorXd f(40);
  for (int i = 0; i < 40; ++i) f[i] = rng.normal();
  f = centered(f);
  const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(5));
  if (!fit.model.empty()) {
    CHECK(fit.cv.eps_star < 1.0);  // kept only if it beats the empty model
  } else {
    CHECK(fit.cv.eps_star == 1.0);
  }
}

TEST_CASE("full-component PLS equals OLS predictions") {
  const Eigen::MatrixXd e = random_centered(30, 5, 81);
  Rng rng(82);
  Eigen::VectorXd f(30);
  for (int i = 0; i < 30; ++i) {
    f[i] = e(i, 0) - 0.5 * e(i, 2) + 0.25 * e(i, 4) + 0.05 * rng.normal();
  }
  f = centered(f);

  PlsOptions opts;
  opts.max_components = 5;
  opts.early_stop = false;
  const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(5), opts);
  REQUIRE(fit.model.n_components() == 5);

  const Eigen::VectorXd beta_ols =
      (e.transpose() * e).ldlt().solve(e.transpose() * f);
  const Eigen::VectorXd pred_ols = e * beta_ols;
  const Eigen::VectorXd pred_pls = fit.model.fitted();
  CHECK((pred_ols - pred_pls).norm() <= 1e-8 * pred_ols.norm());
}

TEST_CASE("hat diagonal") {
  SUBCASE("single constant column gives 1/N") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Ones(10, 1);
    const Eigen::VectorXd hat = hat_diagonal(t);
    for (int i = 0; i < 10; ++i) CHECK(hat[i] == doctest::Approx(0.1));
  }
  SUBCASE("sums to the component count and matches the dense formula") {
    const Eigen::MatrixXd e = random_centered(15, 3, 91);
    Rng rng(92);
    Eigen::VectorXd f(15);
    for (int i = 0; i < 15; ++i) f[i] = e(i, 0) + 0.3 * rng.normal();
    f = centered(f);
    PlsOptions opts;
    opts.max_components = 3;
    opts.early_stop = false;
    const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(3), opts);
    REQUIRE(fit.model.n_components() == 3);
    const Eigen::VectorXd hat = hat_diagonal(fit.model.scores);
    CHECK(hat.sum() == doctest::Approx(3.0).epsilon(1e-8));
    const Eigen::VectorXd dense = oracles::hat_diag_dense(fit.model.scores);
    CHECK((hat - dense).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("rank-deficient scores raise") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(10, 2);
    t.col(0).setOnes();
    CHECK_THROWS_AS(hat_diagonal(t), NumericError);
  }
}

TEST_CASE("corrected_cv") {
  const Eigen::MatrixXd e = random_centered(25, 4, 101);
  Rng rng(102);
  Eigen::VectorXd f(25);
  for (int i = 0; i < 25; ++i) {
    f[i] = e(i, 0) - e(i, 3) + 0.2 * rng.normal();
  }
  f = centered(f);
  const double var = f.squaredNorm() / 24.0;

  SUBCASE("perfect fit gives zero") {
    PlsOptions opts;
    opts.max_components = 1;
    opts.early_stop = false;
    const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(4), opts);
    const CvError cv = corrected_cv(f, f, fit.model.scores, var);
    CHECK(cv.eps_star == 0.0);
  }
  SUBCASE("empty model convention") {
    const CvError cv =
        corrected_cv(f, Eigen::VectorXd::Zero(25), Eigen::MatrixXd(25, 0), var);
    CHECK(cv.eps_loo_p == 1.0);
    CHECK(cv.eps_star == 1.0);
  }
  SUBCASE("pseudo-LOO equals exact refit LOO in the full-rank case") {
    PlsOptions opts;
    opts.max_components = 4;
    opts.early_stop = false;
    const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(4), opts);
    REQUIRE(fit.model.n_components() == 4);
    const CvError cv =
        corrected_cv(f, fit.model.fitted(), fit.model.scores, var);
    const double loo = oracles::refit_loo_error(e, f);
    CHECK(cv.eps_loo_p * var == doctest::Approx(loo).epsilon(1e-8));
  }
  SUBCASE("saturated leverage raises") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4, 3);
    t(0, 0) = 1.0;
    t(1, 1) = 1.0;
    t(2, 2) = 1.0;
    CHECK_THROWS_AS(corrected_cv(Eigen::VectorXd::Zero(4),
                                 Eigen::VectorXd::Zero(4), t, 1.0),
                    NumericError);
  }
}

TEST_CASE("eps* penalty factor grows with the component count") {
  // same fit quality (eps fixed): the (1 - h/N)^{-1} (1 + tr) factor rises
  const int n = 50;
  double prev = 0.0;
  for (int h = 1; h <= 5; ++h) {
    const double factor =
        1.0 / (1.0 - static_cast<double>(h) / n) * (1.0 + h * 0.01);
    CHECK(factor > prev);
    prev = factor;
  }
}

TEST_CASE("weight map") {
  const Eigen::MatrixXd e = random_centered(30, 6, 111);
  Rng rng(112);
  Eigen::VectorXd f(30);
  for (int i = 0; i < 30; ++i) {
    f[i] = 2.0 * e(i, 1) + e(i, 4) + 0.1 * rng.normal();
  }
  f = centered(f);
  PlsOptions opts;
  opts.max_components = 4;
  opts.early_stop = false;
  const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(6), opts);
  REQUIRE(fit.model.n_components() == 4);

  SUBCASE("P^T W is unit upper triangular") {
    const Eigen::MatrixXd ptw =
        fit.model.loadings.transpose() * fit.model.weights;
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(ptw(i, i) - 1.0) < 1e-10);
      for (int j = 0; j < i; ++j) CHECK(std::abs(ptw(i, j)) < 1e-10);
    }
  }
  SUBCASE("training identity E R = T") {
    const Eigen::MatrixXd r = weight_map(fit.model);
    CHECK((e * r - fit.model.scores).cwiseAbs().maxCoeff() <
          1e-8 * fit.model.scores.cwiseAbs().maxCoeff());
  }
  SUBCASE("h = 1 weight map is w / (p^T w)") {
    PlsOptions one;
    one.max_components = 1;
    one.early_stop = false;
    const PlsFitResult f1 = pls_fit(e, f, Eigen::VectorXd::Zero(6), one);
    const Eigen::MatrixXd r = weight_map(f1.model);
    const double scale = f1.model.loadings.col(0).dot(f1.model.weights.col(0));
    CHECK((r.col(0) - f1.model.weights.col(0) / scale).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("new points: weight map equals deflation replay") {
    Rng rng2(113);
    Eigen::VectorXd x(6);
    for (int j = 0; j < 6; ++j) x[j] = rng2.normal();
    const Eigen::MatrixXd r = weight_map(fit.model);
    const Eigen::RowVectorXd via_map = x.transpose() * r;
    // replay: t_k = e_k^T w_k, e_{k+1} = e_k - t_k p_k
    Eigen::VectorXd e_cur = x;
    Eigen::RowVectorXd replay(4);
    for (int k = 0; k < 4; ++k) {
      replay[k] = e_cur.dot(fit.model.weights.col(k));
      e_cur -= replay[k] * fit.model.loadings.col(k);
    }
    CHECK((via_map - replay).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("score orthogonality and monotone residual on every fit") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const Eigen::MatrixXd e = random_centered(40, 8, seed);
    Rng rng(seed + 1000);
    Eigen::VectorXd f(40);
    for (int i = 0; i < 40; ++i) {
      f[i] = e(i, 0) + 0.7 * e(i, 3) - 0.2 * e(i, 5) + 0.3 * rng.normal();
    }
    f = centered(f);
    PlsOptions opts;
    opts.max_components = 8;
    opts.early_stop = false;
    const PlsFitResult fit = pls_fit(e, f, Eigen::VectorXd::Zero(8), opts);
    const Eigen::MatrixXd& t = fit.model.scores;
    for (int a = 0; a < t.cols(); ++a) {
      for (int b = 0; b < a; ++b) {
        CHECK(std::abs(t.col(a).dot(t.col(b))) <=
              1e-8 * t.col(a).norm() * t.col(b).norm());
      }
    }
    // residual norm nonincreasing in h
    Eigen::VectorXd resid = f;
    double prev = resid.norm();
    for (int k = 0; k < t.cols(); ++k) {
      resid -= fit.model.inner_coeffs[k] * t.col(k);
      CHECK(resid.norm() <= prev + 1e-12);
      prev = resid.norm();
    }
  }
}

TEST_CASE("pls_fit input validation") {
  const Eigen::MatrixXd e = random_centered(2, 3, 121);
  CHECK_THROWS_AS(pls_fit(e, Eigen::VectorXd::Zero(2), Eigen::VectorXd()),
                  ConfigError);
}
