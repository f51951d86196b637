#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hpce/design.hpp"
#include "hpce/distributions.hpp"
#include "hpce/errors.hpp"
#include "hpce/kl_expansion.hpp"
#include "hpce/rng.hpp"
#include "hpce/sobol_sequence.hpp"
#include "oracles.hpp"

using namespace hpce;

TEST_CASE("sobol first nonzero point is the midpoint") {
  const Eigen::MatrixXd pts = sobol_points(1, 2, 1);
  CHECK(pts(0, 0) == 0.5);
  CHECK(pts(0, 1) == 0.5);
}

TEST_CASE("sobol frozen reference values") {
  // Reference points of the standard (unscrambled, Joe-Kuo) sequence.
  const Eigen::MatrixXd pts = sobol_points(34, 64, 0);
  CHECK(pts.row(0).cwiseAbs().maxCoeff() == 0.0);  // index 0 is all zeros
  CHECK(pts(2, 0) == 0.75);
  CHECK(pts(2, 1) == 0.25);
  CHECK(pts(2, 63) == 0.75);
  CHECK(pts(3, 2) == 0.75);
  CHECK(pts(7, 0) == 0.125);
  CHECK(pts(7, 1) == 0.625);
  CHECK(pts(7, 2) == 0.375);
  CHECK(pts(7, 16) == 0.125);
  CHECK(pts(7, 39) == 0.125);
  CHECK(pts(11, 0) == 0.4375);
  CHECK(pts(11, 1) == 0.5625);
  CHECK(pts(11, 2) == 0.1875);
  CHECK(pts(11, 3) == 0.6875);
  CHECK(pts(11, 63) == 0.9375);
  CHECK(pts(33, 0) == 0.546875);
  CHECK(pts(33, 1) == 0.765625);
  CHECK(pts(33, 16) == 0.671875);
  CHECK(pts(33, 39) == 0.953125);
}

TEST_CASE("sobol range and determinism") {
  const Eigen::MatrixXd a = sobol_points(1000, 8, 1);
  CHECK(a.minCoeff() >= 0.0);
  CHECK(a.maxCoeff() < 1.0);
  const Eigen::MatrixXd b = sobol_points(1000, 8, 1);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);  // bit identical
  CHECK_THROWS_AS(sobol_points(10, 70, 1), ConfigError);
}

TEST_CASE("sobol beats pseudo-random sets on L2-star discrepancy") {
  const Eigen::MatrixXd qmc = sobol_points(256, 2, 1);
  const double d_qmc = oracles::l2_star_discrepancy_sq(qmc);
  double mc_mean = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng(1000 + static_cast<std::uint64_t>(rep));
    Eigen::MatrixXd mc(256, 2);
    for (Eigen::Index i = 0; i < mc.size(); ++i) {
      mc(i / 2, i % 2) = rng.uniform();
    }
    mc_mean += oracles::l2_star_discrepancy_sq(mc);
  }
  mc_mean /= 100.0;
  CHECK(d_qmc < mc_mean);
}

TEST_CASE("normal quantile against bisection on the CDF") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.0013499) == doctest::Approx(-3.0).epsilon(1e-4));

  // Bisect in the lower tail where the CDF evaluation has no cancellation;
  // the upper tail follows from the exact symmetry Phi(-x) = 1 - Phi(x).
  auto bisect_cdf = [](double p) {
    const bool flip = p > 0.5;
    if (flip) p = 1.0 - p;
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return flip ? -0.5 * (lo + hi) : 0.5 * (lo + hi);
  };
  for (double p : {1e-10, 1e-6, 0.0013499, 0.2, 0.5, 0.8, 0.999, 1 - 1e-8}) {
    CHECK(normal_quantile(p) == doctest::Approx(bisect_cdf(p)).epsilon(1e-9));
  }
}

TEST_CASE("quantile round trip |Phi(Phi^-1(u)) - u| <= 1e-12 u") {
  for (double e = -10.0; e <= -0.31; e += 0.25) {
    const double u = std::pow(10.0, e);
    CHECK(std::abs(normal_cdf(normal_quantile(u)) - u) <= 1e-12 * u);
    const double v = 1.0 - u;
    CHECK(std::abs(normal_cdf(normal_quantile(v)) - v) <= 1e-12);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), NumericError);
  CHECK_THROWS_AS(normal_quantile(1.0), NumericError);
}

TEST_CASE("marginal transforms") {
  SUBCASE("standard gaussian is the identity") {
    MarginalSpec m{MarginalKind::standard_gaussian, 0.0, 1.0};
    CHECK(m.from_gaussian(1.7) == 1.7);
    CHECK(m.from_gaussian(-0.3) == -0.3);
  }
  SUBCASE("lognormal at xi = 0 is exp(lambda)") {
    MarginalSpec m{MarginalKind::lognormal, 2.0e11, 3.0e10};
    CHECK(m.from_gaussian(0.0) == doctest::Approx(1.9778727e11).epsilon(1e-6));
    // moment match: E[X] under Gauss-Hermite quadrature equals the mean
    const auto quad = oracles::gauss_hermite(48);
    double mean = 0.0, mean_sq = 0.0;
    for (int k = 0; k < quad.nodes.size(); ++k) {
      const double x = m.from_gaussian(quad.nodes[k]);
      mean += quad.weights[k] * x;
      mean_sq += quad.weights[k] * x * x;
    }
    CHECK(mean == doctest::Approx(2.0e11).epsilon(1e-10));
    CHECK(std::sqrt(mean_sq - mean * mean) ==
          doctest::Approx(3.0e10).epsilon(1e-8));
  }
  SUBCASE("gumbel max median from the closed-form quantile") {
    MarginalSpec m{MarginalKind::gumbel_max, 1.0e4, 1.5e3};
    const double median = m.quantile(0.5);
    CHECK(median == doctest::Approx(9753.5736).epsilon(1e-6));
    // numeric CDF inversion oracle
    double lo = 0.0, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (m.cdf(mid) < 0.5 ? lo : hi) = mid;
    }
    CHECK(median == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
    // moments
    const auto quad = oracles::gauss_hermite(48);
    double mean = 0.0;
    for (int k = 0; k < quad.nodes.size(); ++k) {
      mean += quad.weights[k] * m.from_gaussian(quad.nodes[k]);
    }
    CHECK(mean == doctest::Approx(1.0e4).epsilon(1e-9));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS((MarginalSpec{MarginalKind::lognormal, -1.0, 1.0}.validate()),
                    ConfigError);
    CHECK_THROWS_AS((MarginalSpec{MarginalKind::gumbel_max, 1.0, 0.0}.validate()),
                    ConfigError);
  }
}

TEST_CASE("round trip quantile(cdf(x)) = x for every marginal kind") {
  const std::vector<MarginalSpec> specs = {
      {MarginalKind::standard_gaussian, 0.0, 1.0},
      {MarginalKind::lognormal, 2.0e11, 3.0e10},
      {MarginalKind::gumbel_max, 1.0e4, 1.5e3},
  };
  for (const MarginalSpec& m : specs) {
    for (int k = 1; k < 1000; ++k) {
      const double u = k / 1000.0;
      const double x = m.quantile(u);
      const double x2 = m.quantile(m.cdf(x));
      CHECK(std::abs(x2 - x) <= 1e-9 * (std::abs(x) + 1e-300));
    }
  }
}

TEST_CASE("kl eigenpairs of the exponential kernel") {
  RandomFieldSpec spec{3.0, 0.5, 2.1e11, 0.2, 40};
  const KlExpansion kl(spec);

  SUBCASE("trace captures at least 95 percent of the variance") {
    CHECK(kl.captured_variance_ratio() >= 0.95);
    CHECK(kl.captured_variance_ratio() <= 1.0 + 1e-12);
  }
  SUBCASE("eigenvalues strictly decreasing") {
    for (int k = 1; k < kl.n_terms(); ++k) {
      CHECK(kl.eigenvalue(k) < kl.eigenvalue(k - 1));
    }
  }
  SUBCASE("eigenfunctions orthonormal under Simpson quadrature") {
    const int n = 4000;  // panels
    const double h = spec.domain_length / n;
    for (int a = 0; a < 6; ++a) {
      for (int b = a; b < 6; ++b) {
        double integral = 0.0;
        for (int i = 0; i <= n; ++i) {
          const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
          const double x = i * h;
          integral += w * kl.eigenfunction(a, x) * kl.eigenfunction(b, x);
        }
        integral *= h / 3.0;
        CHECK(std::abs(integral - (a == b ? 1.0 : 0.0)) < 1e-8);
      }
    }
  }
  SUBCASE("captured variance is monotone in the truncation order") {
    double prev = 0.0;
    for (int m : {5, 10, 20, 40}) {
      RandomFieldSpec s = spec;
      s.n_terms = m;
      const double ratio = KlExpansion(s).captured_variance_ratio();
      CHECK(ratio >= prev);
      prev = ratio;
    }
  }
}

TEST_CASE("field realization statistics") {
  RandomFieldSpec spec{3.0, 0.5, 2.1e11, 0.2, 40};
  const KlExpansion kl(spec);
  const std::vector<double> x = {1.0};

  SUBCASE("zero realization gives exp(mu_N) everywhere") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(40);
    const Eigen::VectorXd field =
        field_realization(spec, kl, zero, {0.3, 1.5, 2.9});
    const double expected = spec.mean / std::sqrt(1.0 + spec.cov * spec.cov);
    for (Eigen::Index i = 0; i < field.size(); ++i) {
      CHECK(field[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("Monte Carlo mean and cov at a fixed point") {
    Rng rng(31);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    Eigen::VectorXd xi(40);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < 40; ++k) xi[k] = rng.normal();
      const double v = field_realization(spec, kl, xi, x)[0];
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(mean - spec.mean) / spec.mean < 0.01);
    CHECK(std::abs(sd / mean - spec.cov) / spec.cov < 0.02);
  }
}

TEST_CASE("design CSV round trip is bit exact") {
  std::vector<MarginalSpec> marginals = {
      {MarginalKind::lognormal, 2.0e11, 3.0e10},
      {MarginalKind::gumbel_max, 1.0e4, 1.5e3},
  };
  DesignOfExperiments doe = make_design(17, 2, 1, &marginals);
  Eigen::VectorXd raw(17);
  for (int i = 0; i < 17; ++i) raw[i] = std::sin(i * 0.7) * 1e-3;
  attach_responses(doe, raw);

  const std::string path = "/tmp/hpce_test_design.csv";
  write_design_csv(path, doe);
  const DesignOfExperiments back = read_design_csv(path);

  CHECK((back.unit - doe.unit).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.gaussian - doe.gaussian).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.physical - doe.physical).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.response_mean == doe.response_mean);
  CHECK((back.response_centered - doe.response_centered).cwiseAbs().maxCoeff() ==
        0.0);
  std::filesystem::remove(path);
}

TEST_CASE("design invariants") {
  DesignOfExperiments doe = make_design(64, 3, 1, nullptr);
  CHECK((doe.gaussian - to_gaussian(doe.unit)).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd raw = doe.gaussian.col(0) * 2.0;
  attach_responses(doe, raw);
  CHECK(std::abs(doe.response_centered.mean()) <=
        1e-12 * (std::abs(doe.response_mean) + 1.0));
  CHECK_THROWS_AS(make_design(10, 2, 0, nullptr), ConfigError);
}

TEST_CASE("design CSV reader accepts CRLF files from external tools") {
  const std::string path = "/tmp/hpce_crlf.csv";
  std::ofstream(path) << "xi_1,xi_2,response\r\n"
                      << "0.1,-0.4,2.5\r\n"
                      << "1.2,0.3,-0.75\r\n";
  const DesignOfExperiments doe = read_design_csv(path);
  CHECK(doe.n_samples() == 2);
  CHECK(doe.gaussian(1, 0) == 1.2);
  CHECK(doe.response_mean == doctest::Approx(0.875));
  std::filesystem::remove(path);
}
