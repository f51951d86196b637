#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hpce/design.hpp"
#include "hpce/distributions.hpp"
#include "hpce/errors.hpp"
#include "hpce/models.hpp"
#include "hpce/reliability.hpp"

using namespace hpce;

namespace {

SobolResult handmade_sobol(std::initializer_list<double> totals) {
  SobolResult s;
  s.total.resize(static_cast<Eigen::Index>(totals.size()));
  int i = 0;
  for (double t : totals) s.total[i++] = t;
  s.main = 0.5 * s.total;
  s.model_variance = 1.0;
  return s;
}

}  // namespace

TEST_CASE("screen keeps variables above the threshold") {
  const SobolResult s = handmade_sobol({0.6, 0.01, 0.3, 0.019, 0.05});
  CHECK(screen(s, 0.018) == std::vector<int>{0, 2, 3, 4});
  CHECK(screen(s, 0.02) == std::vector<int>{0, 2, 4});
  CHECK_THROWS_AS(screen(s, 0.99), ConfigError);
  CHECK_THROWS_AS(screen(s, 0.0), ConfigError);

  SUBCASE("raising the threshold never grows the retained set") {
    std::size_t prev = 5;
    for (double thr : {0.005, 0.02, 0.1, 0.4}) {
      const auto kept = screen(s, thr);
      CHECK(kept.size() <= prev);
      prev = kept.size();
    }
  }
}

TEST_CASE("reconstruct picks the strategy from the basis-vs-sample count") {
  // mixed function: true effects in variables 1 and 2 only
  const AnalyticCase c = analytic_case("mixed", 8);
  DesignOfExperiments doe = make_design(200, 8, 1, nullptr);
  attach_responses(doe, c.fn, 1);

  SUBCASE("small retained set -> OLSR path") {
    const ReconstructedModel rec =
        reconstruct({0, 1}, doe.gaussian, doe.response_centered,
                    doe.response_mean, 3);
    CHECK(rec.strategy == "olsr_reconstruct");  // count_basis(2,3)=9 < 200
    CHECK(rec.model.dim() == 2);
    // the reduced surrogate still reproduces the (x1, x2)-part of the data
    Eigen::VectorXd xi(2);
    xi << 1.0, 2.0;
    CHECK(rec.model.evaluate(xi) == doctest::Approx(3.0).epsilon(0.15));
  }
  SUBCASE("wide retained set -> hierarchical path") {
    DesignOfExperiments small = make_design(60, 8, 1, nullptr);
    attach_responses(small, c.fn, 1);
    const ReconstructedModel rec =
        reconstruct({0, 1, 2, 3, 4, 5, 6, 7}, small.gaussian,
                    small.response_centered, small.response_mean, 3);
    CHECK(rec.strategy == "sohplsr_reconstruct");  // count_basis(8,3)=164 >= 60
    CHECK(rec.model.dim() == 8);
  }
  SUBCASE("empty retained set raises") {
    CHECK_THROWS_AS(reconstruct({}, doe.gaussian, doe.response_centered,
                                doe.response_mean, 2),
                    ConfigError);
  }
}

TEST_CASE("surrogate failure probability against the normal tail") {
  // g = xi1 with exceedance at 3: Pf = 1 - Phi(3) = Phi(-3)
  const PceModel linear(1, 1, 0.0, {{MultiIndex{1}, 1.0}});
  const ReliabilityResult res = failure_probability(linear, 3.0, 1000000, 9, 2);
  const double exact = normal_cdf(-3.0);
  CHECK(std::abs(res.pf - exact) <= 3.0 * res.pf_se);
  CHECK(res.pf_se == doctest::Approx(std::sqrt(res.pf * (1 - res.pf) / 1e6)));

  SUBCASE("deterministic for a fixed seed and thread count independent") {
    const ReliabilityResult a = failure_probability(linear, 3.0, 200000, 3, 1);
    const ReliabilityResult b = failure_probability(linear, 3.0, 200000, 3, 2);
    CHECK(a.pf == b.pf);
  }
  SUBCASE("impossible event gives zero with a warning flag") {
    const ReliabilityResult zero = failure_probability(linear, 50.0, 20000, 5, 2);
    CHECK(zero.pf == 0.0);
    CHECK(zero.zero_failure_warning);
  }
}

TEST_CASE("direct MC reference on the closed-form tail") {
  const auto g = [](const Eigen::VectorXd& xi) { return xi[0]; };
  const McEstimate est = direct_mc_reference(g, 1, 3.0, 1000000, 11, 2);
  CHECK(std::abs(est.pf - normal_cdf(-3.0)) <= 3.0 * est.se);

  const McEstimate zero = direct_mc_reference(g, 1, 100.0, 10000, 11, 2);
  CHECK(zero.pf == 0.0);
  CHECK(zero.zero_failure_warning);
}

TEST_CASE("screen-reconstruct-pf pipeline on the mixed analytic model") {
  // failure event xi1 + xi1 xi2 > limit with retained variables {1, 2}
  const AnalyticCase c = analytic_case("mixed", 6);
  DesignOfExperiments doe = make_design(300, 6, 1, nullptr);
  attach_responses(doe, c.fn, 1);
  const ReconstructedModel rec = reconstruct(
      {0, 1}, doe.gaussian, doe.response_centered, doe.response_mean, 2);
  CHECK(rec.strategy == "olsr_reconstruct");

  const double limit = 4.0;
  const ReliabilityResult pf_surrogate =
      failure_probability(rec.model, limit, 400000, 21, 2);
  const McEstimate pf_true = direct_mc_reference(c.fn, 6, limit, 400000, 22, 2);
  const double combined =
      3.0 * std::sqrt(pf_surrogate.pf_se * pf_surrogate.pf_se +
                      pf_true.se * pf_true.se);
  CHECK(std::abs(pf_surrogate.pf - pf_true.pf) <=
        std::max(0.05 * pf_true.pf, combined) + 5e-4);
}
