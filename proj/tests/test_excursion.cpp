#include <doctest.h>

#include <cmath>
#include <vector>

#include "lilx/errors.hpp"
#include "lilx/excursion.hpp"
#include "lilx/rng.hpp"
#include "lilx/stats.hpp"
#include "oracles.hpp"

using namespace lilx;

TEST_SUITE("excursion") {

TEST_CASE("exceedance rate is minus the log of the CDF") {
  for (Sided s : {Sided::One, Sided::Two}) {
    const ExcursionMaxLaw law = ExcursionMaxLaw::ou(s);
    for (int i = 1; i <= 200; ++i) {
      const double l = 0.025 * i;
      CHECK(std::fabs(-std::log(law.cdf(l)) - law.exceedance_rate(l)) < 1e-12 * std::max(1.0, law.exceedance_rate(l)));
    }
  }
}

TEST_CASE("OU one-sided rate is 1/(2 S(lambda))") {
  const ExcursionMaxLaw law = ExcursionMaxLaw::ou();
  for (double l : {0.1, 0.5, 1.0, 1.5, 3.0, 6.0}) {
    CAPTURE(l);
    CHECK(law.exceedance_rate(l) == doctest::Approx(oracle::half_inverse_scale(l)).epsilon(1e-13));
  }
}

TEST_CASE("two-sided CDF is the square of the one-sided CDF") {
  const ExcursionMaxLaw one = ExcursionMaxLaw::ou(Sided::One), two = ExcursionMaxLaw::ou(Sided::Two);
  double worst = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double l = 0.008 * i;
    const double c1 = one.cdf(l);
    worst = std::max(worst, std::fabs(two.cdf(l) - c1 * c1));
    CHECK(two.cdf(l) <= c1);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("driftless Brownian exceedance rates") {
  const ExcursionMaxLaw one(ScaleFunctionHandle::general(brownian_field()), Sided::One);
  const ExcursionMaxLaw two(ScaleFunctionHandle::general(brownian_field()), Sided::Two);
  CHECK(one.exceedance_rate(0.5) == 1.0);
  CHECK(two.exceedance_rate(1.0) == 1.0);
  for (int i = 1; i <= 1000; ++i) {
    const double l = 0.01 * i;
    CHECK(one.exceedance_rate(l) == 1.0 / (2.0 * l));
    CHECK(two.exceedance_rate(l) == 1.0 / l);
  }
}

TEST_CASE("general OU field reproduces the closed-form law") {
  const ExcursionMaxLaw closed = ExcursionMaxLaw::ou();
  const ExcursionMaxLaw general(ScaleFunctionHandle::general(ou_field()));
  for (double l : {0.2, 1.0, 2.5, 4.0}) CHECK(general.cdf(l) == doctest::Approx(closed.cdf(l)).epsilon(1e-8));
}

TEST_CASE("two-sided law needs a declared odd scale function") {
  CoefficientField f = ou_field();
  f.symmetric = false;
  CHECK_THROWS_AS(ExcursionMaxLaw(ScaleFunctionHandle::general(f), Sided::Two), DomainError);
  CHECK_THROWS_AS((void)ExcursionMaxLaw::ou().cdf(0.0), DomainError);
}

TEST_CASE("quantile inverts the CDF") {
  for (Sided s : {Sided::One, Sided::Two}) {
    const ExcursionMaxLaw law = ExcursionMaxLaw::ou(s);
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999}) {
      CAPTURE(p);
      CHECK(law.cdf(law.quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK_THROWS_AS((void)law.quantile(1.0), DomainError);
  }
}

TEST_CASE("inverse-transform draws pass KS against the CDF") {
  const ExcursionMaxLaw law = ExcursionMaxLaw::ou();
  RngStream rng(2024, 0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = law.sample(rng.uniform());
  const double ks = ks_statistic(EmpiricalCdf(xs), [&](double l) { return l > 0 ? law.cdf(l) : 0.0; });
  CHECK(ks < 1.628 / std::sqrt(1e5));

  RngStream again(2024, 0);
  CHECK(law.sample(again.uniform()) == xs[0]);
}

TEST_CASE("conditional draws follow the conditional law") {
  const ExcursionMaxLaw law = ExcursionMaxLaw::ou();
  const double t = 2.0;
  const double ft = law.cdf(t);
  RngStream rng(5, 1);
  std::vector<double> xs(20000);
  for (double& x : xs) {
    x = law.sample_above(t, rng.uniform());
    REQUIRE(x > t);
  }
  const auto cond = [&](double l) { return l <= t ? 0.0 : (law.cdf(l) - ft) / (1.0 - ft); };
  CHECK(ks_p_value(ks_statistic(EmpiricalCdf(xs), cond), xs.size()) > 0.01);

  // Thresholds whose exceedance probability underflows.
  for (double big : {12.0, 30.0}) CHECK(law.sample_above(big, 0.5) > big);
}

}  // TEST_SUITE
