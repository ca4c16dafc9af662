#include <doctest.h>

#include <gsl/gsl_sf_dawson.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lilx/asymptotics.hpp"
#include "lilx/errors.hpp"
#include "oracles.hpp"

using namespace lilx;

TEST_SUITE("asymptotics") {

TEST_CASE("LogIndex") {
  CHECK_THROWS_AS(LogIndex(1.0), DomainError);
  const LogIndex i = LogIndex::from_log10(8);
  CHECK(i.ln_n() == doctest::Approx(8 * std::log(10.0)));
  CHECK(i.l2() == doctest::Approx(std::log(i.ln_n())));
  CHECK(i.l3() == doctest::Approx(std::log(std::log(i.ln_n()))));
  CHECK(LogIndex::from_n(1000).ln_n() == doctest::Approx(std::log(1000.0)));
}

TEST_CASE("normalization at n = 1e8, x = 0, factor by factor") {
  const double L = 8 * std::log(10.0), L2 = std::log(L), L3 = std::log(L2);
  for (Sided s : {Sided::One, Sided::Two}) {
    const double k = s == Sided::One ? std::log(3 / std::sqrt(2.0)) : std::log(3 / (2 * std::sqrt(2.0)));
    CHECK(centering_constant(s) == doctest::Approx(k).epsilon(1e-15));
    const double phi = 1.5 * L2 - L3 - k;
    const double q = (2 * L + phi) / (2 * L + phi / 2) * std::exp(-phi * phi / (4 * L));
    const double c = q / (1 + (-L3 - k) / (1.5 * L2));
    const auto sch = NormalizationSchedule::compute(LogIndex(L), 0.0, s);
    CHECK(sch.phi == doctest::Approx(phi).epsilon(1e-14));
    CHECK(sch.beta == doctest::Approx(phi).epsilon(1e-14));
    CHECK(sch.alpha == doctest::Approx(phi / L).epsilon(1e-14));
    CHECK(sch.q == doctest::Approx(q).epsilon(1e-14));
    CHECK(sch.c == doctest::Approx(c).epsilon(1e-14));
    CHECK(sch.x_star == doctest::Approx(phi).epsilon(1e-14));
    CHECK(sch.threshold() == doctest::Approx(1 + phi / (2 * L)).epsilon(1e-15));
    CHECK(u_cdf_closed_form(LogIndex(L), 0.0, s) == doctest::Approx(std::exp(-c)).epsilon(1e-14));
  }
}

TEST_CASE("c_n(x) tends to 1 and the closed form to the Gumbel law") {
  // Pointwise only: for x > 0, c_n crosses 1 and comes back down.
  for (double x : {-1.0, 0.0, 2.0}) {
    const double near = std::fabs(NormalizationSchedule::compute(LogIndex::from_log10(4), x).c - 1.0);
    const double far = std::fabs(NormalizationSchedule::compute(LogIndex::from_log10(1e50), x).c - 1.0);
    CAPTURE(x);
    CHECK(far < near);
    CHECK(far < 0.05);
    CHECK(u_cdf_closed_form(LogIndex::from_log10(1e50), x) == doctest::Approx(gumbel_cdf(x)).epsilon(0.05));
  }
}

TEST_CASE("zero branch below -x_star") {
  for (double e : {4.0, 16.0, 64.0}) {
    const LogIndex ix = LogIndex::from_log10(e);
    const double xs = NormalizationSchedule::compute(ix, 0.0).x_star;
    CHECK(u_cdf_exact(ix, -xs) == 0.0);
    CHECK(u_cdf_exact(ix, -xs - 1.0) == 0.0);
    CHECK(u_cdf_closed_form(ix, -xs) == 0.0);
    CHECK(u_cdf_exact(ix, 0.0) > 0.0);
  }
  // phi_n(0) > 0 for every n, but phi_n(-1) < 0 near L2 n = 2/3.
  const LogIndex small(std::exp(2.0 / 3.0));
  CHECK(NormalizationSchedule::compute(small, -1.0).phi < 0.0);
  CHECK(u_cdf_exact(small, -1.0) == 0.0);
}

TEST_CASE("tail exponent diverges at y <= 1") {
  const TailSupLaw law(LogIndex::from_n(1000));
  CHECK_THROWS_AS((void)law.tail_exponent(1.0), DivergenceError);
  CHECK_THROWS_AS((void)law.tail_exponent(0.7), DivergenceError);
  CHECK(law.tail_cdf(1.0) == 0.0);
  CHECK(law.tail_cdf(0.5) == 0.0);
  CHECK(law.tail_cdf(4.0) > 1.0 - 1e-12);
  CHECK(law.tail_sf(4.0) > 0.0);
  CHECK(law.tail_sf(4.0) < 1e-12);
}

TEST_CASE("only the closed-form OU base law is supported") {
  CHECK_THROWS_AS(TailSupLaw(LogIndex(10.0), ExcursionMaxLaw(ScaleFunctionHandle::general(ou_field()))),
                  DomainError);
}

TEST_CASE("tail exponent against a brute-force 1e7-term sum") {
  // E(1e3) - E(1e7) = sum_{1e3 <= j < 1e7} 1 / (2 S(1.1 sqrt(2 ln j))).
  const double y = 1.1;
  long double brute = 0.0L;
  double oracle_err = 0.0;
  for (long j = 1000; j < 10'000'000; ++j) {
    const double x = y * std::sqrt(2.0 * std::log(static_cast<double>(j)));
    gsl_sf_result d;
    gsl_sf_dawson_e(x / std::sqrt(2.0), &d);
    const double term = std::exp(-0.5 * x * x) / (2.0 * std::sqrt(2.0) * d.val);
    brute += term;
    oracle_err += term * (d.err / d.val + 8e-16 * (1 + 0.5 * x * x));
  }
  const TailExponent a = TailSupLaw(LogIndex::from_n(1000)).tail_exponent(y);
  const TailExponent b = TailSupLaw(LogIndex::from_n(1e7)).tail_exponent(y);
  const double diff = a.value.to_double() - b.value.to_double();
  const double bound = a.error_bound.to_double() + b.error_bound.to_double() + oracle_err +
                       1e-15 * a.value.to_double();
  CAPTURE(diff);
  CAPTURE(static_cast<double>(brute));
  CAPTURE(bound);
  CHECK(std::fabs(diff - static_cast<double>(brute)) <= bound);
  CHECK(a.relative_error() < 1e-9);
}

TEST_CASE("integer and real starting index agree at the switch") {
  const double y = 1.05;
  const TailExponent below = TailSupLaw(LogIndex(36.0)).tail_exponent(y);
  const TailExponent above = TailSupLaw(LogIndex(36.0 + 1e-12)).tail_exponent(y);
  CHECK(above.euler_maclaurin);
  const double gap = std::fabs(below.value.to_double() - above.value.to_double());
  CHECK(gap <= below.error_bound.to_double() + above.error_bound.to_double() + 1e-11 * below.value.to_double());
}

TEST_CASE("exact exponent over its leading-order integral tends to 1") {
  double prev = 1.0;
  for (double e : {2.0, 4.0, 8.0}) {
    const LogIndex ix = LogIndex::from_log10(e);
    const double y = NormalizationSchedule::compute(ix, 0.0).threshold();
    const TailSupLaw law(ix);
    const double ratio = std::exp(law.tail_exponent(y).value.log_abs - law.leading_order_exponent(y).log_abs);
    CAPTURE(e);
    CAPTURE(ratio);
    CHECK(std::fabs(ratio - 1.0) < prev);
    prev = std::fabs(ratio - 1.0);
  }
  CHECK(prev < 0.02);
}

TEST_CASE("two-sided exponent doubles the one-sided exponent") {
  const LogIndex ix = LogIndex::from_log10(6);
  const TailSupLaw one(ix), two(ix, ExcursionMaxLaw::ou(Sided::Two));
  for (double y : {1.02, 1.2, 1.6}) {
    CHECK(two.tail_exponent(y).value.log_abs == doctest::Approx(one.tail_exponent(y).value.log_abs + std::numbers::ln2).epsilon(1e-12));
  }
}

TEST_CASE("tightening the tolerance stays within the reported bound") {
  for (double e : {3.0, 12.0, 40.0, 300.0}) {
    const LogIndex ix = LogIndex::from_log10(e);
    for (double x : {-1.0, 0.0, 3.0}) {
      const double y = NormalizationSchedule::compute(ix, x).threshold();
      const TailExponent coarse = TailSupLaw(ix, ExcursionMaxLaw::ou(), 1e-8).tail_exponent(y);
      const TailExponent fine = TailSupLaw(ix, ExcursionMaxLaw::ou(), 5e-9).tail_exponent(y);
      CAPTURE(e);
      CAPTURE(x);
      CHECK(std::fabs(coarse.value.to_double() - fine.value.to_double()) < coarse.error_bound.to_double());
    }
  }
}

TEST_CASE("method switches under tightening stay within the reported bound") {
  // Small n with y well above 1: the rigorous monotone bound serves coarse
  // tolerances and Euler-Maclaurin takes over below them.
  int moved = 0;
  for (auto [n, y] : {std::pair{5.0, 2.0}, {20.0, 3.0}, {5.0, 3.0}}) {
    const LogIndex ix = LogIndex::from_n(n);
    TailExponent prev = TailSupLaw(ix, ExcursionMaxLaw::ou(), 1e-1).tail_exponent(y);
    for (double tol = 1e-2; tol >= 1e-10; tol /= 10) {
      const TailExponent next = TailSupLaw(ix, ExcursionMaxLaw::ou(), tol).tail_exponent(y);
      const double change = std::fabs(next.value.to_double() - prev.value.to_double());
      CAPTURE(n);
      CAPTURE(tol);
      CHECK(change <= prev.error_bound.to_double());
      if (change > 0) ++moved;
      prev = next;
    }
  }
  CHECK(moved > 0);
}

TEST_CASE("exact CDF is monotone in x and lies in [0, 1]") {
  const LogIndex ix = LogIndex::from_log10(16);
  double prev = 0.0;
  for (double x = -6.0; x <= 12.0; x += 0.25) {
    const double f = u_cdf_exact(ix, x);
    CHECK(f >= prev);
    CHECK(f <= 1.0);
    prev = f;
  }
  const BoundedValue b = u_cdf_exact_bounded(ix, 0.0);
  CHECK(b.value == u_cdf_exact(ix, 0.0));
  CHECK(b.error_bound < 1e-8);
}

TEST_CASE("parallel grid equals the serial reference") {
  const std::vector<double> xs = linear_grid(-2.0, 8.0, 101);
  for (Sided s : {Sided::One, Sided::Two}) {
    const LogIndex ix = LogIndex::from_log10(32);
    const auto par = u_cdf_exact_grid(ix, xs, s);
    const auto ser = u_cdf_exact_grid_serial(ix, xs, s);
    CHECK(par == ser);
    CHECK(ser[37] == u_cdf_exact(ix, xs[37], s));
  }
}

TEST_CASE("KS distance to the Gumbel law shrinks along the ladder") {
  CHECK(linear_grid(0.0, 5.0, 1) == std::vector<double>{0.0});
  const LogIndex i8 = LogIndex::from_log10(8);
  CHECK(ks_to_gumbel(i8, 0.0, 0.0, 1) == doctest::Approx(std::fabs(u_cdf_exact(i8, 0.0) - std::exp(-1.0))));
  for (Sided s : {Sided::One, Sided::Two}) {
    double prev = 1.0;
    for (double e : {4.0, 8.0, 16.0, 32.0}) {
      const double ks = ks_to_gumbel(LogIndex::from_log10(e), -2.0, 8.0, 51, s);
      CHECK(ks < prev);
      prev = ks;
    }
  }
}

TEST_CASE("ratio of exact to closed-form exponents tends to 1") {
  const std::vector<double> xs{-1.0, 0.0, 1.0, 3.0};
  double prev = 1e9;
  for (double e : {8.0, 16.0, 32.0, 64.0}) {
    const double d = closed_form_exponent_deviation(LogIndex::from_log10(e), xs);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("strong-law probabilities") {
  SUBCASE("asymptotic exponent formula") {
    const LogIndex ix(1e3);
    const StrongLawPoint p = strong_law_prob(ix, 1.4);
    CHECK(p.y == doctest::Approx(std::sqrt(1 + 1.4 * ix.l2() / ix.ln_n())));
    CHECK(p.asymptotic_exponent ==
          doctest::Approx(std::pow(ix.ln_n(), 0.1) / (1.4 * std::sqrt(2.0) * ix.l2())).epsilon(1e-13));
    CHECK(p.probability == doctest::Approx(std::exp(-p.exact_exponent)));
  }
  SUBCASE("exact over asymptotic exponent tends to 1") {
    double prev = 1e9;
    for (double ln_n : {1e3, 1e5, 1e7, 1e9, 1e11}) {
      const double r = strong_law_prob(LogIndex(ln_n), 1.4).ratio;
      CAPTURE(ln_n);
      CHECK(std::fabs(r - 1.0) < prev);
      prev = std::fabs(r - 1.0);
    }
    CHECK(prev < 0.02);
  }
  SUBCASE("above c = 3/2 the exponent falls and the probability rises") {
    const auto rows = strong_law_schedule(1.6, 2.0, 60);
    CHECK(rows.front().k == 2);
    for (std::size_t i = 10; i < rows.size(); ++i) {
      CHECK(rows[i].point.exact_exponent < rows[i - 1].point.exact_exponent);
      CHECK(rows[i].point.probability > rows[i - 1].point.probability);
    }
  }
  SUBCASE("partial sums accumulate the probabilities") {
    const auto rows = strong_law_schedule(1.4, 2.0, 20);
    double s = 0.0;
    for (const auto& r : rows) {
      s += r.point.probability;
      CHECK(r.partial_sum == doctest::Approx(s));
      CHECK(r.increment == r.point.probability);
    }
  }
  CHECK_THROWS_AS(strong_law_schedule(1.4, 1.0, 10), DomainError);
  CHECK_THROWS_AS(strong_law_prob(LogIndex(10.0), 0.0), DomainError);
}

TEST_CASE("expectation quadrature against a composite Simpson oracle") {
  // E U = -x_star + int_{-x_star}^inf (1 - F(x)) dx
  const LogIndex ix = LogIndex::from_log10(8);
  const double xs = NormalizationSchedule::compute(ix, 0.0).x_star;
  const double tail = oracle::simpson([&](double x) { return 1.0 - u_cdf_exact(ix, x); }, -xs, 45.0, 12000);
  const Expectation e = expectation_u(ix);
  CHECK(std::fabs(e.value - (-xs + tail)) < 1e-6);
  CHECK(e.error_bound < 1e-6);
}

TEST_CASE("expectation is finite along the ladder and nears Euler's constant beyond 1e8") {
  double prev = 1e9;
  for (double e : {8.0, 16.0, 32.0, 64.0, 256.0}) {
    const Expectation x = expectation_u(LogIndex::from_log10(e));
    CHECK(std::isfinite(x.value));
    const double gap = std::fabs(x.value - kEulerGamma);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(std::isfinite(expectation_u(LogIndex::from_log10(4), Sided::Two).value));
}

TEST_CASE("four-term expansion of the expected supremum") {
  const double k = std::log(3 / std::sqrt(2.0));
  for (double l2 : {3.0, 10.0, 100.0}) {
    const double l3 = std::log(l2), l4 = std::log(l3);
    const double v = expectation_expansion(l2);
    CHECK(2 * l2 * (v - 1) - 1.5 * l3 + l4 + k == doctest::Approx(kEulerGamma).epsilon(1e-12));
  }
  const double l3 = std::log(100.0), l4 = std::log(l3);
  CHECK(expectation_expansion(100.0) ==
        doctest::Approx(1 + 0.75 * l3 / 100 - 0.5 * l4 / 100 + 0.5 * (kEulerGamma - k) / 100).epsilon(1e-15));
  CHECK_THROWS_AS(expectation_expansion(1.0), DomainError);
}

}  // TEST_SUITE
