#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "lilx/errors.hpp"
#include "lilx/simulate.hpp"
#include "lilx/stats.hpp"

using namespace lilx;

namespace {

struct Moments {
  double mean = 0, var = 0, kurt = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double s2 = 0, s4 = 0;
  for (double x : v) {
    const double d = (x - m.mean) * (x - m.mean);
    s2 += d;
    s4 += d * d;
  }
  m.var = s2 / n;
  m.kurt = (s4 / n) / (m.var * m.var);
  return m;
}

double autocorrelation(const std::vector<double>& v, std::size_t lag, const Moments& m) {
  double s = 0;
  for (std::size_t i = 0; i + lag < v.size(); ++i) s += (v[i] - m.mean) * (v[i + lag] - m.mean);
  return s / static_cast<double>(v.size() - lag) / m.var;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("exact OU transition") {
  CHECK(ou_step(2.0, 0.3, 0.0) == doctest::Approx(2.0 * std::exp(-0.15)));
  CHECK(ou_step(0.0, 0.3, 1.0) == doctest::Approx(std::sqrt(1 - std::exp(-0.3))));
  // Long steps forget the start.
  CHECK(ou_step(5.0, 80.0, 0.7) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("path configuration is validated") {
  OuPathConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.steps() == 100'000'000);
  c.step_h = 0.01;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.step_h = 1e-4;
  c.horizon_T = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = OuPathConfig{};
  RngStream rng(1, 0);
  CHECK_THROWS_AS(simulate_ou(c, rng), ResourceError);
}

TEST_CASE("stationary OU marginals and correlations within 4 standard errors") {
  OuPathConfig c;
  c.step_h = 0.01;
  c.epsilon = 0.1;
  c.horizon_T = 2e4;
  RngStream rng(11, 0);
  const OuPath path = simulate_ou(c, rng);
  REQUIRE(path.values.size() == 2'000'001);
  const Moments m = moments(path.values);
  // Integrated autocorrelation times of X, X^2 - 1 and X^4 for rho(t) = e^{-t/2}.
  const double T = c.horizon_T;
  CHECK(std::fabs(m.mean) < 4 * std::sqrt(4 / T));
  CHECK(std::fabs(m.var - 1) < 4 * std::sqrt(4 / T));
  CHECK(std::fabs(m.kurt - 3) < 4 * std::sqrt(168 / T + 4 * 9 * 4 / T));
  for (double lag : {0.01, 1.0, 2.0}) {
    const auto k = static_cast<std::size_t>(std::lround(lag / c.step_h));
    CAPTURE(lag);
    CHECK(std::fabs(autocorrelation(path.values, k, m) - std::exp(-lag / 2)) < 4 * std::sqrt(4 / T));
  }
}

TEST_CASE("streaming scan equals extraction from the stored path") {
  OuPathConfig c;
  c.step_h = 1e-3;
  c.epsilon = 0.05;
  c.horizon_T = 500;
  RngStream a(3, 9), b(3, 9);
  const OuPath path = simulate_ou(c, a);
  const LocalTimePath lt = estimate_local_time(path, c.epsilon);
  const auto recs = extract_excursions(path, lt);
  const OuScanSummary s = simulate_ou_streaming(c, b);
  CHECK(s.local_time == doctest::Approx(lt.total()).epsilon(1e-12));
  REQUIRE(s.records.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(s.records[i].start_time == recs[i].start_time);
    CHECK(s.records[i].end_time == recs[i].end_time);
    CHECK(s.records[i].peak == recs[i].peak);
    CHECK(s.records[i].local_time_at_start == doctest::Approx(recs[i].local_time_at_start).epsilon(1e-12));
  }
  const Moments m = moments(path.values);
  CHECK(s.mean == doctest::Approx(m.mean).epsilon(1e-9));
  CHECK(s.variance == doctest::Approx(m.var).epsilon(1e-9));
}

TEST_CASE("excursion bookkeeping on a hand-made path") {
  OuPath p;
  p.step_h = 0.5;
  p.values = {0.3, 1.0, -0.2, -2.0, -0.1, 0.0, 0.4, 3.0, -1.0, 2.0};
  const LocalTimePath lt = estimate_local_time(p, 0.25);
  // Band hits at indices 2, 4, 5: each adds h / (2 eps) = 1.
  CHECK(lt.total() == 3.0);
  CHECK(lt.cumulative[3] == 1.0);
  const auto r = extract_excursions(p, lt);
  // The first stretch (from t = 0) and the last (cut at the horizon) are dropped.
  REQUIRE(r.size() == 3);
  CHECK(r[0].start_time == 1.0);
  CHECK(r[0].end_time == 2.5);
  CHECK(r[0].peak == -2.0);
  CHECK(r[1].peak == 3.0);
  CHECK(r[1].local_time_at_start == 2.0);
  CHECK(r[2].peak == -1.0);
  CHECK(count_exceedances(r, 1.5, Sided::One) == 1);
  CHECK(count_exceedances(r, 1.5, Sided::Two) == 2);
  CHECK(count_exceedances(r, 0.5, Sided::Two) == 3);
}

TEST_CASE("tail-supremum sampler construction") {
  CHECK(TailSupSampler::default_cut(1000) == 1'001'000);
  CHECK(TailSupSampler::default_cut(1'000'000) == 10'000'000);
  CHECK_THROWS_AS(TailSupSampler(2, 10), DomainError);
  CHECK_THROWS_AS(TailSupSampler(100, 99), DomainError);
  CHECK_THROWS_AS(TailSupSampler(20'000'000, 30'000'000), DomainError);
}

TEST_CASE("tail quantile inverts the tail law") {
  const TailSupSampler s(1000, 5000);
  for (double u : {1e-9, 0.01, 0.5, 0.99, 1 - 1e-9}) {
    CAPTURE(u);
    CHECK(s.tail_law().tail_cdf(s.tail_quantile(u)) == doctest::Approx(u).epsilon(1e-8));
  }
}

TEST_CASE("sampler draws follow tail_cdf") {
  for (std::int64_t cut : {std::int64_t{1000}, TailSupSampler::default_cut(1000)}) {
    const TailSupSampler s(1000, cut);
    const auto xs = sample_tail_sup_batch(s, 99, 10000);
    const TailSupLaw law(LogIndex::from_n(1000));
    const EmpiricalCdf ecdf(xs);
    CAPTURE(cut);
    CHECK(ks_p_value(ks_statistic(ecdf, [&](double y) { return law.tail_cdf(y); }), xs.size()) > 0.01);
    // Monte Carlo estimate of P{sup <= y} within 3 standard errors.
    for (double y : {1.15, 1.25, 1.4}) {
      const double p = law.tail_cdf(y);
      const double se = std::sqrt(p * (1 - p) / static_cast<double>(xs.size()));
      CAPTURE(y);
      CHECK(std::fabs(ecdf(y) - p) < 3 * se);
    }
  }
}

TEST_CASE("sampler batches are deterministic and thread-independent") {
  const TailSupSampler s(500, 5000);
  const auto a = sample_tail_sup_batch(s, 7, 300);
  CHECK(a == sample_tail_sup_batch_serial(s, 7, 300));
  CHECK(a == sample_tail_sup_batch(s, 7, 300));
  CHECK(a != sample_tail_sup_batch(s, 8, 300));
  RngStream r(7, 4);
  CHECK(s.draw(r) == a[4]);
}

TEST_CASE("random walk: fast scan equals the step-by-step reference") {
  for (std::uint64_t seed : {1ULL, 2ULL, 42ULL}) {
    for (auto [n, h] : {std::pair<std::int64_t, std::int64_t>{16, 16}, {16, 1000}, {1000, 1000},
                        {1000, 200'000}, {777, 123'457}}) {
      RngStream a(seed, 0), b(seed, 0);
      CAPTURE(n);
      CAPTURE(h);
      CHECK(random_walk_statistic(n, h, a) == random_walk_statistic_reference(n, h, b));
    }
  }
  RngStream r(1, 0);
  CHECK_THROWS_AS(random_walk_statistic(15, 100, r), DomainError);
  CHECK_THROWS_AS(random_walk_statistic(100, 99, r), DomainError);
}

TEST_CASE("random walk with horizon = n uses only S_n") {
  const std::int64_t n = 1000;
  RngStream a(5, 0), b(5, 0);
  std::int64_t ones = 0;
  for (std::int64_t k = 0; k < n; k += 64) {
    const std::uint64_t w = b.next_u64();
    const int bits = static_cast<int>(std::min<std::int64_t>(64, n - k));
    ones += std::popcount(bits == 64 ? w : w & ((std::uint64_t{1} << bits) - 1));
  }
  const double sn = static_cast<double>(2 * ones - n);
  const double l2 = std::log(std::log(1000.0)), l3 = std::log(l2), l4 = std::log(l3);
  const double expected = 2 * l2 * (sn / std::sqrt(2 * 1000.0 * l2) - 1) - 1.5 * l3 + l4 +
                          std::log(3 / std::numbers::sqrt2);
  CHECK(random_walk_statistic(n, n, a) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("random walk batches") {
  const auto a = random_walk_batch(100, 10'000, 3, 50);
  CHECK(a == random_walk_batch_serial(100, 10'000, 3, 50));
  CHECK(a == random_walk_batch(100, 10'000, 3, 50));
  for (double x : a) CHECK(std::isfinite(x));
}

}  // TEST_SUITE
