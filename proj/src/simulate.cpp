#include "lilx/simulate.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lilx/errors.hpp"
#include "lilx/parallel.hpp"

namespace lilx {

double ou_step(double x, double h, double z) {
  return std::exp(-0.5 * h) * x + std::sqrt(-std::expm1(-h)) * z;
}

void OuPathConfig::validate() const {
  if (!(step_h > 0.0) || !(horizon_T > 0.0) || !(epsilon > 0.0)) {
    throw DomainError("OU path needs positive step, horizon and band width");
  }
  if (step_h > epsilon * epsilon * (1.0 + 1e-12)) {
    throw DomainError("OU path needs step_h <= epsilon^2");
  }
}

std::size_t OuPathConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon_T / step_h));
}

OuPath simulate_ou(const OuPathConfig& config, RngStream& rng, std::size_t max_points) {
  config.validate();
  const std::size_t steps = config.steps();
  if (steps + 1 > max_points) {
    throw ResourceError("path of " + std::to_string(steps + 1) +
                        " points exceeds the memory cap; use simulate_ou_streaming");
  }
  OuPath path;
  path.step_h = config.step_h;
  path.values.resize(steps + 1);
  const double decay = std::exp(-0.5 * config.step_h);
  const double scale = std::sqrt(-std::expm1(-config.step_h));
  double x = config.x0 ? *config.x0 : rng.normal();
  path.values[0] = x;
  for (std::size_t k = 1; k <= steps; ++k) {
    x = decay * x + scale * rng.normal();
    path.values[k] = x;
  }
  return path;
}

// ---------------------------------------------------------------------------

ExcursionScanner::ExcursionScanner(double step_h, double epsilon)
    : h_(step_h), band_(epsilon), weight_(step_h / (2.0 * epsilon)) {}

void ExcursionScanner::push(double x) {
  const int s = x >= 0.0 ? 1 : -1;
  if (index_ == 0) {
    sign_ = s;
    start_index_ = 0;
    peak_ = x;
    local_time_at_start_ = 0.0;
  } else if (s != sign_) {
    if (complete_) {
      records_.push_back({static_cast<double>(start_index_) * h_,
                          static_cast<double>(index_) * h_, peak_, local_time_at_start_});
    }
    complete_ = true;
    sign_ = s;
    start_index_ = index_;
    peak_ = x;
    local_time_at_start_ = local_time_;
  } else if (s > 0 ? x > peak_ : x < peak_) {
    peak_ = x;
  }
  if (std::fabs(x) <= band_) local_time_ += weight_;
  ++index_;
}

LocalTimePath estimate_local_time(const OuPath& path, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("band half-width must be positive");
  LocalTimePath lt;
  lt.step_h = path.step_h;
  lt.cumulative.resize(path.values.size());
  const double weight = path.step_h / (2.0 * epsilon);
  double acc = 0.0;
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    lt.cumulative[k] = acc;
    if (std::fabs(path.values[k]) <= epsilon) acc += weight;
  }
  // The last entry reports the total, including the final grid point.
  if (!lt.cumulative.empty()) lt.cumulative.back() = acc;
  return lt;
}

std::vector<ExcursionRecord> extract_excursions(const OuPath& path, const LocalTimePath& local_time) {
  if (path.values.empty()) throw DomainError("extract_excursions needs a nonempty path");
  if (local_time.cumulative.size() != path.values.size()) {
    throw DomainError("local time and path lengths differ");
  }
  std::vector<ExcursionRecord> out;
  const double h = path.step_h;
  int sign = path.values[0] >= 0.0 ? 1 : -1;
  bool complete = false;
  std::size_t start = 0;
  double peak = path.values[0];
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    const double x = path.values[k];
    const int s = x >= 0.0 ? 1 : -1;
    if (s != sign) {
      if (complete) {
        out.push_back({static_cast<double>(start) * h, static_cast<double>(k) * h, peak,
                       local_time.cumulative[start]});
      }
      complete = true;
      sign = s;
      start = k;
      peak = x;
    } else if (s > 0 ? x > peak : x < peak) {
      peak = x;
    }
  }
  return out;
}

std::size_t count_exceedances(std::span<const ExcursionRecord> records, double lambda, Sided sided) {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const auto& r) {
    return sided == Sided::One ? r.peak > lambda : std::fabs(r.peak) > lambda;
  }));
}

OuScanSummary simulate_ou_streaming(const OuPathConfig& config, RngStream& rng) {
  config.validate();
  const std::size_t steps = config.steps();
  const double decay = std::exp(-0.5 * config.step_h);
  const double scale = std::sqrt(-std::expm1(-config.step_h));
  ExcursionScanner scanner(config.step_h, config.epsilon);
  double x = config.x0 ? *config.x0 : rng.normal();
  double s1 = 0.0, s2 = 0.0, s4 = 0.0, cross = 0.0;
  double prev = x;
  scanner.push(x);
  s1 += x;
  s2 += x * x;
  s4 += x * x * x * x;
  for (std::size_t k = 1; k <= steps; ++k) {
    x = decay * x + scale * rng.normal();
    scanner.push(x);
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
    cross += prev * x;
    prev = x;
  }
  OuScanSummary out;
  out.steps = steps;
  out.horizon = static_cast<double>(steps) * config.step_h;
  out.local_time = scanner.local_time();
  const double m = static_cast<double>(steps + 1);
  out.mean = s1 / m;
  out.variance = s2 / m - out.mean * out.mean;
  out.kurtosis = (s4 / m) / (out.variance * out.variance);
  out.lag_autocorrelation =
      (cross / static_cast<double>(steps) - out.mean * out.mean) / out.variance;
  out.records = scanner.take_records();
  return out;
}

// ---------------------------------------------------------------------------

TailSupSampler::TailSupSampler(std::int64_t n, std::int64_t cut, ExcursionMaxLaw law,
                               double tolerance)
    : n_(n),
      cut_(cut),
      law_(std::move(law)),
      tail_(LogIndex(std::log(static_cast<double>(std::max<std::int64_t>(cut, 3)))), law_,
            tolerance) {
  if (n < 3 || n > 10'000'000) throw DomainError("sample_tail_sup needs 3 <= n <= 1e7");
  if (cut < n) throw DomainError("sample_tail_sup needs cut >= n");
  w_lo_ = -14.0;
  w_step_ = 1.0 / 32.0;
  log_e_table_.resize(529);
  for (std::size_t i = 0; i < log_e_table_.size(); ++i) {
    const double w = w_lo_ + w_step_ * static_cast<double>(i);
    log_e_table_[i] = tail_.tail_exponent(1.0 + std::exp(w)).value.log_abs;
  }
}

std::int64_t TailSupSampler::default_cut(std::int64_t n) {
  return std::max<std::int64_t>(10 * n, n + 1'000'000);
}

double TailSupSampler::tail_quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("tail_quantile requires 0 < u < 1");
  // Solve ln E(1 + e^w) = ln(-ln u); ln E is decreasing in w.
  const double target = std::log(-std::log(u));
  auto f = [&](double w) {
    return tail_.tail_exponent(1.0 + std::exp(w)).value.log_abs - target;
  };
  // Bracket from the table when the target lies inside it.
  const auto& t = log_e_table_;
  double lo, hi, flo, fhi;
  if (target <= t.front() && target >= t.back()) {
    const auto it = std::partition_point(t.begin(), t.end(), [&](double v) { return v > target; });
    const auto i = static_cast<std::size_t>(it - t.begin());
    const std::size_t j = i == 0 ? 1 : i;
    lo = w_lo_ + w_step_ * static_cast<double>(j - 1);
    hi = lo + w_step_;
    flo = t[j - 1] - target;
    fhi = t[j] - target;
  } else if (target > t.front()) {
    hi = w_lo_;
    fhi = t.front() - target;
    lo = hi;
    flo = fhi;
  } else {
    lo = w_lo_ + w_step_ * static_cast<double>(t.size() - 1);
    flo = t.back() - target;
    hi = lo;
    fhi = flo;
  }
  if (flo > 0.0 && fhi > 0.0) {
    do {
      lo = hi;
      flo = fhi;
      hi += 1.0;
      fhi = f(hi);
    } while (fhi > 0.0 && hi < 20.0);
  } else if (flo < 0.0 && fhi < 0.0) {
    do {
      hi = lo;
      fhi = flo;
      lo -= 1.0;
      flo = f(lo);
    } while (flo < 0.0 && lo > -60.0);
  }
  if (flo < 0.0 || fhi > 0.0) throw CertificationError("tail quantile bracket not found");
  if (flo == 0.0) return 1.0 + std::exp(lo);
  if (fhi == 0.0) return 1.0 + std::exp(hi);
  std::uintmax_t iters = 100;
  const auto root = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(46), iters);
  return 1.0 + std::exp(0.5 * (root.first + root.second));
}

double TailSupSampler::draw(RngStream& rng) const {
  const double tail_sup = tail_quantile(rng.uniform());
  double best = tail_sup;
  // Exceedances of tail_sup in [n, cut), block by block with a dominating
  // probability taken at each block start (p_j decreases in j).
  for (std::int64_t start = n_; start < cut_;) {
    const std::int64_t end = std::min(cut_, 2 * start);
    const double rate_start = law_.exceedance_rate(tail_sup * std::sqrt(2.0 * std::log(double(start))));
    const double p_bar = -std::expm1(-rate_start);
    if (p_bar > 0.0) {
      const double log_q = std::log1p(-p_bar);
      double j = static_cast<double>(start) - 1.0;
      for (;;) {
        const double skip = p_bar >= 1.0 ? 0.0 : std::floor(std::log(rng.uniform()) / log_q);
        j += 1.0 + skip;
        if (j >= static_cast<double>(end)) break;
        const double scale = std::sqrt(2.0 * std::log(j));
        const double level = tail_sup * scale;
        const double p_j = -std::expm1(-law_.exceedance_rate(level));
        if (rng.uniform() * p_bar < p_j) {
          const double m = law_.sample_above(level, rng.uniform());
          best = std::max(best, m / scale);
        }
      }
    }
    start = end;
  }
  return best;
}

double sample_tail_sup(std::int64_t n, std::int64_t cut, const ExcursionMaxLaw& law,
                       RngStream& rng) {
  return TailSupSampler(n, cut, law).draw(rng);
}

std::vector<double> sample_tail_sup_batch(const TailSupSampler& sampler, std::uint64_t seed,
                                          std::size_t count) {
  std::vector<double> out(count);
  parallel_for(static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    out[i] = sampler.draw(rng);
  });
  return out;
}

std::vector<double> sample_tail_sup_batch_serial(const TailSupSampler& sampler,
                                                 std::uint64_t seed, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, i);
    out.push_back(sampler.draw(rng));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double walk_weight(std::int64_t k) {
  const double kd = static_cast<double>(k);
  return 1.0 / std::sqrt(2.0 * kd * std::log(std::log(kd)));
}

double walk_normalize(std::int64_t n, double sup) {
  const double l2 = std::log(std::log(static_cast<double>(n)));
  const double l3 = std::log(l2);
  const double l4 = std::log(l3);
  return 2.0 * l2 * (sup - 1.0) - 1.5 * l3 + l4 + std::log(3.0 / std::numbers::sqrt2);
}

void check_walk(std::int64_t n, std::int64_t horizon) {
  if (n < 16) throw DomainError("random walk statistic needs n >= 16");
  if (horizon < n) throw DomainError("random walk horizon must be >= n");
}

}  // namespace

double random_walk_statistic_reference(std::int64_t n, std::int64_t horizon, RngStream& rng) {
  check_walk(n, horizon);
  std::int64_t s = 0;
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t word = 0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const int bit = static_cast<int>((k - 1) % 64);
    if (bit == 0) word = rng.next_u64();
    s += ((word >> bit) & 1U) ? 1 : -1;
    if (k >= n) best = std::max(best, static_cast<double>(s) * walk_weight(k));
  }
  return walk_normalize(n, best);
}

double random_walk_statistic(std::int64_t n, std::int64_t horizon, RngStream& rng) {
  check_walk(n, horizon);
  std::int64_t s = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k < horizon;) {
    const int m = static_cast<int>(std::min<std::int64_t>(64, horizon - k));
    const std::uint64_t word = rng.next_u64();
    const std::uint64_t mask = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    const int ups = std::popcount(word & mask);
    bool skip = k + m < n;
    if (!skip && k + 1 >= n && std::isfinite(best)) {
      // Values in this chunk are at most s_max * w(k'); w decreases in k'.
      const double s_max = static_cast<double>(s + m);
      const double ub = s_max >= 0.0 ? s_max * walk_weight(k + 1) * (1.0 + 1e-9)
                                     : s_max * walk_weight(k + m) * (1.0 - 1e-9);
      skip = ub < best;
    }
    if (skip) {
      s += 2 * ups - m;
    } else {
      for (int i = 0; i < m; ++i) {
        s += ((word >> i) & 1U) ? 1 : -1;
        const std::int64_t kk = k + i + 1;
        if (kk >= n) best = std::max(best, static_cast<double>(s) * walk_weight(kk));
      }
    }
    k += m;
  }
  return walk_normalize(n, best);
}

std::vector<double> random_walk_batch(std::int64_t n, std::int64_t horizon, std::uint64_t seed,
                                      std::size_t count) {
  check_walk(n, horizon);
  std::vector<double> out(count);
  parallel_for(static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    out[i] = random_walk_statistic(n, horizon, rng);
  });
  return out;
}

std::vector<double> random_walk_batch_serial(std::int64_t n, std::int64_t horizon,
                                             std::uint64_t seed, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, i);
    out.push_back(random_walk_statistic(n, horizon, rng));
  }
  return out;
}

}  // namespace lilx
