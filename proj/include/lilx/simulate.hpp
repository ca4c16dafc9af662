#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lilx/asymptotics.hpp"
#include "lilx/excursion.hpp"
#include "lilx/rng.hpp"

namespace lilx {

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck paths, dX = dW - X/2 dt.

/// Exact OU transition over time h: e^{-h/2} x + sqrt(1 - e^{-h}) z.
double ou_step(double x, double h, double z);

struct OuPathConfig {
  double step_h = 1e-4;
  double horizon_T = 1e4;
  std::optional<double> x0;  ///< stationary N(0,1) start when empty
  double epsilon = 0.05;     ///< half-width of the occupation band

  /// DomainError unless h, T, epsilon > 0 and h <= epsilon^2.
  void validate() const;
  [[nodiscard]] std::size_t steps() const;
};

struct OuPath {
  double step_h = 0.0;
  std::vector<double> values;  ///< X at times k * step_h, k = 0..steps
};

inline constexpr std::size_t kDefaultPathCap = std::size_t{1} << 25;

/// Materialized path. ResourceError if it would exceed `max_points`;
/// use simulate_ou_streaming instead.
OuPath simulate_ou(const OuPathConfig& config, RngStream& rng,
                   std::size_t max_points = kDefaultPathCap);

/// Cumulative occupation-density local time at zero on the path grid:
/// L[k] = (1 / 2 eps) * sum_{i<k} h 1{|X_i| <= eps}.
struct LocalTimePath {
  double step_h = 0.0;
  std::vector<double> cumulative;
  [[nodiscard]] double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

LocalTimePath estimate_local_time(const OuPath& path, double epsilon);

/// A maximal sign-constant stretch of the path between two grid sign changes.
struct ExcursionRecord {
  double start_time;
  double end_time;
  double peak;  ///< signed extremum over the stretch
  double local_time_at_start;
};

/// Complete excursions only: the stretch in progress at time 0 and the one
/// cut off at the horizon are dropped.
std::vector<ExcursionRecord> extract_excursions(const OuPath& path, const LocalTimePath& local_time);

/// Number of excursions whose peak exceeds lambda (|peak| for two-sided).
std::size_t count_exceedances(std::span<const ExcursionRecord> records, double lambda, Sided sided);

/// Online version of estimate_local_time + extract_excursions.
class ExcursionScanner {
 public:
  ExcursionScanner(double step_h, double epsilon);
  void push(double x);

  [[nodiscard]] double local_time() const { return local_time_; }
  [[nodiscard]] std::size_t points() const { return index_; }
  [[nodiscard]] const std::vector<ExcursionRecord>& records() const { return records_; }
  std::vector<ExcursionRecord> take_records() { return std::move(records_); }

 private:
  double h_;
  double band_;
  double weight_;
  std::size_t index_ = 0;
  double local_time_ = 0.0;
  int sign_ = 0;
  bool complete_ = false;  // current stretch began at a sign change
  std::size_t start_index_ = 0;
  double peak_ = 0.0;
  double local_time_at_start_ = 0.0;
  std::vector<ExcursionRecord> records_;
};

struct OuScanSummary {
  std::size_t steps = 0;
  double horizon = 0.0;
  double local_time = 0.0;
  std::vector<ExcursionRecord> records;
  double mean = 0.0;
  double variance = 0.0;
  double kurtosis = 0.0;
  double lag_autocorrelation = 0.0;  ///< at lag step_h

  [[nodiscard]] double local_time_rate() const { return local_time / horizon; }
};

/// Simulates without storing the path; O(number of excursions) memory.
OuScanSummary simulate_ou_streaming(const OuPathConfig& config, RngStream& rng);

// ---------------------------------------------------------------------------
// i.i.d. excursion-maximum model of sup_{j>=n} M_j / sqrt(2 ln j).

/// Draws sup_{j>=n} M_j / sqrt(2 ln j) exactly: the supremum over j >= cut
/// comes from one inverse-transform draw of the analytic tail law, then the
/// block n <= j < cut contributes only its exceedances of that value, found
/// by geometric skipping.
class TailSupSampler {
 public:
  /// DomainError unless 3 <= n <= 1e7 and cut >= n (integers).
  TailSupSampler(std::int64_t n, std::int64_t cut, ExcursionMaxLaw law = ExcursionMaxLaw::ou(),
                 double tolerance = kDefaultTailTolerance);

  /// max(10 n, n + 10^6).
  static std::int64_t default_cut(std::int64_t n);

  [[nodiscard]] double draw(RngStream& rng) const;
  /// Inverse of the analytic tail law beyond the cut.
  [[nodiscard]] double tail_quantile(double u) const;

  [[nodiscard]] std::int64_t n() const { return n_; }
  [[nodiscard]] std::int64_t cut() const { return cut_; }
  [[nodiscard]] const TailSupLaw& tail_law() const { return tail_; }

 private:
  std::int64_t n_;
  std::int64_t cut_;
  ExcursionMaxLaw law_;
  TailSupLaw tail_;
  // ln E(1 + e^w) on an even w grid, used to bracket the inversion.
  double w_lo_ = 0.0;
  double w_step_ = 0.0;
  std::vector<double> log_e_table_;
};

double sample_tail_sup(std::int64_t n, std::int64_t cut, const ExcursionMaxLaw& law,
                       RngStream& rng);

/// Replicate i uses RngStream(seed, i). OpenMP-parallel.
std::vector<double> sample_tail_sup_batch(const TailSupSampler& sampler, std::uint64_t seed,
                                          std::size_t count);
std::vector<double> sample_tail_sup_batch_serial(const TailSupSampler& sampler,
                                                 std::uint64_t seed, std::size_t count);

// ---------------------------------------------------------------------------
// Rademacher random walk.

/// 2 L2 n (max_{n<=k<=horizon} S_k / sqrt(2 k L2 k) - 1) - (3/2) L3 n + L4 n
/// + ln(3 / sqrt 2), a finite-window surrogate of the sup over all k >= n.
/// DomainError unless 16 <= n <= horizon.
double random_walk_statistic(std::int64_t n, std::int64_t horizon, RngStream& rng);
/// Step-by-step reference of random_walk_statistic (same bits, same result).
double random_walk_statistic_reference(std::int64_t n, std::int64_t horizon, RngStream& rng);

std::vector<double> random_walk_batch(std::int64_t n, std::int64_t horizon, std::uint64_t seed,
                                      std::size_t count);
std::vector<double> random_walk_batch_serial(std::int64_t n, std::int64_t horizon,
                                             std::uint64_t seed, std::size_t count);

}  // namespace lilx
