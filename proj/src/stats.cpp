#include "lilx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lilx/errors.hpp"

namespace lilx {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw DomainError("empirical CDF needs at least one sample");
  if (std::any_of(samples_.begin(), samples_.end(), [](double v) { return std::isnan(v); })) {
    throw DomainError("empirical CDF sample contains NaN");
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::mean() const {
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

double ks_statistic(const EmpiricalCdf& ecdf, const CdfFunction& cdf) {
  const auto xs = ecdf.samples();
  const std::size_t n = xs.size();
  if (n < 10) throw DomainError("ks_statistic needs at least 10 samples");
  const double nd = static_cast<double>(n);
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    // Group ties so the jump at x covers every copy.
    std::size_t j = i;
    while (j < n && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    d = std::max({d, std::fabs(static_cast<double>(j) / nd - f),
                  std::fabs(static_cast<double>(i) / nd - f)});
    i = j;
  }
  return d;
}

double ks_statistic(const EmpiricalCdf& ecdf, const EmpiricalCdf& reference) {
  if (ecdf.count() < 10) throw DomainError("ks_statistic needs at least 10 samples");
  // Both functions are right-continuous steps, so the supremum is attained
  // at one of the jump points.
  double d = 0.0;
  for (const auto& xs : {ecdf.samples(), reference.samples()}) {
    for (double x : xs) d = std::max(d, std::fabs(ecdf(x) - reference(x)));
  }
  return d;
}

double kolmogorov_q(double t) {
  if (!(t > 0.0)) return 1.0;
  if (t < 1.0) {
    // Small t: the theta-function form converges fast.
    // 1 - Q(t) = sqrt(2 pi)/t sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 t^2)).
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * t * t);
    double s = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * c);
      s += term;
      if (term < 1e-16 * s) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / t * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 == 1) ? term : -term;
    if (term < 1e-10) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_p_value(double statistic, std::size_t count) {
  if (count < 10) throw DomainError("ks_p_value needs count >= 10");
  if (!(statistic >= 0.0)) throw DomainError("KS statistic must be nonnegative");
  return kolmogorov_q(std::sqrt(static_cast<double>(count)) * statistic);
}

std::vector<ConvergenceRow> convergence_table(std::span<const double> index,
                                              std::span<const double> values,
                                              std::optional<double> limit) {
  if (index.size() != values.size()) throw DomainError("index and value lists differ in length");
  if (values.size() < 2) throw DomainError("convergence_table needs at least two entries");
  std::vector<ConvergenceRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ConvergenceRow r{index[i], values[i], std::nullopt, std::nullopt};
    if (i > 0) r.delta = values[i] - values[i - 1];
    if (limit) r.ratio = values[i] / *limit;
    rows.push_back(r);
  }
  return rows;
}

bool strictly_decreasing(std::span<const ConvergenceRow> rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ConvergenceRow& r) { return !r.delta || *r.delta < 0.0; });
}

}  // namespace lilx
