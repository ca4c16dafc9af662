#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lilx {

/// Right-continuous empirical distribution function.
class EmpiricalCdf {
 public:
  /// Copies and sorts; DomainError on an empty sample or NaN.
  explicit EmpiricalCdf(std::vector<double> samples);

  /// Fraction of samples <= x.
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] std::size_t count() const { return samples_.size(); }
  [[nodiscard]] std::span<const double> samples() const { return samples_; }
  [[nodiscard]] double mean() const;

 private:
  std::vector<double> samples_;
};

using CdfFunction = std::function<double(double)>;

/// sup_x |F_hat(x) - F(x)|, evaluated at both sides of every jump.
/// DomainError unless count >= 10.
double ks_statistic(const EmpiricalCdf& ecdf, const CdfFunction& cdf);

/// sup_x |F_hat(x) - G_hat(x)| for a step-function reference, evaluated at
/// the jumps of both. DomainError unless ecdf.count() >= 10.
double ks_statistic(const EmpiricalCdf& ecdf, const EmpiricalCdf& reference);

/// Asymptotic Kolmogorov tail Q(sqrt(count) * statistic).
double ks_p_value(double statistic, std::size_t count);

/// Q(t) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}.
double kolmogorov_q(double t);

struct ConvergenceRow {
  double index;                  ///< ladder key, e.g. log10 n
  double value;
  std::optional<double> delta;   ///< value - previous value
  std::optional<double> ratio;   ///< value / limit
};

/// Rows of (index, value, delta, value/limit). DomainError with fewer
/// than two entries.
std::vector<ConvergenceRow> convergence_table(std::span<const double> index,
                                              std::span<const double> values,
                                              std::optional<double> limit = std::nullopt);

/// True when every delta is strictly negative.
bool strictly_decreasing(std::span<const ConvergenceRow> rows);

}  // namespace lilx
