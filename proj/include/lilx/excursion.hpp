#pragma once

#include "lilx/specfun.hpp"

namespace lilx {

enum class Sided { One, Two };

inline const char* to_string(Sided s) { return s == Sided::One ? "one" : "two"; }

/// Law of the maximum of a diffusion over one unit of local time at zero,
/// started at zero:
///
///   one-sided  P{sup Z <= lambda}   = exp(-f'(0) / (2 (f(lambda) - f(0))))
///   two-sided  P{sup |Z| <= lambda} = exp(-f'(0) / (f(lambda) - f(0)))
///
/// The exponent is the Poisson rate, per unit local time, of excursions
/// whose maximum exceeds lambda. The two-sided law needs an odd scale
/// function and is obtained by doubling that rate.
class ExcursionMaxLaw {
 public:
  explicit ExcursionMaxLaw(ScaleFunctionHandle scale = ScaleFunctionHandle::ou(),
                           Sided sided = Sided::One);

  static ExcursionMaxLaw ou(Sided sided = Sided::One) {
    return ExcursionMaxLaw(ScaleFunctionHandle::ou(), sided);
  }

  [[nodiscard]] const ScaleFunctionHandle& scale() const { return scale_; }
  [[nodiscard]] Sided sided() const { return sided_; }

  /// DomainError for lambda <= 0.
  [[nodiscard]] double cdf(double lambda) const;
  [[nodiscard]] double exceedance_rate(double lambda) const;
  [[nodiscard]] double log_exceedance_rate(double lambda) const;

  /// Unique lambda with cdf(lambda) = p; DomainError outside (0, 1).
  [[nodiscard]] double quantile(double p) const;
  /// Unique lambda whose exceedance rate equals exp(log_rate).
  [[nodiscard]] double lambda_for_log_rate(double log_rate) const;

  /// Inverse-transform draw from a uniform variate in (0, 1).
  [[nodiscard]] double sample(double u) const { return quantile(u); }
  /// Draw conditioned on exceeding `threshold`; u uniform in (0, 1).
  [[nodiscard]] double sample_above(double threshold, double u) const;

 private:
  ScaleFunctionHandle scale_;
  Sided sided_;
};

}  // namespace lilx
