#include "lilx/excursion.hpp"

#include <cmath>
#include <numbers>

#include "lilx/errors.hpp"

namespace lilx {

ExcursionMaxLaw::ExcursionMaxLaw(ScaleFunctionHandle scale, Sided sided)
    : scale_(std::move(scale)), sided_(sided) {
  if (sided_ == Sided::Two && !scale_.is_odd()) {
    throw DomainError("two-sided excursion law requires an odd scale function");
  }
}

double ExcursionMaxLaw::log_exceedance_rate(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("excursion law is supported on lambda > 0");
  const double log_f = scale_.log_value(lambda).log_abs;
  return sided_ == Sided::One ? -std::numbers::ln2 - log_f : -log_f;
}

double ExcursionMaxLaw::exceedance_rate(double lambda) const {
  if (scale_.kind() == ScaleFunctionHandle::Kind::General) {
    if (!(lambda > 0.0)) throw DomainError("excursion law is supported on lambda > 0");
    return (sided_ == Sided::One ? 0.5 : 1.0) / scale_(lambda);
  }
  return std::exp(log_exceedance_rate(lambda));
}

double ExcursionMaxLaw::cdf(double lambda) const { return std::exp(-exceedance_rate(lambda)); }

double ExcursionMaxLaw::lambda_for_log_rate(double log_rate) const {
  // Rate is strictly decreasing in lambda.
  double lo = 1e-8;
  double hi = 1.0;
  while (log_exceedance_rate(lo) < log_rate) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw DomainError("exceedance rate too large to invert");
  }
  while (log_exceedance_rate(hi) > log_rate) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e150) throw DomainError("exceedance rate too small to invert");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_exceedance_rate(mid) > log_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ExcursionMaxLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile requires 0 < p < 1");
  // rate = -ln p
  return lambda_for_log_rate(std::log(-std::log(p)));
}

double ExcursionMaxLaw::sample_above(double threshold, double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample_above requires 0 < u < 1");
  // P{M > lambda} = 1 - exp(-rate(lambda)); the conditional draw has tail
  // probability q = u (1 - exp(-rate_c)). Everything stays in logs so that
  // thresholds with astronomically small rates remain usable.
  const double log_rate_c = log_exceedance_rate(threshold);
  const double rate_c = std::exp(log_rate_c);
  const double log_p_exceed =
      rate_c < 1e-8 ? log_rate_c - 0.5 * rate_c : std::log(-std::expm1(-rate_c));
  const double log_q = log_p_exceed + std::log(u);
  const double q = std::exp(log_q);
  const double log_target = q < 1e-8 ? log_q + 0.5 * q : std::log(-std::log1p(-q));
  return lambda_for_log_rate(log_target);
}

}  // namespace lilx
