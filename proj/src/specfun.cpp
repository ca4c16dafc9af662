#include "lilx/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lilx/errors.hpp"
#include "lilx/quadrature.hpp"

namespace lilx {

namespace {

constexpr double kLogDoubleMax = 709.782712893384;

// S(x) = sum_k x (x^2/2)^k / (k! (2k+1)); every term is positive so the
// sum is accurate to a few ulps. Used for 0 <= x <= kScaleSeriesSwitch.
double scale_power_series(double x) {
  const double half_sq = 0.5 * x * x;
  double term = x;
  double sum = x;
  for (int k = 0; k < 400; ++k) {
    term *= half_sq / (k + 1);
    const double add = term / (2 * k + 3);
    sum += add;
    if (k + 1 > half_sq && add < 1e-17 * sum) break;
  }
  return sum;
}

struct AsymptoticSeries {
  double a = 0.0;    // sum_k (2k-1)!! x^{-2k}
  double da = 0.0;
  double d2a = 0.0;
  double next_term = 0.0;  // first omitted term
};

// Asymptotic expansion of A(x) = x exp(-x^2/2) S(x), obtained by repeated
// integration by parts; truncated at its smallest term.
AsymptoticSeries scale_asymptotic(double x) {
  AsymptoticSeries s;
  const double inv_sq = 1.0 / (x * x);
  double term = 1.0;  // (2k-1)!! x^{-2k}
  for (int k = 0; k < 200; ++k) {
    s.a += term;
    s.da += -2.0 * k * term / x;
    s.d2a += 2.0 * k * (2.0 * k + 1.0) * term * inv_sq;
    const double next = term * (2 * k + 1) * inv_sq;
    if (next >= term || next < 1e-18 * s.a) {
      s.next_term = next;
      break;
    }
    term = next;
  }
  return s;
}

}  // namespace

double scale_ou(double x) {
  if (x < 0.0) return -scale_ou(-x);
  if (x == 0.0) return 0.0;
  if (x <= kScaleSeriesSwitch) return scale_power_series(x);
  const LogReal l = log_scale_ou(x);
  if (l.log_abs > kLogDoubleMax) {
    throw OverflowError("scale_ou(" + std::to_string(x) +
                        ") exceeds double range; use log_scale_ou");
  }
  return std::exp(l.log_abs);
}

LogReal log_scale_ou(double x) {
  if (!(x >= 0.0)) throw DomainError("log_scale_ou requires x >= 0");
  if (x == 0.0) return LogReal::zero();
  if (x <= kScaleSeriesSwitch) return LogReal::from_log(std::log(scale_power_series(x)));
  const AsymptoticSeries s = scale_asymptotic(x);
  return LogReal::from_log(0.5 * x * x - std::log(x) + std::log(s.a));
}

double log_scale_ou_series_bound(double x) {
  if (x <= kScaleSeriesSwitch) return 0.0;
  const AsymptoticSeries s = scale_asymptotic(x);
  return s.next_term / s.a;
}

ScaleRatio scale_ou_ratio(double x) {
  if (!(x > 0.0)) throw DomainError("scale_ou_ratio requires x > 0");
  if (x > kScaleSeriesSwitch) {
    const AsymptoticSeries s = scale_asymptotic(x);
    return {s.a, s.da, s.d2a};
  }
  ScaleRatio r;
  r.a = x * std::exp(-0.5 * x * x) * scale_power_series(x);
  r.da = r.a / x - x * r.a + x;
  r.d2a = r.da / x - r.a / (x * x) - r.a - x * r.da + 1.0;
  return r;
}

// ---------------------------------------------------------------------------

CoefficientField brownian_field() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, true};
}

CoefficientField ou_field() {
  return {[](double) { return 1.0; }, [](double u) { return -0.5 * u; }, 1.0, true};
}

CoefficientField repulsive_ou_field() {
  return {[](double) { return 1.0; }, [](double u) { return 0.5 * u; }, 1.0, true};
}

namespace {

double drift_ratio(const CoefficientField& field, double u) {
  const double s = field.sigma(u);
  if (!(s >= field.sigma_lower_bound)) {
    throw DomainError("sigma(" + std::to_string(u) + ") = " + std::to_string(s) +
                      " is below its declared lower bound");
  }
  const double v = field.drift(u) / (s * s);
  if (!std::isfinite(v)) throw CertificationError("coefficient blow-up at u = " + std::to_string(u));
  return v;
}

double log_scale_derivative(const CoefficientField& field, double y) {
  if (y == 0.0) return 0.0;
  auto inner = [&](double u) { return drift_ratio(field, u); };
  const double span = std::fabs(y);
  const QuadratureResult q = adaptive_simpson(inner, 0.0, y, 1e-13 * std::max(1.0, span), 40);
  if (!q.converged) throw CertificationError("inner scale quadrature diverged");
  return -2.0 * q.value;
}

}  // namespace

double scale_general_derivative(const CoefficientField& field, double x) {
  return std::exp(log_scale_derivative(field, x));
}

double scale_general(const CoefficientField& field, double x) {
  if (x == 0.0) {
    drift_ratio(field, 0.0);
    return 0.0;
  }
  // f(x) = x + int_0^x (f'(y) - 1) dy: the driftless part is exact and the
  // remainder is small near the origin.
  auto outer = [&](double y) {
    const double v = std::expm1(log_scale_derivative(field, y));
    if (!std::isfinite(v)) throw CertificationError("scale integrand overflow");
    return v;
  };
  const QuadratureResult coarse = adaptive_simpson(outer, 0.0, x, 1e-6 * std::fabs(x), 30);
  const double rough = x + coarse.value;
  if (!coarse.converged || rough == 0.0) throw CertificationError("scale quadrature diverged");
  const QuadratureResult fine = adaptive_simpson(outer, 0.0, x, 1e-11 * std::fabs(rough), 40);
  if (!fine.converged) throw CertificationError("scale quadrature diverged");
  return x + fine.value;
}

ScaleFunctionHandle ScaleFunctionHandle::ou() { return {}; }

ScaleFunctionHandle ScaleFunctionHandle::general(CoefficientField field) {
  ScaleFunctionHandle h;
  h.kind_ = Kind::General;
  h.field_ = std::make_shared<const CoefficientField>(std::move(field));
  return h;
}

bool ScaleFunctionHandle::is_odd() const {
  return kind_ == Kind::ClosedFormOu || field_->symmetric;
}

double ScaleFunctionHandle::operator()(double x) const {
  return kind_ == Kind::ClosedFormOu ? scale_ou(x) : scale_general(*field_, x);
}

LogReal ScaleFunctionHandle::log_value(double x) const {
  if (kind_ == Kind::ClosedFormOu) return log_scale_ou(x);
  return LogReal::from_double(scale_general(*field_, x));
}

// ---------------------------------------------------------------------------

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double gumbel_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gumbel_quantile requires 0 < p < 1");
  return -std::log(-std::log(p));
}

GumbelMean gumbel_mean_by_quadrature(double abs_tol) {
  // Density x e^{-x} exp(-e^{-x}); outside [-5, 50] the mass of |x| times
  // the density is below 1e-19.
  auto integrand = [](double x) { return x * std::exp(-x - std::exp(-x)); };
  const QuadratureResult q = adaptive_simpson(integrand, -5.0, 50.0, abs_tol, 50);
  return {q.value, q.error + 1e-19};
}

// ---------------------------------------------------------------------------

LogReal upper_incomplete_gamma_3half(double z) {
  constexpr double a = 1.5;
  const double complete = 0.5 * std::sqrt(std::numbers::pi);
  if (!(z >= 0.0)) throw DomainError("upper_incomplete_gamma_3half requires z >= 0");
  if (z == 0.0) return LogReal::from_double(complete);
  if (z < 1.5) {
    // Lower series gamma(a, z) = z^a e^{-z} sum_k z^k / (a (a+1) ... (a+k)).
    double denom = a;
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
      denom += 1.0;
      term *= z / denom;
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    const double lower = std::exp(a * std::log(z) - z) * sum;
    return LogReal::from_double(complete - lower);
  }
  // Continued fraction (modified Lentz).
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return LogReal::from_log(-z + a * std::log(z) + std::log(h));
}

}  // namespace lilx
