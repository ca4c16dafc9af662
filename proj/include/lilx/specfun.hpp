#pragma once

#include <functional>
#include <memory>

#include "lilx/log_real.hpp"

namespace lilx {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Above this argument log_scale_ou switches from the power series to the
/// asymptotic expansion.
inline constexpr double kScaleSeriesSwitch = 8.0;

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck scale function S(x) = int_0^x exp(y^2/2) dy.

/// S(x), odd-extended to x < 0. Throws OverflowError when |S(x)| exceeds
/// the double range.
double scale_ou(double x);

/// ln S(x) for x >= 0. sign == 0 at x == 0.
LogReal log_scale_ou(double x);

/// A(x) = x exp(-x^2/2) S(x) together with its first two derivatives.
/// A -> 1 as x -> infinity; the tail-sum machinery works with 1/A.
struct ScaleRatio {
  double a = 1.0;
  double da = 0.0;
  double d2a = 0.0;
};
ScaleRatio scale_ou_ratio(double x);

/// Relative truncation bound of the asymptotic expansion used at x
/// (first omitted term); 0 below the switch point.
double log_scale_ou_series_bound(double x);

// ---------------------------------------------------------------------------
// General diffusion dZ = sigma(Z) dw + a(Z) dt.

struct CoefficientField {
  std::function<double(double)> sigma;
  std::function<double(double)> drift;
  double sigma_lower_bound = 1.0;
  /// Caller's declaration that drift is odd and sigma even, which makes the
  /// scale function odd. Required by two-sided excursion laws.
  bool symmetric = false;
};

/// Driftless unit-diffusion field (Brownian motion).
CoefficientField brownian_field();
/// sigma = 1, drift = -u/2: the OU dynamics, for cross-checking scale_ou.
CoefficientField ou_field();
/// sigma = 1, drift = +u/2.
CoefficientField repulsive_ou_field();

/// f(x) = int_0^x exp(-2 int_0^y a/sigma^2 du) dy by nested adaptive
/// quadrature, relative accuracy ~1e-9. Throws DomainError when sigma falls
/// below its declared bound and CertificationError on quadrature divergence.
double scale_general(const CoefficientField& field, double x);

/// f'(x) = exp(-2 int_0^x a/sigma^2 du).
double scale_general_derivative(const CoefficientField& field, double x);

/// A scale function normalized to f(0) = 0, f'(0) = 1.
class ScaleFunctionHandle {
 public:
  enum class Kind { ClosedFormOu, General };

  static ScaleFunctionHandle ou();
  static ScaleFunctionHandle general(CoefficientField field);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_odd() const;
  [[nodiscard]] double operator()(double x) const;
  /// Log-domain value for x > 0 (closed form only avoids overflow).
  [[nodiscard]] LogReal log_value(double x) const;
  [[nodiscard]] const CoefficientField* field() const { return field_.get(); }

 private:
  Kind kind_ = Kind::ClosedFormOu;
  std::shared_ptr<const CoefficientField> field_;
};

// ---------------------------------------------------------------------------
// Gumbel law Lambda(x) = exp(-exp(-x)).

double gumbel_cdf(double x);
/// Inverse of gumbel_cdf; DomainError outside (0, 1).
double gumbel_quantile(double p);

struct GumbelMean {
  double value;
  double error;
};
/// int x dLambda(x) by adaptive quadrature; equals Euler's constant.
GumbelMean gumbel_mean_by_quadrature(double abs_tol = 1e-12);

// ---------------------------------------------------------------------------

/// Upper incomplete gamma Gamma(3/2, z) in the log domain, z >= 0.
LogReal upper_incomplete_gamma_3half(double z);

}  // namespace lilx
