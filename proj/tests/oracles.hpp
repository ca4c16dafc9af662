#pragma once

// Reference values computed without the library: GSL special functions and
// plain composite rules.

#include <gsl/gsl_sf_dawson.h>

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// S(x) = sqrt(2) e^{x^2/2} D(x / sqrt 2) with D Dawson's integral.
inline double scale_via_dawson(double x) {
  return std::sqrt(2.0) * std::exp(0.5 * x * x) * gsl_sf_dawson(x / std::sqrt(2.0));
}

inline double log_scale_via_dawson(double x) {
  return 0.5 * std::log(2.0) + 0.5 * x * x + std::log(gsl_sf_dawson(x / std::sqrt(2.0)));
}

/// A(x) = x e^{-x^2/2} S(x) = sqrt(2) x D(x / sqrt 2).
inline double ratio_via_dawson(double x) { return std::sqrt(2.0) * x * gsl_sf_dawson(x / std::sqrt(2.0)); }

/// 1 / (2 S(x)) without overflow.
inline double half_inverse_scale(double x) {
  return std::exp(-0.5 * x * x) / (2.0 * std::sqrt(2.0) * gsl_sf_dawson(x / std::sqrt(2.0)));
}

}  // namespace oracle
