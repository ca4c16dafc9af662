#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lilx/quadrature.hpp"

namespace lilx::detail {

/// Adaptive 15-point Gauss-Kronrod of f over [a, b] to relative tolerance.
///
/// Boost's recursive driver compares an interval's error estimate, taken on
/// the rescaled [-1, 1] problem, against a tolerance on the unscaled value.
/// Mapping [a, b] onto [0, 1] first keeps every level's scale factor at most
/// 1/2, so the reported error is an overestimate and short subintervals can
/// still converge.
template <class F>
QuadratureResult kronrod_unit(F&& f, double a, double b, double rel_tol, unsigned max_depth = 20) {
  QuadratureResult r;
  if (a == b) return r;
  const double w = b - a;
  auto g = [&](double u) {
    ++r.evaluations;
    return w * f(a + w * u);
  };
  double err = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, max_depth,
                                                                            rel_tol, &err);
  r.error = err;
  r.converged = std::isfinite(r.value) && err <= rel_tol * std::fabs(r.value) * 4.0;
  return r;
}

}  // namespace lilx::detail
