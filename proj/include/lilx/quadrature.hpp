#pragma once

#include <cmath>
#include <utility>

namespace lilx {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;      ///< estimated absolute error
  bool converged = true;   ///< false if max depth was hit or a value was non-finite
  long evaluations = 0;
};

namespace detail {

template <class F>
struct SimpsonState {
  F& f;
  int max_depth;
  long evaluations = 0;
  bool converged = true;
  double error = 0.0;
};

template <class F>
double simpson_recurse(SimpsonState<F>& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (!std::isfinite(delta)) {
    st.converged = false;
    return left + right;
  }
  if (depth >= st.max_depth) {
    st.converged = false;
    st.error += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (std::fabs(delta) <= 15.0 * tol) {
    st.error += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson with interval bisection and Richardson correction.
/// `abs_tol` is split between halves at every level.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 50) {
  if (a == b) return {};
  detail::SimpsonState<F> st{f, max_depth};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  st.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  QuadratureResult r;
  r.value = detail::simpson_recurse(st, a, b, fa, fm, fb, whole, abs_tol, 0);
  r.error = st.error;
  r.converged = st.converged && std::isfinite(r.value);
  r.evaluations = st.evaluations;
  return r;
}

}  // namespace lilx
