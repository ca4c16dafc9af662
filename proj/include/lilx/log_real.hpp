#pragma once

#include <cmath>
#include <limits>

namespace lilx {

/// A real number stored as sign * exp(log_abs).
///
/// Used wherever magnitudes such as exp(x^2/2) or j^{-y^2} leave the range
/// of a plain double. sign == 0 encodes exact zero and log_abs is then
/// ignored (kept at -inf).
struct LogReal {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogReal zero() { return {}; }
  static LogReal from_log(double log_abs, int sign = 1) {
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return {};
    return {log_abs, sign > 0 ? 1 : -1};
  }
  static LogReal from_double(double v) {
    if (v == 0.0) return {};
    return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
  }

  [[nodiscard]] bool is_zero() const { return sign == 0; }
  /// Plain value; overflows to +-inf or underflows to 0 outside double range.
  [[nodiscard]] double to_double() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_abs);
  }
  [[nodiscard]] LogReal abs() const { return sign == 0 ? LogReal{} : LogReal{log_abs, 1}; }
  LogReal operator-() const { return {log_abs, -sign}; }
};

inline LogReal operator*(const LogReal& a, const LogReal& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.log_abs + b.log_abs, a.sign * b.sign};
}

inline LogReal operator/(const LogReal& a, const LogReal& b) {
  if (a.sign == 0) return {};
  return {a.log_abs - b.log_abs, a.sign * b.sign};
}

/// Log-sum-exp with the larger magnitude factored out.
inline LogReal operator+(const LogReal& a, const LogReal& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const LogReal& big = a.log_abs >= b.log_abs ? a : b;
  const LogReal& small = a.log_abs >= b.log_abs ? b : a;
  const double r = std::exp(small.log_abs - big.log_abs);
  if (big.sign == small.sign) return {big.log_abs + std::log1p(r), big.sign};
  if (r == 1.0) return {};
  return {big.log_abs + std::log1p(-r), big.sign};
}

inline LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

inline bool operator<(const LogReal& a, const LogReal& b) {
  if (a.sign != b.sign) return a.sign < b.sign;
  if (a.sign == 0) return false;
  return a.sign > 0 ? a.log_abs < b.log_abs : a.log_abs > b.log_abs;
}

}  // namespace lilx
