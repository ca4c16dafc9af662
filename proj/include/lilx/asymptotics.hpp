#pragma once

#include <span>
#include <vector>

#include "lilx/excursion.hpp"
#include "lilx/log_real.hpp"

namespace lilx {

/// Start index n of the tail supremum, carried as ln n so that indices such
/// as 10^64 (or e^{10^8}) remain usable.
class LogIndex {
 public:
  /// DomainError unless ln_n > 1.
  explicit LogIndex(double ln_n);
  static LogIndex from_n(double n);
  static LogIndex from_log10(double log10_n);

  [[nodiscard]] double ln_n() const { return ln_n_; }
  [[nodiscard]] double l2() const;  ///< ln ln n
  [[nodiscard]] double l3() const;  ///< ln ln ln n (may be negative)

 private:
  double ln_n_;
};

/// Centering constant ln(3/sqrt 2) (one-sided) or ln(3/(2 sqrt 2)) (two-sided).
double centering_constant(Sided sided);

/// Normalization sequences at (n, x):
///   phi_n(x) = (3/2) L2 n - L3 n - const + x   (also beta_n)
///   alpha_n  = phi_n / ln n
///   q_n      = (2 ln n + phi)/(2 ln n + phi/2) exp(-phi^2 / (4 ln n))
///   c_n      = q_n [1 + (-L3 n - const + x) / ((3/2) L2 n)]^{-1}
///   x_star   = (3/2) L2 n - L3 n - const, the root of phi_n(-x) = 0
struct NormalizationSchedule {
  LogIndex index;
  double x;
  Sided sided;
  double phi;
  double beta;
  double alpha;
  double q;
  double c;
  double x_star;

  static NormalizationSchedule compute(LogIndex index, double x, Sided sided = Sided::One);
  /// Threshold 1 + phi / (2 ln n) of the tail supremum.
  [[nodiscard]] double threshold() const { return 1.0 + phi / (2.0 * index.ln_n()); }
};

/// Certified value of sum_{j>=n} rate(y sqrt(2 ln j)).
struct TailExponent {
  LogReal value;
  LogReal error_bound;      ///< absolute
  long head_terms = 0;      ///< terms summed one by one
  double ln_cut = 0.0;      ///< ln of the index where the tail treatment starts
  bool euler_maclaurin = false;

  [[nodiscard]] double relative_error() const {
    if (value.is_zero()) return 0.0;
    return std::exp(error_bound.log_abs - value.log_abs);
  }
};

inline constexpr double kDefaultTailTolerance = 1e-10;

/// Exact law of sup_{j>=n} M_j / sqrt(2 ln j) for i.i.d. excursion maxima M_j
/// of the OU process:
///
///   P{sup <= y} = prod_{j>=n} P{M_1 <= y sqrt(2 ln j)} = exp(-tail_exponent(y)).
///
/// Only the closed-form OU base law is supported.
class TailSupLaw {
 public:
  TailSupLaw(LogIndex index, ExcursionMaxLaw base = ExcursionMaxLaw::ou(),
             double truncation_tolerance = kDefaultTailTolerance);

  [[nodiscard]] const LogIndex& index() const { return index_; }
  [[nodiscard]] const ExcursionMaxLaw& base() const { return base_; }
  [[nodiscard]] double tolerance() const { return tol_; }

  /// DivergenceError for y <= 1; CertificationError if the relative
  /// truncation and quadrature error cannot be brought below the tolerance.
  /// The reported bound also covers floating-point rounding, which grows
  /// like eps * ln n and is not subject to the tolerance.
  [[nodiscard]] TailExponent tail_exponent(double y) const;
  /// 0 for y <= 1.
  [[nodiscard]] double tail_cdf(double y) const;
  /// 1 - tail_cdf(y), accurate when tail_cdf is close to 1.
  [[nodiscard]] double tail_sf(double y) const;

  /// The exponent with each term replaced by its leading asymptotic
  /// (y/sqrt 2) sqrt(ln j) j^{-y^2} and the sum by an integral:
  ///   kappa (y/sqrt 2) a^{-3/2} Gamma(3/2, a ln n),  a = y^2 - 1.
  [[nodiscard]] LogReal leading_order_exponent(double y) const;

 private:
  LogIndex index_;
  ExcursionMaxLaw base_;
  double tol_;
};

/// P{U_n <= x} computed exactly from the tail-supremum law; 0 when
/// phi_n(x) <= 0.
double u_cdf_exact(LogIndex index, double x, Sided sided = Sided::One,
                   double tol = kDefaultTailTolerance);

struct BoundedValue {
  double value;
  double error_bound;  ///< absolute
};

/// u_cdf_exact together with the error carried over from the certified
/// tail exponent.
BoundedValue u_cdf_exact_bounded(LogIndex index, double x, Sided sided = Sided::One,
                                 double tol = kDefaultTailTolerance);

/// exp(-c_n(x) e^{-x}) with the o(1) set to zero; 0 when phi_n(x) <= 0.
double u_cdf_closed_form(LogIndex index, double x, Sided sided = Sided::One);

/// Evenly spaced grid; a single point when count == 1.
std::vector<double> linear_grid(double lo, double hi, int count);

/// u_cdf_exact over a grid. OpenMP-parallel; output order follows `xs`.
std::vector<double> u_cdf_exact_grid(LogIndex index, std::span<const double> xs, Sided sided);
/// Serial reference of u_cdf_exact_grid.
std::vector<double> u_cdf_exact_grid_serial(LogIndex index, std::span<const double> xs,
                                            Sided sided);

/// max over the grid of |u_cdf_exact(x) - Lambda(x)|.
double ks_to_gumbel(LogIndex index, double x_min, double x_max, int count,
                    Sided sided = Sided::One);

/// sup over grid points with phi_n(x) > 0 of |E_exact / E_closed - 1|, where
/// E_closed = c_n(x) e^{-x}. This is the size of the [1 + o(1)] factor.
double closed_form_exponent_deviation(LogIndex index, std::span<const double> xs,
                                      Sided sided = Sided::One);

struct StrongLawPoint {
  double ln_n;
  double y;                    ///< sqrt(1 + c L2 n / ln n)
  double exact_exponent;
  double exact_error;          ///< certified absolute error of exact_exponent
  double asymptotic_exponent;  ///< (ln n)^{3/2 - c} / (c sqrt 2 L2 n)
  double ratio;                ///< exact / asymptotic
  double probability;          ///< exp(-exact_exponent)
};

/// P{sup_{j>=n} M_j / sqrt(2 ln j) <= sqrt(1 + c L2 n / ln n)}.
StrongLawPoint strong_law_prob(LogIndex index, double c);

struct StrongLawRow {
  int k;
  StrongLawPoint point;
  double partial_sum;
  double increment;
};

/// strong_law_prob along n = rho^k for every k <= k_max with k ln rho > 1.
std::vector<StrongLawRow> strong_law_schedule(double c, double rho, int k_max);

struct Expectation {
  double value;
  double error_bound;
};

/// E[U_n] = int_0^inf (1 - F(x)) dx - int_0^inf F(-x) dx with F = u_cdf_exact.
Expectation expectation_u(LogIndex index, Sided sided = Sided::One);

/// 1 + (3/4) L3/L2 - (1/2) L4/L2 + (1/2)(gamma - ln(3/sqrt 2))/L2, given
/// L2 = ln ln t. DomainError unless l2t > 1.
double expectation_expansion(double l2t);

}  // namespace lilx
