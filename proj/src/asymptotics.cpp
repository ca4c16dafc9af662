#include "lilx/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lilx/errors.hpp"
#include "lilx/parallel.hpp"
#include "kronrod.hpp"

namespace lilx {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this cut the Gamma(3/2) tail bound is not valid (it needs
// x = y sqrt(2 ln j) >= 3, where S(x) >= e^{x^2/2} / x).
constexpr double kMinCut = 128.0;
constexpr long kMaxHeadTerms = 10'000'000;
// Largest ln n for which n is handled as an exact integer.
constexpr double kIntegerStartLimit = 36.0;

// Terms of the tail sum as a function of s = ln j:
//   g(e^s) = kappa / (2 S(y sqrt(2 s))),  psi(s) = ln g(e^s).
struct TermModel {
  double y;
  double log_kappa_half;

  [[nodiscard]] double x(double s) const { return y * std::sqrt(2.0 * s); }
  [[nodiscard]] double psi(double s) const {
    return log_kappa_half - log_scale_ou(x(s)).log_abs;
  }

  // u g'(u) / g and u^3 g'''(u) / g at u = e^s, from the derivatives of psi.
  struct Derivatives {
    double first;
    double third;
  };
  [[nodiscard]] Derivatives derivatives(double s) const {
    const double xs = x(s);
    const ScaleRatio r = scale_ou_ratio(xs);
    const double inv_a = 1.0 / r.a;
    const double rx = -r.da * inv_a * inv_a;
    const double rxx = 2.0 * r.da * r.da * inv_a * inv_a * inv_a - r.d2a * inv_a * inv_a;
    const double y2 = y * y;
    const double p1 = -y2 * inv_a;
    const double p2 = -y2 * y2 * rx / xs;
    const double p3 = -y2 * y2 * y2 * (xs * rxx - rx) / (xs * xs * xs);
    const double d1 = p1;
    const double d2 = p2 + p1 * p1;
    const double d3 = p3 + 3.0 * p1 * p2 + p1 * p1 * p1;
    return {d1, d3 - 3.0 * d2 + 2.0 * d1};
  }

  // ds + psi(s0 + ds) - psi(s0) with ds = t / a, a = y^2 - 1. Writing
  // ln S(x) = x^2/2 - ln x + ln A(x), the linear parts combine to exactly -t,
  // which avoids cancelling y^2 ds against ds when a is tiny.
  [[nodiscard]] double log_weight(double t, double a, double s0, double log_a0) const {
    const double ds = t / a;
    return -t + 0.5 * std::log1p(ds / s0) - (std::log(scale_ou_ratio(x(s0 + ds)).a) - log_a0);
  }
};

// kappa (y / sqrt 2) a^{-3/2} Gamma(3/2, a s): integral of the leading-order
// terms over [e^s, inf), and an upper bound for the exact integrand there.
LogReal gamma_tail(double log_kappa, double y, double a, double s) {
  const LogReal g = upper_incomplete_gamma_3half(a * s);
  return LogReal::from_log(log_kappa + std::log(y) - 0.5 * kLn2 - 1.5 * std::log(a)) * g;
}

}  // namespace

// ---------------------------------------------------------------------------

LogIndex::LogIndex(double ln_n) : ln_n_(ln_n) {
  if (!(ln_n > 1.0) || !std::isfinite(ln_n)) {
    throw DomainError("LogIndex requires ln n > 1, got " + std::to_string(ln_n));
  }
}

LogIndex LogIndex::from_n(double n) {
  if (!(n > 0.0)) throw DomainError("index must be positive");
  return LogIndex(std::log(n));
}

LogIndex LogIndex::from_log10(double log10_n) { return LogIndex(log10_n * std::numbers::ln10); }

double LogIndex::l2() const { return std::log(ln_n_); }
double LogIndex::l3() const { return std::log(l2()); }

double centering_constant(Sided sided) {
  const double one = std::log(3.0 / std::numbers::sqrt2);
  return sided == Sided::One ? one : one - kLn2;
}

NormalizationSchedule NormalizationSchedule::compute(LogIndex index, double x, Sided sided) {
  const double ln_n = index.ln_n();
  const double l2 = index.l2();
  const double l3 = index.l3();
  const double k = centering_constant(sided);
  NormalizationSchedule s{index, x, sided, 0, 0, 0, 0, 0, 0};
  s.x_star = 1.5 * l2 - l3 - k;
  s.phi = s.x_star + x;
  s.beta = s.phi;
  s.alpha = s.phi / ln_n;
  s.q = (2.0 * ln_n + s.phi) / (2.0 * ln_n + 0.5 * s.phi) *
        std::exp(-s.phi * s.phi / (4.0 * ln_n));
  s.c = s.q / (1.0 + (-l3 - k + x) / (1.5 * l2));
  return s;
}

// ---------------------------------------------------------------------------

TailSupLaw::TailSupLaw(LogIndex index, ExcursionMaxLaw base, double truncation_tolerance)
    : index_(index), base_(std::move(base)), tol_(truncation_tolerance) {
  if (base_.scale().kind() != ScaleFunctionHandle::Kind::ClosedFormOu) {
    throw DomainError("TailSupLaw supports the closed-form OU excursion law only");
  }
  if (!(tol_ > 0.0)) throw DomainError("truncation tolerance must be positive");
}

LogReal TailSupLaw::leading_order_exponent(double y) const {
  if (!(y > 1.0)) throw DivergenceError("tail exponent diverges for y <= 1");
  const double log_kappa = base_.sided() == Sided::One ? 0.0 : kLn2;
  return gamma_tail(log_kappa, y, (y - 1.0) * (y + 1.0), index_.ln_n());
}

TailExponent TailSupLaw::tail_exponent(double y) const {
  if (!(y > 1.0)) {
    throw DivergenceError("tail exponent diverges for y <= 1 (y = " + std::to_string(y) + ")");
  }
  const double log_kappa = base_.sided() == Sided::One ? 0.0 : kLn2;
  const TermModel model{y, log_kappa - kLn2};
  const double a = (y - 1.0) * (y + 1.0);
  const double ln_n = index_.ln_n();
  const bool integer_start = ln_n <= kIntegerStartLimit;

  // Head: terms j in [n0, cut) summed one by one, scaled by exp(-head_ref).
  double head_ref = 0.0;
  double head_scaled = 0.0;
  long head_terms = 0;
  auto add_head = [&](double from, double to) {
    for (double j = from; j < to; j += 1.0) {
      const double lt = model.psi(std::log(j));
      if (head_terms == 0) head_ref = lt;
      head_scaled += std::exp(lt - head_ref);
      ++head_terms;
    }
  };
  auto head_value = [&] {
    return head_terms == 0 ? LogReal::zero() : LogReal::from_log(head_ref + std::log(head_scaled));
  };

  double cut = 0.0;  // integer cut while integer_start
  double ln_cut = ln_n;
  if (integer_start) {
    const double n_real = std::exp(ln_n);
    const double n0 = std::max(3.0, std::ceil(n_real * (1.0 - 1e-12)));
    cut = n0;
    if (cut < kMinCut) {
      add_head(n0, kMinCut);
      cut = kMinCut;
    }
    ln_cut = std::log(cut);
  }

  const double budget = tol_ / 4.0;
  for (;;) {
    const LogReal head = head_value();
    const double lg = model.psi(ln_cut);
    const LogReal g_cut = LogReal::from_log(lg);

    // Rounding of the log-domain representation and of S itself.
    const double rounding_rel =
        4.0 * kEps * (std::fabs(lg) + ln_cut + 10.0) + 1e-14 +
        log_scale_ou_series_bound(model.x(ln_cut)) + static_cast<double>(head_terms) * kEps;

    // Option A: rigorous monotone bound sum_{j>=cut} g(j) <= g(cut) + int_cut^inf g.
    if (head_terms > 0) {
      const LogReal upper = g_cut + gamma_tail(log_kappa, y, a, ln_cut);
      const LogReal half = upper * LogReal::from_double(0.5);
      if (upper.log_abs - head.log_abs <= std::log(budget)) {
        TailExponent r;
        r.value = head + half;
        r.error_bound = half + r.value * LogReal::from_double(rounding_rel);
        r.head_terms = head_terms;
        r.ln_cut = ln_cut;
        r.euler_maclaurin = false;
        return r;
      }
    }

    // Option B: Euler-Maclaurin of order 2 at the cut,
    //   sum = int + g/2 - g'/12 + g'''/720 + R,  |R| <= |g'''|/720
    // (g'''' keeps one sign beyond kMinCut).
    const TermModel::Derivatives d = model.derivatives(ln_cut);
    const LogReal g1 = g_cut * LogReal::from_double(d.first) * LogReal::from_log(-ln_cut);
    const LogReal g3 = g_cut * LogReal::from_double(d.third) * LogReal::from_log(-3.0 * ln_cut);
    const LogReal em_remainder = g3.abs() * LogReal::from_double(1.0 / 720.0);
    const LogReal floor_total = head + g_cut;
    if (em_remainder.log_abs - floor_total.log_abs <= std::log(budget)) {
      // Integral int_{ln cut}^inf exp(s + psi(s)) ds with s = ln cut + t / a.
      const double h0 = ln_cut + lg;
      const double log_a0 = std::log(scale_ou_ratio(model.x(ln_cut)).a);
      auto integrand = [&](double t) { return std::exp(model.log_weight(t, a, ln_cut, log_a0)) / a; };
      double horizon = 40.0;
      double j_value = 0.0;
      double j_error = 0.0;
      LogReal trunc;
      // sqrt(1 + t / (a ln cut)) varies on the scale a ln cut, which can be
      // tiny; geometric breakpoints from that scale keep each piece smooth.
      const double first_break = std::min(1.0, a * ln_cut);
      for (int attempt = 0;; ++attempt) {
        j_value = 0.0;
        j_error = 0.0;
        double left = 0.0;
        double right = first_break;
        for (;;) {
          right = std::min(right, horizon);
          const QuadratureResult piece = detail::kronrod_unit(integrand, left, right, budget / 8.0);
          j_value += piece.value;
          j_error += piece.error;
          if (right >= horizon) break;
          left = right;
          right *= 4.0;
        }
        trunc = gamma_tail(log_kappa, y, a, ln_cut + horizon / a);
        if (trunc.log_abs - (h0 + std::log(j_value)) <= std::log(budget / 4.0)) break;
        if (attempt > 8) throw CertificationError("tail integral truncation not certified");
        horizon *= 2.0;
      }
      if (!(j_value > 0.0) || !std::isfinite(j_value)) {
        throw CertificationError("tail integral quadrature failed");
      }
      const LogReal integral = LogReal::from_log(h0 + std::log(j_value));
      const LogReal quad_err = LogReal::from_log(h0) * LogReal::from_double(j_error);

      TailExponent r;
      r.value = head + integral + g_cut * LogReal::from_double(0.5) -
                g1 * LogReal::from_double(1.0 / 12.0) + g3 * LogReal::from_double(1.0 / 720.0);
      // The tolerance governs truncation and quadrature; rounding, which grows
      // like eps * ln n, is reported in the bound but cannot be tightened.
      const LogReal method_error = em_remainder + quad_err + trunc;
      r.error_bound = method_error + r.value * LogReal::from_double(rounding_rel);
      r.head_terms = head_terms;
      r.ln_cut = ln_cut;
      r.euler_maclaurin = true;
      const double method_rel = std::exp(method_error.log_abs - r.value.log_abs);
      if (method_rel > tol_) {
        throw CertificationError("tail exponent truncation bound " + std::to_string(method_rel) +
                                 " exceeds tolerance");
      }
      return r;
    }

    if (!integer_start || head_terms >= kMaxHeadTerms) {
      throw CertificationError("tail exponent at y = " + std::to_string(y) +
                               " not certified within the head-term budget");
    }
    const double next = std::min(2.0 * cut, cut + static_cast<double>(kMaxHeadTerms - head_terms));
    add_head(cut, next);
    cut = next;
    ln_cut = std::log(cut);
  }
}

double TailSupLaw::tail_cdf(double y) const {
  if (!(y > 1.0)) return 0.0;
  const TailExponent e = tail_exponent(y);
  if (e.value.log_abs > 709.0) return 0.0;
  return std::exp(-e.value.to_double());
}

double TailSupLaw::tail_sf(double y) const {
  if (!(y > 1.0)) return 1.0;
  const TailExponent e = tail_exponent(y);
  if (e.value.log_abs > 709.0) return 1.0;
  return -std::expm1(-e.value.to_double());
}

// ---------------------------------------------------------------------------

double u_cdf_exact(LogIndex index, double x, Sided sided, double tol) {
  const NormalizationSchedule s = NormalizationSchedule::compute(index, x, sided);
  if (s.phi <= 0.0) return 0.0;
  return TailSupLaw(index, ExcursionMaxLaw::ou(sided), tol).tail_cdf(s.threshold());
}

BoundedValue u_cdf_exact_bounded(LogIndex index, double x, Sided sided, double tol) {
  const NormalizationSchedule s = NormalizationSchedule::compute(index, x, sided);
  if (s.phi <= 0.0) return {0.0, 0.0};
  const TailSupLaw law(index, ExcursionMaxLaw::ou(sided), tol);
  const TailExponent e = law.tail_exponent(s.threshold());
  if (e.value.log_abs > 709.0) return {0.0, 0.0};
  const double f = std::exp(-e.value.to_double());
  return {f, f * std::expm1(e.error_bound.to_double())};
}

double u_cdf_closed_form(LogIndex index, double x, Sided sided) {
  const NormalizationSchedule s = NormalizationSchedule::compute(index, x, sided);
  if (s.phi <= 0.0) return 0.0;
  return std::exp(-s.c * std::exp(-x));
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw DomainError("grid needs at least one point");
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    xs[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  }
  return xs;
}

std::vector<double> u_cdf_exact_grid(LogIndex index, std::span<const double> xs, Sided sided) {
  std::vector<double> out(xs.size());
  parallel_for(static_cast<std::ptrdiff_t>(xs.size()),
               [&](std::ptrdiff_t i) { out[i] = u_cdf_exact(index, xs[i], sided); });
  return out;
}

std::vector<double> u_cdf_exact_grid_serial(LogIndex index, std::span<const double> xs,
                                            Sided sided) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(u_cdf_exact(index, x, sided));
  return out;
}

double ks_to_gumbel(LogIndex index, double x_min, double x_max, int count, Sided sided) {
  const std::vector<double> xs = linear_grid(x_min, x_max, count);
  const std::vector<double> f = u_cdf_exact_grid(index, xs, sided);
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) ks = std::max(ks, std::fabs(f[i] - gumbel_cdf(xs[i])));
  return ks;
}

double closed_form_exponent_deviation(LogIndex index, std::span<const double> xs, Sided sided) {
  std::vector<double> dev(xs.size(), 0.0);
  const TailSupLaw law(index, ExcursionMaxLaw::ou(sided));
  parallel_for(static_cast<std::ptrdiff_t>(xs.size()), [&](std::ptrdiff_t i) {
    const NormalizationSchedule s = NormalizationSchedule::compute(index, xs[i], sided);
    if (s.phi <= 0.0) return;
    const double log_exact = law.tail_exponent(s.threshold()).value.log_abs;
    const double log_closed = std::log(s.c) - xs[i];
    dev[i] = std::fabs(std::expm1(log_exact - log_closed));
  });
  return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

// ---------------------------------------------------------------------------

StrongLawPoint strong_law_prob(LogIndex index, double c) {
  if (!(c > 0.0)) throw DomainError("strong-law constant c must be positive");
  const double ln_n = index.ln_n();
  const double l2 = index.l2();
  StrongLawPoint p{};
  p.ln_n = ln_n;
  p.y = std::sqrt(1.0 + c * l2 / ln_n);
  const TailExponent e = TailSupLaw(index).tail_exponent(p.y);
  p.exact_exponent = e.value.to_double();
  p.exact_error = e.error_bound.to_double();
  p.asymptotic_exponent =
      std::exp((1.5 - c) * std::log(ln_n) - std::log(c * std::numbers::sqrt2 * l2));
  p.ratio = std::exp(e.value.log_abs - std::log(p.asymptotic_exponent));
  p.probability = std::exp(-p.exact_exponent);
  return p;
}

std::vector<StrongLawRow> strong_law_schedule(double c, double rho, int k_max) {
  if (!(rho > 1.0)) throw DomainError("rho must exceed 1");
  std::vector<int> ks;
  for (int k = 1; k <= k_max; ++k) {
    if (k * std::log(rho) > 1.0) ks.push_back(k);
  }
  std::vector<StrongLawPoint> points(ks.size());
  parallel_for(static_cast<std::ptrdiff_t>(ks.size()), [&](std::ptrdiff_t i) {
    points[i] = strong_law_prob(LogIndex(ks[i] * std::log(rho)), c);
  });
  std::vector<StrongLawRow> rows;
  double partial = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    partial += points[i].probability;
    rows.push_back({ks[i], points[i], partial, points[i].probability});
  }
  return rows;
}

// ---------------------------------------------------------------------------

Expectation expectation_u(LogIndex index, Sided sided) {
  const TailSupLaw law(index, ExcursionMaxLaw::ou(sided));
  const NormalizationSchedule s0 = NormalizationSchedule::compute(index, 0.0, sided);
  const double ln_n = index.ln_n();
  const double x_star = s0.x_star;
  auto threshold = [&](double x) { return 1.0 + (x_star + x) / (2.0 * ln_n); };

  constexpr double kUpper = 50.0;
  constexpr double kTol = 1e-10;
  // P{U_n > x} for x >= 0.
  auto survival = [&](double x) { return law.tail_sf(threshold(x)); };
  const QuadratureResult hi = detail::kronrod_unit(survival, 0.0, kUpper, kTol, 14);
  // P{U_n <= -x} for 0 <= x < x_star; zero beyond.
  QuadratureResult lo;
  if (x_star > 0.0) {
    auto lower = [&](double x) { return law.tail_cdf(threshold(-x)); };
    lo = detail::kronrod_unit(lower, 0.0, x_star, kTol, 14);
  }
  if (!hi.converged || !lo.converged) throw CertificationError("expectation quadrature did not converge");
  // Beyond kUpper: P{U_n > x} <= E(x), which decays at least like e^{-x}.
  const double tail = 2.0 * law.tail_exponent(threshold(kUpper)).value.to_double();
  // Each CDF value carries the tail exponent's relative error, at most
  // 1/e in absolute terms times that error.
  const double pointwise = law.tolerance() * (kUpper + std::max(x_star, 0.0));
  return {hi.value - lo.value, hi.error + lo.error + tail + pointwise};
}

double expectation_expansion(double l2t) {
  if (!(l2t > 1.0)) throw DomainError("expectation_expansion needs L2 t > 1 so that L4 t exists");
  const double l3 = std::log(l2t);
  const double l4 = std::log(l3);
  return 1.0 + 0.75 * l3 / l2t - 0.5 * l4 / l2t +
         0.5 * (kEulerGamma - std::log(3.0 / std::numbers::sqrt2)) / l2t;
}

}  // namespace lilx
