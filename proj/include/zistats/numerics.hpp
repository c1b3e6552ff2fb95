#pragma once

// Scalar special functions and series utilities shared by the
// statistical modules: log-gamma, modified Bessel functions of the
// first kind (orders 0..2), the scaled Bessel combination used by the
// asymptotic variance, and normal / chi-square(1) tail helpers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "zistats/errors.hpp"

namespace zistats {

// Truncation policy for infinite series: stop once the neglected tail
// mass is provably below `eps`; give up (and throw) after `max_terms`.
struct SeriesTolerance {
  double eps = 1e-12;
  int max_terms = 100000;
};

inline void validate(const SeriesTolerance& tol) {
  if (!(tol.eps > 0.0) || !(tol.eps < 1e-3))
    throw domain_error("series tolerance eps must lie in (0, 1e-3), got " +
                       std::to_string(tol.eps));
  if (tol.max_terms < 1000)
    throw domain_error("series max_terms must be at least 1000, got " +
                       std::to_string(tol.max_terms));
}

namespace detail {

// Lanczos approximation (g = 7, 9 terms), accurate to ~15 significant
// digits over the positive axis. Implemented locally so results are
// identical across platforms and free of libm globals.
inline double lanczos_log_gamma(double x) {
  static constexpr double kCoef[9] = {
      0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  static constexpr double kLogSqrtTwoPi = 0.91893853320467274178;
  if (x < 0.5) {
    // Reflection keeps accuracy for small positive arguments.
    return std::log(M_PI / std::sin(M_PI * x)) - lanczos_log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (int i = 1; i < 9; ++i) sum += kCoef[i] / (z + i);
  const double base = z + 7.5;
  return kLogSqrtTwoPi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

}  // namespace detail

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma requires a positive argument");
  return detail::lanczos_log_gamma(x);
}

inline double log_factorial(std::int64_t k) {
  if (k < 0) throw domain_error("log_factorial requires k >= 0");
  return k < 2 ? 0.0 : log_gamma(static_cast<double>(k) + 1.0);
}

// log of the rising factorial a (a+1) ... (a+k-1).  Direct summation is
// used for modest k: it is exact enough even when a is huge, where the
// difference of two log-gamma values would cancel catastrophically.
inline double log_rising_factorial(double a, std::int64_t k) {
  if (!(a > 0.0) || k < 0)
    throw domain_error("log_rising_factorial requires a > 0 and k >= 0");
  if (k == 0) return 0.0;
  if (k <= 256) {
    double s = 0.0;
    for (std::int64_t i = 0; i < k; ++i) s += std::log(a + static_cast<double>(i));
    return s;
  }
  return log_gamma(a + static_cast<double>(k)) - log_gamma(a);
}

// Modified Bessel function of the first kind, orders 0..2, by the
// ascending power series with running-term recursion
//   term_{j+1} = term_j * (x/2)^2 / ((j+1)(j+1+nu)).
// The argument stays modest in this library (x = 2*theta), where the
// ascending series is accurate; terms are all positive so the partial
// sum carries no cancellation.
inline double bessel_i(int order, double x) {
  if (order < 0 || order > 2)
    throw domain_error("bessel_i supports orders 0, 1, 2 only");
  if (!(x >= 0.0)) throw domain_error("bessel_i requires x >= 0");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  double term = 1.0;
  for (int nu = 1; nu <= order; ++nu) term *= half / nu;  // (x/2)^nu / nu!
  double sum = 0.0;
  const double half_sq = half * half;
  for (int j = 0; j < 100000; ++j) {
    sum += term;
    if (!std::isfinite(sum))
      throw overflow_error("bessel_i overflow at x = " + std::to_string(x) +
                           "; use the scaled form");
    term *= half_sq / ((j + 1.0) * (j + 1.0 + order));
    if (term < 1e-16 * sum) return sum;
  }
  throw convergence_error("bessel_i series did not converge");
}

// e^{-x} I_order(x), evaluated as a single scaled series: the factor
// e^{-x} is folded into the leading term, so nothing overflows until
// e^{-x} itself is no longer representable.
inline double bessel_i_scaled(int order, double x) {
  if (order < 0 || order > 2)
    throw domain_error("bessel_i_scaled supports orders 0, 1, 2 only");
  if (!(x >= 0.0)) throw domain_error("bessel_i_scaled requires x >= 0");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  double log_lead = -x + order * std::log(half) - log_factorial(order);
  double term = std::exp(log_lead);
  if (term == 0.0)
    throw overflow_error("bessel_i_scaled: e^{-x} I_nu(x) cannot be formed for x = " +
                         std::to_string(x));
  double sum = 0.0;
  const double half_sq = half * half;
  for (int j = 0; j < 100000; ++j) {
    sum += term;
    term *= half_sq / ((j + 1.0) * (j + 1.0 + order));
    if (term < 1e-16 * sum) return sum;
  }
  throw convergence_error("bessel_i_scaled series did not converge");
}

// e^{-2t} [ (1+t) I_0(2t) + I_1(2t) - t I_2(2t) ], fused into one
// scaled series over the shared index j.  This is the factor whose
// complement (1 - value) times theta is the derivative of the
// two-sample maximum discrepancy in the mixing weight at zero; it lies
// in (0, 1) for every t > 0 and tends to 1 as t -> 0+.
inline double scaled_bessel_term(double theta) {
  if (!(theta > 0.0)) throw domain_error("scaled_bessel_term requires theta > 0");
  // base_j = e^{-2t} t^{2j} / (j!)^2 ; the three orders contribute
  //   (1+t) * base_j
  //   base_j * t/(j+1)
  //  -t * base_j * t^2/((j+1)(j+2))
  double base = std::exp(-2.0 * theta);
  if (base == 0.0)
    throw overflow_error("scaled_bessel_term: e^{-2 theta} underflows for theta = " +
                         std::to_string(theta));
  const double t_sq = theta * theta;
  double sum = 0.0;
  for (int j = 0; j < 100000; ++j) {
    const double coef = (1.0 + theta) + theta / (j + 1.0) -
                        theta * t_sq / ((j + 1.0) * (j + 2.0));
    const double term = base * coef;
    sum += term;
    base *= t_sq / ((j + 1.0) * (j + 1.0));
    if (std::abs(term) < 1e-17 * std::abs(sum) && j > static_cast<int>(theta))
      return sum;
  }
  throw convergence_error("scaled_bessel_term series did not converge");
}

// Upper tail of the standard normal distribution, P(Z > z).
inline double normal_upper_tail(double z) {
  return 0.5 * std::erfc(z / M_SQRT2);
}

// Upper tail of the chi-square distribution with one degree of freedom.
inline double chi_squared1_upper_tail(double s) {
  if (!(s >= 0.0)) throw domain_error("chi_squared1_upper_tail requires s >= 0");
  return std::erfc(std::sqrt(0.5 * s));
}

// Inverse standard normal cdf.  Acklam's rational approximation
// polished with one Halley step against erfc, giving near machine
// precision over (0, 1).
inline double normal_quantile(double q) {
  if (!(q > 0.0) || !(q < 1.0))
    throw domain_error("normal_quantile requires q in (0, 1)");
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (q < p_low) {
    const double u = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (q <= 1.0 - p_low) {
    const double u = q - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  // Halley refinement on F(x) - q = 0.
  const double e = 0.5 * std::erfc(-x / M_SQRT2) - q;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace zistats
