#pragma once

// Expected extreme order statistics.  Model-based values come from the
// survival-power series
//   E Y_{k:k} = sum_i [1 - F(i)^k],   E Y_{1:k} = sum_i [1 - F(i)]^k,
// truncated once the neglected tail is provably below tolerance via the
// mean-tail identity sum_{i>J} [1 - F(i)] = E Y - sum_{i<=J} [1 - F(i)].
// Nonparametric plug-in estimators evaluate the same functionals under
// the empirical distribution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "zistats/distributions.hpp"
#include "zistats/errors.hpp"
#include "zistats/numerics.hpp"

namespace zistats {

enum class Side { max, min };

inline const char* side_name(Side s) { return s == Side::max ? "max" : "min"; }

// Which discrepancy statistic to use: the expected maximum or minimum
// of a subsample of size k (k >= 2; at k = 1 both reduce to the mean
// and every discrepancy vanishes).
struct DiscrepancySpec {
  Side side = Side::max;
  int k = 2;
};

inline void validate(const DiscrepancySpec& d) {
  if (d.k < 2) throw domain_error("discrepancy subsample size k must be >= 2");
}

namespace detail {

// 1 - F^k without cancellation for F near 1 or k large.
inline double one_minus_cdf_power(double survival, int k) {
  if (survival <= 0.0) return 0.0;
  if (survival >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(k) * std::log1p(-survival));
}

}  // namespace detail

inline double expected_max(const DistributionSpec& spec, int k,
                           SeriesTolerance tol = {}) {
  validate(spec);
  validate(tol);
  if (k < 1) throw domain_error("expected_max requires k >= 1");
  const double theta = spec.theta;
  double cdf_acc = 0.0, survival_sum = 0.0, total = 0.0;
  for (int i = 0; i < tol.max_terms; ++i) {
    cdf_acc += pmf(spec, i);
    const double survival = std::max(0.0, 1.0 - cdf_acc);
    total += detail::one_minus_cdf_power(survival, k);
    survival_sum += survival;
    const double tail = std::max(0.0, theta - survival_sum);
    if (k * tail <= tol.eps) return total;
    // once the cdf saturates at 1, later terms are identically zero and
    // the mean-tail residue is pure rounding
    if (survival == 0.0) return total;
  }
  throw convergence_error("expected_max series exceeded max_terms for " +
                          format_spec(spec));
}

inline double expected_min(const DistributionSpec& spec, int k,
                           SeriesTolerance tol = {}) {
  validate(spec);
  validate(tol);
  if (k < 1) throw domain_error("expected_min requires k >= 1");
  const double theta = spec.theta;
  double cdf_acc = 0.0, survival_sum = 0.0, total = 0.0;
  for (int i = 0; i < tol.max_terms; ++i) {
    cdf_acc += pmf(spec, i);
    const double survival = std::max(0.0, 1.0 - cdf_acc);
    total += std::pow(survival, static_cast<double>(k));
    survival_sum += survival;
    const double tail = std::max(0.0, theta - survival_sum);
    if (tail <= tol.eps) return total;
    if (survival == 0.0) return total;
  }
  throw convergence_error("expected_min series exceeded max_terms for " +
                          format_spec(spec));
}

// Closed form for the expected maximum of two independent Poisson(t)
// variables: M_2(t) = t + t e^{-2t} (I_0(2t) + I_1(2t)).
inline double m2(double theta) {
  if (!(theta > 0.0)) throw domain_error("m2 requires theta > 0");
  return theta + theta * (bessel_i_scaled(0, 2.0 * theta) +
                          bessel_i_scaled(1, 2.0 * theta));
}

namespace detail {

inline double int_pow(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

// The rank weights are ratios of integers; when every integer involved
// stays below 2^52 the weighted sum is computed exactly in doubles
// (single rounding at the final division).  Otherwise fall back to
// floating powers of i/n.
inline bool exact_weight_path(std::int64_t n, int k, std::int64_t max_count) {
  return k * std::log2(static_cast<double>(n)) +
             std::log2(static_cast<double>(max_count) + 2.0) <
         52.0;
}

}  // namespace detail

// E_{F_n}(Y_{k:k}) = sum_i [(i/n)^k - ((i-1)/n)^k] Y_{(i)}.
inline double empirical_expected_max(const CountSample& sample, int k) {
  if (k < 1) throw domain_error("empirical_expected_max requires k >= 1");
  std::vector<std::int64_t> sorted = sample.counts;
  std::stable_sort(sorted.begin(), sorted.end());
  const std::int64_t n = sample.n;
  const std::int64_t max_count = sorted.back();
  if (detail::exact_weight_path(n, k, max_count)) {
    double num = 0.0, prev = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) {
      const double cur = detail::int_pow(static_cast<double>(i), k);
      num += (cur - prev) * static_cast<double>(sorted[static_cast<std::size_t>(i - 1)]);
      prev = cur;
    }
    return num / detail::int_pow(static_cast<double>(n), k);
  }
  double total = 0.0, prev = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double cur = std::pow(static_cast<double>(i) / static_cast<double>(n),
                                static_cast<double>(k));
    total += (cur - prev) * static_cast<double>(sorted[static_cast<std::size_t>(i - 1)]);
    prev = cur;
  }
  return total;
}

// E_{F_n}(Y_{1:k}) = sum_i [(1-(i-1)/n)^k - (1-i/n)^k] Y_{(i)}.
inline double empirical_expected_min(const CountSample& sample, int k) {
  if (k < 1) throw domain_error("empirical_expected_min requires k >= 1");
  std::vector<std::int64_t> sorted = sample.counts;
  std::stable_sort(sorted.begin(), sorted.end());
  const std::int64_t n = sample.n;
  const std::int64_t max_count = sorted.back();
  if (detail::exact_weight_path(n, k, max_count)) {
    double num = 0.0;
    double prev = detail::int_pow(static_cast<double>(n), k);
    for (std::int64_t i = 1; i <= n; ++i) {
      const double cur = detail::int_pow(static_cast<double>(n - i), k);
      num += (prev - cur) * static_cast<double>(sorted[static_cast<std::size_t>(i - 1)]);
      prev = cur;
    }
    return num / detail::int_pow(static_cast<double>(n), k);
  }
  double total = 0.0, prev = 1.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double cur = std::pow(
        static_cast<double>(n - i) / static_cast<double>(n), static_cast<double>(k));
    total += (prev - cur) * static_cast<double>(sorted[static_cast<std::size_t>(i - 1)]);
    prev = cur;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Convex-dominance checker.  Tests the necessary expected-extremes
// conditions: for every k, E max_k(upper) >= E max_k(lower) and
// E min_k(upper) <= E min_k(lower).

struct DominanceGap {
  int k;
  double max_gap;  // expected_max(upper, k) - expected_max(lower, k)
  double min_gap;  // expected_min(lower, k) - expected_min(upper, k)
};

struct DominanceReport {
  std::vector<DominanceGap> gaps;  // k = 2 .. k_max
  double tol;
  bool violation;      // some gap < -tol
  bool any_strict;     // some gap > tol
};

namespace detail {

// All expected extremes for k = 1..k_max in one scan over the support.
inline void extreme_profile(const DistributionSpec& spec, int k_max,
                            const SeriesTolerance& tol, std::vector<double>& emax,
                            std::vector<double>& emin) {
  emax.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  emin.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  const double theta = spec.theta;
  double cdf_acc = 0.0, survival_sum = 0.0;
  for (int i = 0; i < tol.max_terms; ++i) {
    cdf_acc += pmf(spec, i);
    const double survival = std::max(0.0, 1.0 - cdf_acc);
    double surv_pow = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      emax[static_cast<std::size_t>(k)] += one_minus_cdf_power(survival, k);
      surv_pow *= survival;
      emin[static_cast<std::size_t>(k)] += surv_pow;
    }
    survival_sum += survival;
    const double tail = std::max(0.0, theta - survival_sum);
    if (k_max * tail <= tol.eps) return;
    if (survival == 0.0) return;
  }
  throw convergence_error("extreme profile series exceeded max_terms for " +
                          format_spec(spec));
}

}  // namespace detail

inline DominanceReport check_convex_dominance(const DistributionSpec& lower,
                                              const DistributionSpec& upper,
                                              int k_max, double tol_gap,
                                              SeriesTolerance tol = {}) {
  validate(lower);
  validate(upper);
  if (k_max < 2) throw domain_error("check_convex_dominance requires k_max >= 2");
  if (std::abs(mean(lower) - mean(upper)) > tol_gap)
    throw mean_mismatch_error("convex dominance requires equal means: " +
                              format_spec(lower) + " vs " + format_spec(upper));
  std::vector<double> lo_max, lo_min, up_max, up_min;
  detail::extreme_profile(lower, k_max, tol, lo_max, lo_min);
  detail::extreme_profile(upper, k_max, tol, up_max, up_min);
  DominanceReport report;
  report.tol = tol_gap;
  report.violation = false;
  report.any_strict = false;
  for (int k = 2; k <= k_max; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    DominanceGap g{k, up_max[ku] - lo_max[ku], lo_min[ku] - up_min[ku]};
    if (g.max_gap < -tol_gap || g.min_gap < -tol_gap) report.violation = true;
    if (g.max_gap > tol_gap || g.min_gap > tol_gap) report.any_strict = true;
    report.gaps.push_back(g);
  }
  return report;
}

}  // namespace zistats
