#pragma once

// Hypothesis tests built on expected-extremes discrepancies:
//   * Delta statistics compare the fitted ZIP against the null mixing
//     weight p0, calibrated by parametric bootstrap or (for k = 2,
//     p0 = 0) by the asymptotic normal law of the closed-form
//     discrepancy.
//   * Lambda statistics compare nonparametric plug-in expected extremes
//     against the fitted null model, calibrated by parametric
//     bootstrap; they detect any alternative that dominates the null
//     family in the convex order.
//   * The classical zero-count score test is included as a baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zistats/distributions.hpp"
#include "zistats/errors.hpp"
#include "zistats/estimation.hpp"
#include "zistats/extremes.hpp"
#include "zistats/numerics.hpp"
#include "zistats/parallel.hpp"
#include "zistats/random.hpp"

namespace zistats {

enum class TestMethod { bootstrap, asymptotic, score };

inline const char* method_name(TestMethod m) {
  switch (m) {
    case TestMethod::bootstrap: return "bootstrap";
    case TestMethod::asymptotic: return "asymptotic";
    case TestMethod::score: return "score";
  }
  return "?";
}

enum class NullFamily { poisson, zip, nb };

inline const char* null_family_name(NullFamily f) {
  switch (f) {
    case NullFamily::poisson: return "poisson";
    case NullFamily::zip: return "zip";
    case NullFamily::nb: return "nb";
  }
  return "?";
}

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double critical_value = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.05;
  TestMethod method = TestMethod::bootstrap;
  std::optional<DiscrepancySpec> discrepancy;
  std::optional<std::int64_t> B;
  std::optional<std::uint64_t> seed;
  bool reject = false;
  DistributionSpec fitted_null;
  std::optional<DistributionSpec> fitted_alt;
  std::int64_t degenerate_redraws = 0;  // bootstrap resamples replaced
  double signed_root = std::numeric_limits<double>::quiet_NaN();  // score test only
};

struct BootstrapConfig {
  std::int64_t B = 999;
  std::uint64_t seed = 20240811;
  double alpha = 0.05;
  SeriesTolerance tol{};
  int threads = 0;  // 0 = all cores
};

inline void validate(const BootstrapConfig& cfg) {
  if (cfg.B < 99) throw domain_error("bootstrap needs B >= 99 replicates");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0))
    throw domain_error("alpha must lie in (0, 1)");
  validate(cfg.tol);
}

namespace detail {

inline double delta_value(double theta_hat, double p_hat, double p0,
                          const DiscrepancySpec& d, const SeriesTolerance& tol) {
  const auto fitted = DistributionSpec::zip(theta_hat, p_hat);
  const auto null_spec = DistributionSpec::zip(theta_hat, p0);
  if (d.side == Side::max)
    return expected_max(fitted, d.k, tol) - expected_max(null_spec, d.k, tol);
  return expected_min(null_spec, d.k, tol) - expected_min(fitted, d.k, tol);
}

// m-th smallest of the replicate statistics, m = ceil((1-alpha)(B+1)).
// When m exceeds B the exact test cannot reject at this alpha and the
// critical value is +infinity.
inline double bootstrap_critical_value(std::vector<double> values, double alpha) {
  const auto B = static_cast<std::int64_t>(values.size());
  const auto m = static_cast<std::int64_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(B + 1)));
  if (m > B) return std::numeric_limits<double>::infinity();
  std::nth_element(values.begin(), values.begin() + (m - 1), values.end());
  return values[static_cast<std::size_t>(m - 1)];
}

inline double bootstrap_p_value(const std::vector<double>& replicates, double observed) {
  std::int64_t count = 0;
  for (double v : replicates)
    if (v >= observed) ++count;
  return static_cast<double>(1 + count) /
         static_cast<double>(replicates.size() + 1);
}

}  // namespace detail

// Discrepancy between the fitted ZIP and the null ZIP(theta_hat, p0),
// evaluated through the cdf-power series.
inline double delta_statistic(const CountSample& sample, double p0,
                              const DiscrepancySpec& d, SeriesTolerance tol = {}) {
  if (!(p0 >= 0.0) || !(p0 < 1.0)) throw domain_error("p0 must lie in [0, 1)");
  validate(d);
  const auto fit = fit_zip(sample);
  return detail::delta_value(fit.spec.theta, fit.spec.p, p0, d, tol);
}

// Closed form for the k = 2, p0 = 0 maximum discrepancy:
//   2 p theta + (1-p)^2 M_2(theta/(1-p)) - M_2(theta).
inline double delta22_closed_form(double theta_hat, double p_hat) {
  if (!(theta_hat > 0.0)) throw domain_error("delta22_closed_form requires theta > 0");
  if (!(p_hat < 1.0)) throw domain_error("delta22_closed_form requires p < 1");
  if (p_hat == 0.0) return 0.0;
  const double q = 1.0 - p_hat;
  return 2.0 * p_hat * theta_hat + q * q * m2(theta_hat / q) - m2(theta_hat);
}

// Asymptotic standard deviation of sqrt(n) * Delta_{2:2} under the
// Poisson null: sigma^2 = theta^2 (1 - S(theta))^2 / (e^theta - 1 - theta)
// with S the scaled Bessel combination.
inline double sigma_hat(double theta_hat) {
  if (!(theta_hat > 0.0)) throw domain_error("sigma_hat requires theta > 0");
  const double factor = theta_hat * (1.0 - scaled_bessel_term(theta_hat));
  const double denom = std::expm1(theta_hat) - theta_hat;
  return std::abs(factor) / std::sqrt(denom);
}

// Standardized discrepancy sqrt(n) Delta_{2:2} / sigma(theta_hat) with
// the mixing weight left unrestricted (it may be negative on samples
// with fewer zeros than Poisson predicts).  Under a Poisson null this
// quantity is asymptotically standard normal, which makes it the right
// object for distributional diagnostics; the one-sided test below
// clamps at zero instead.
inline double standardized_delta22(const CountSample& sample) {
  const double p_hat = zip_mixing_root_unrestricted(sample);
  const double theta_hat = sample.mean;
  const double delta = delta22_closed_form(theta_hat, p_hat);
  return std::sqrt(static_cast<double>(sample.n)) * delta / sigma_hat(theta_hat);
}

inline TestResult asymptotic_zip_test(const CountSample& sample, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
  if (sample.n < 2) throw domain_error("asymptotic test needs n >= 2");
  const auto fit = fit_zip(sample);
  const double delta = delta22_closed_form(fit.spec.theta, fit.spec.p);
  const double sigma = sigma_hat(fit.spec.theta);
  TestResult r;
  r.method = TestMethod::asymptotic;
  r.alpha = alpha;
  r.statistic = std::sqrt(static_cast<double>(sample.n)) * delta / sigma;
  r.p_value = normal_upper_tail(r.statistic);
  r.critical_value = normal_quantile(1.0 - alpha);
  r.reject = r.p_value <= alpha;
  r.discrepancy = DiscrepancySpec{Side::max, 2};
  r.fitted_null = DistributionSpec::poisson(fit.spec.theta);
  r.fitted_alt = fit.spec;
  return r;
}

// Parametric bootstrap test of H0: p <= p0 against p > p0 in the ZIP
// model: draw B samples from ZIP(theta_hat, p0), refit each, take the
// ceil((1-alpha)(B+1))-th order statistic of the replicate
// discrepancies as critical value, and reject when the observed
// discrepancy exceeds it.  Replicates whose refit degenerates (an
// all-zero resample) are redrawn from a fresh child stream and counted.
inline TestResult bootstrap_zero_test(const CountSample& sample, double p0,
                                      const DiscrepancySpec& d,
                                      const BootstrapConfig& cfg) {
  if (!(p0 >= 0.0) || !(p0 < 1.0)) throw domain_error("p0 must lie in [0, 1)");
  validate(d);
  validate(cfg);
  const auto fit = fit_zip(sample);
  const double theta_hat = fit.spec.theta;
  const auto null_spec = DistributionSpec::zip(theta_hat, p0);
  const double observed = detail::delta_value(theta_hat, fit.spec.p, p0, d, cfg.tol);

  RandomStream root(cfg.seed);
  std::vector<double> replicates(static_cast<std::size_t>(cfg.B));
  std::vector<std::int64_t> redraws(static_cast<std::size_t>(cfg.B), 0);
  parallel_for(cfg.B, cfg.threads, [&](std::int64_t b) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw convergence_error("bootstrap replicate kept degenerating");
      RandomStream stream = root.child(static_cast<std::uint64_t>(b)).child(attempt);
      const CountSample resample = sample_from(null_spec, sample.n, stream);
      if (resample.n0 == resample.n) {
        ++redraws[static_cast<std::size_t>(b)];
        continue;
      }
      const auto refit = fit_zip(resample);
      replicates[static_cast<std::size_t>(b)] =
          detail::delta_value(refit.spec.theta, refit.spec.p, p0, d, cfg.tol);
      break;
    }
  });

  TestResult r;
  r.method = TestMethod::bootstrap;
  r.alpha = cfg.alpha;
  r.statistic = observed;
  r.critical_value = detail::bootstrap_critical_value(replicates, cfg.alpha);
  r.p_value = detail::bootstrap_p_value(replicates, observed);
  r.reject = r.statistic > r.critical_value;
  r.discrepancy = d;
  r.B = cfg.B;
  r.seed = cfg.seed;
  r.fitted_null = null_spec;
  r.fitted_alt = fit.spec;
  for (auto c : redraws) r.degenerate_redraws += c;
  return r;
}

namespace detail {

inline FitResult fit_null_family(NullFamily nf, const CountSample& sample) {
  switch (nf) {
    case NullFamily::poisson: return fit_poisson(sample);
    case NullFamily::zip: return fit_zip(sample);
    case NullFamily::nb: return fit_nb(sample);
  }
  throw domain_error("unknown null family");
}

// Refit applied to each bootstrap resample: parameters with closed-form
// estimators (the mean, and the ZIP mixing weight) are re-estimated,
// while a dispersion obtained by numerical optimization is treated as
// known at its data estimate.  Re-estimating the dispersion inside the
// bootstrap would let every replicate absorb its own tail discrepancy
// and shrink the null distribution of the statistic.
inline DistributionSpec refit_null_for_bootstrap(NullFamily nf,
                                                 const DistributionSpec& fitted,
                                                 const CountSample& resample) {
  switch (nf) {
    case NullFamily::poisson:
      return fit_poisson(resample).spec;
    case NullFamily::zip:
      return fit_zip(resample).spec;
    case NullFamily::nb:
      if (fitted.family == Family::poisson)  // data fit sat on the boundary
        return fit_poisson(resample).spec;
      if (resample.n0 == resample.n)
        throw degenerate_sample_error("all-zero resample");
      return DistributionSpec::nb(fitted.t, resample.mean);
  }
  throw domain_error("unknown null family");
}

inline double lambda_value(const DistributionSpec& model, const CountSample& sample,
                           const DiscrepancySpec& d, const SeriesTolerance& tol) {
  if (d.side == Side::max)
    return empirical_expected_max(sample, d.k) - expected_max(model, d.k, tol);
  return expected_min(model, d.k, tol) - empirical_expected_min(sample, d.k);
}

}  // namespace detail

// Plug-in-minus-model discrepancy for the overdispersion test: fits the
// null family and compares nonparametric and model expected extremes.
inline double lambda_statistic(const CountSample& sample, NullFamily nf,
                               const DiscrepancySpec& d, SeriesTolerance tol = {}) {
  validate(d);
  const auto fit = detail::fit_null_family(nf, sample);
  return detail::lambda_value(fit.spec, sample, d, tol);
}

// Parametric bootstrap calibration of the overdispersion statistic:
// resamples from the fitted null, re-estimates the null on each
// resample (closed-form parameters only; see refit_null_for_bootstrap),
// and applies the same quantile and p-value conventions as the
// zero-inflation bootstrap.
inline TestResult bootstrap_overdispersion_test(const CountSample& sample,
                                                NullFamily nf,
                                                const DiscrepancySpec& d,
                                                const BootstrapConfig& cfg) {
  validate(d);
  validate(cfg);
  const auto fit = detail::fit_null_family(nf, sample);
  const double observed = detail::lambda_value(fit.spec, sample, d, cfg.tol);

  RandomStream root(cfg.seed);
  std::vector<double> replicates(static_cast<std::size_t>(cfg.B));
  std::vector<std::int64_t> redraws(static_cast<std::size_t>(cfg.B), 0);
  parallel_for(cfg.B, cfg.threads, [&](std::int64_t b) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw convergence_error("bootstrap replicate kept degenerating");
      RandomStream stream = root.child(static_cast<std::uint64_t>(b)).child(attempt);
      const CountSample resample = sample_from(fit.spec, sample.n, stream);
      try {
        const auto refit = detail::refit_null_for_bootstrap(nf, fit.spec, resample);
        replicates[static_cast<std::size_t>(b)] =
            detail::lambda_value(refit, resample, d, cfg.tol);
      } catch (const degenerate_sample_error&) {
        ++redraws[static_cast<std::size_t>(b)];
        continue;
      }
      break;
    }
  });

  TestResult r;
  r.method = TestMethod::bootstrap;
  r.alpha = cfg.alpha;
  r.statistic = observed;
  r.critical_value = detail::bootstrap_critical_value(replicates, cfg.alpha);
  r.p_value = detail::bootstrap_p_value(replicates, observed);
  r.reject = r.statistic > r.critical_value;
  r.discrepancy = d;
  r.B = cfg.B;
  r.seed = cfg.seed;
  r.fitted_null = fit.spec;
  for (auto c : redraws) r.degenerate_redraws += c;
  return r;
}

// Zero-count score statistic from the sample summaries alone:
//   S = (n0/q0 - n)^2 / (n (1/q0 - 1) - n ybar),  q0 = e^{-ybar}.
// n0 is real-valued here so the statistic can be evaluated at the exact
// zero of its numerator, n0 = n q0.
inline double score_statistic_from_summary(std::int64_t n, double n0, double mean) {
  if (n < 2) throw domain_error("score test needs n >= 2");
  if (!(mean > 0.0)) throw degenerate_sample_error("score test needs a nonzero mean");
  const double q0 = std::exp(-mean);
  const double denom =
      static_cast<double>(n) * (std::expm1(mean) - mean);
  if (!(denom > 0.0))
    throw domain_error("score test inapplicable: nonpositive variance denominator");
  const double diff = n0 / q0 - static_cast<double>(n);
  return diff * diff / denom;
}

// Classical two-sided chi-square(1) score test of the Poisson null
// against zero inflation; the signed root is reported alongside for
// one-sided comparisons.
inline TestResult score_test(const CountSample& sample, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
  if (sample.n0 == sample.n)
    throw degenerate_sample_error("all counts are zero; score test undefined");
  TestResult r;
  r.method = TestMethod::score;
  r.alpha = alpha;
  r.statistic = score_statistic_from_summary(
      sample.n, static_cast<double>(sample.n0), sample.mean);
  r.p_value = chi_squared1_upper_tail(r.statistic);
  r.reject = r.p_value <= alpha;
  const double q0 = std::exp(-sample.mean);
  const double sign =
      static_cast<double>(sample.n0) >= static_cast<double>(sample.n) * q0 ? 1.0 : -1.0;
  r.signed_root = sign * std::sqrt(r.statistic);
  r.fitted_null = DistributionSpec::poisson(sample.mean);
  return r;
}

}  // namespace zistats
