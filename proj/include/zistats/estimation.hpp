#pragma once

// Maximum-likelihood fitting of Poisson, ZIP and NB models to a count
// sample.  All three families are parametrized by the mean, so every
// fit sets theta to the sample mean; the remaining parameter comes from
// the zero-count equation (ZIP) or the profile log-likelihood (NB).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "zistats/distributions.hpp"
#include "zistats/errors.hpp"

namespace zistats {

struct FitResult {
  DistributionSpec spec;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  bool boundary = false;  // an estimate was clamped to the parameter-space edge
};

inline double log_likelihood(const DistributionSpec& spec, const CountSample& sample) {
  double ll = 0.0;
  for (const auto& [value, count] : histogram(sample))
    ll += static_cast<double>(count) * log_pmf(spec, value);
  return ll;
}

inline FitResult fit_poisson(const CountSample& sample) {
  if (sample.n0 == sample.n)
    throw degenerate_sample_error("all counts are zero; no Poisson model fits");
  FitResult r;
  r.spec = DistributionSpec::poisson(sample.mean);
  r.loglik = log_likelihood(r.spec, sample);
  r.converged = true;
  return r;
}

namespace detail {

// Zero-count equation for the ZIP maximum likelihood estimate:
// g(p) = (1-p)(1 - e^{-theta/(1-p)}) - (1 - n0/n), strictly decreasing
// in p, with the MLE at its root.
inline double zip_zero_equation(double p, double theta, double target) {
  return -(1.0 - p) * std::expm1(-theta / (1.0 - p)) - target;
}

struct ZipRoot {
  double p;
  int iterations;
  bool boundary;
};

inline ZipRoot zip_solve(const CountSample& sample, bool allow_negative) {
  const double theta = sample.mean;
  const double target = 1.0 - static_cast<double>(sample.n0) / static_cast<double>(sample.n);
  double lo = 0.0;
  if (zip_zero_equation(0.0, theta, target) <= 0.0) {
    if (!allow_negative) return {0.0, 0, true};
    // Push the lower bracket endpoint left until the equation turns
    // positive; it tends to theta - target > 0 unless every nonzero
    // count equals one.
    lo = -1.0;
    int expand = 0;
    while (zip_zero_equation(lo, theta, target) <= 0.0) {
      lo *= 2.0;
      if (++expand > 60) return {lo, expand, true};
    }
  }
  double hi = 1.0 - 1e-12;
  int iter = 0;
  while (hi - lo > 1e-15 && iter < 200) {
    const double mid = 0.5 * (lo + hi);
    if (zip_zero_equation(mid, theta, target) > 0.0)
      lo = mid;
    else
      hi = mid;
    ++iter;
  }
  return {0.5 * (lo + hi), iter, false};
}

}  // namespace detail

// Root of the ZIP zero-count equation without the p >= 0 clamp; the
// result is negative on samples with fewer zeros than a Poisson of the
// same mean predicts.  Used by the normality diagnostic of the
// standardized maximum discrepancy statistic.
inline double zip_mixing_root_unrestricted(const CountSample& sample) {
  if (sample.n0 == sample.n)
    throw degenerate_sample_error("all counts are zero; p is unidentifiable");
  return detail::zip_solve(sample, true).p;
}

inline FitResult fit_zip(const CountSample& sample) {
  if (sample.n0 == sample.n)
    throw degenerate_sample_error("all counts are zero; p is unidentifiable");
  const auto root = detail::zip_solve(sample, false);
  FitResult r;
  r.spec = DistributionSpec::zip(sample.mean, root.p);
  r.loglik = log_likelihood(r.spec, sample);
  r.converged = true;
  r.iterations = root.iterations;
  r.boundary = root.boundary;
  return r;
}

namespace detail {

inline double nb_profile_loglik(double t, double theta, const CountSample& sample) {
  return log_likelihood(DistributionSpec::nb(t, theta), sample);
}

}  // namespace detail

// Profile MLE of the NB dispersion t at theta = sample mean.  For
// underdispersed samples the profile decreases away from t = 0 and the
// fit is reported at the Poisson boundary.
inline FitResult fit_nb(const CountSample& sample) {
  if (sample.n0 == sample.n)
    throw degenerate_sample_error("all counts are zero; no NB model fits");
  const double theta = sample.mean;
  double sum_sq = 0.0;
  for (auto c : sample.counts) {
    const double d = static_cast<double>(c) - theta;
    sum_sq += d * d;
  }
  const double var_n = sum_sq / static_cast<double>(sample.n);
  if (var_n == 0.0)
    throw degenerate_sample_error("zero-variance sample; dispersion is unidentifiable");

  FitResult r;
  // Left-end profile score: d loglik / dt at 0+ equals
  // (sum (y - theta)^2 - sum y) / 2; nonpositive means the Poisson
  // boundary maximizes the profile.
  if (sum_sq <= theta * static_cast<double>(sample.n)) {
    r.spec = DistributionSpec::poisson(theta);
    r.loglik = log_likelihood(r.spec, sample);
    r.converged = true;
    r.boundary = true;
    return r;
  }

  constexpr double kTMax = 1e4;
  const auto profile = [&](double t) { return detail::nb_profile_loglik(t, theta, sample); };

  // Expand the right bracket end until the profile turns downhill; the
  // left end is downhill-from-inside already because the score at 0+ is
  // positive.
  double b = std::max(1e-6, (var_n / theta - 1.0) / theta);
  double fb = profile(b);
  int iterations = 0;
  while (true) {
    if (b >= kTMax)
      throw convergence_error("nb dispersion estimate ran into the search cap t = 1e4");
    const double b2 = std::min(kTMax, 2.0 * b);
    const double fb2 = profile(b2);
    ++iterations;
    if (fb2 < fb) { b = b2; break; }
    b = b2;
    fb = fb2;
  }

  double a = 1e-10;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = profile(x1);
  double f2 = profile(x2);
  while (b - a > 1e-8) {
    if (f1 > f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = profile(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = profile(x2);
    }
    if (++iterations > 10000)
      throw convergence_error("nb profile search did not converge");
  }
  const double t_hat = 0.5 * (a + b);
  r.spec = DistributionSpec::nb(t_hat, theta);
  r.loglik = profile(t_hat);
  r.converged = true;
  r.iterations = iterations;
  return r;
}

}  // namespace zistats
