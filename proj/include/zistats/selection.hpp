#pragma once

// Data-driven choice of the discrepancy (side, k): bootstrap the
// observed sample nonparametrically, recompute the overdispersion
// statistic on each resample, and prefer the (side, k) with the largest
// estimated inverse coefficient of variation mean/sd.  A large mean and
// small spread under the data-generating distribution predict a
// powerful test.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "zistats/distributions.hpp"
#include "zistats/errors.hpp"
#include "zistats/extremes.hpp"
#include "zistats/parallel.hpp"
#include "zistats/random.hpp"
#include "zistats/testing.hpp"

namespace zistats {

struct CvCurve {
  std::vector<int> k_grid;
  Side side = Side::max;
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> inv_cv;  // NaN where sd < 1e-12 (undefined)
  std::int64_t B_cv = 0;
  std::uint64_t seed = 0;
};

inline std::vector<int> default_k_grid() {
  return {2, 3, 5, 8, 12, 20, 35, 50, 90, 130, 200};
}

// Bootstrap estimate of mean, sd and mean/sd of the overdispersion
// statistic at each k.  All k values share the same resamples, which
// removes resampling noise from the argmax comparison.
inline CvCurve cv_curve(const CountSample& sample, NullFamily nf, Side side,
                        const std::vector<int>& k_grid, std::int64_t B_cv,
                        std::uint64_t seed, SeriesTolerance tol = {},
                        int threads = 0) {
  if (k_grid.empty()) throw domain_error("cv_curve needs a nonempty k grid");
  for (int k : k_grid)
    if (k < 2) throw domain_error("cv_curve requires every k >= 2");
  if (B_cv < 2) throw domain_error("cv_curve needs at least 2 resamples");
  detail::fit_null_family(nf, sample);  // fail fast on unusable samples

  const auto n_k = k_grid.size();
  std::vector<double> values(static_cast<std::size_t>(B_cv) * n_k);
  RandomStream root(seed);
  parallel_for(B_cv, threads, [&](std::int64_t b) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw convergence_error("cv resample kept degenerating");
      RandomStream stream = root.child(static_cast<std::uint64_t>(b)).child(attempt);
      std::vector<std::int64_t> counts(static_cast<std::size_t>(sample.n));
      for (auto& c : counts) {
        const auto idx = static_cast<std::size_t>(stream.next_unit() *
                                                  static_cast<double>(sample.n));
        c = sample.counts[std::min(idx, sample.counts.size() - 1)];
      }
      const CountSample resample = make_sample(std::move(counts));
      try {
        const auto refit = detail::fit_null_family(nf, resample);
        for (std::size_t j = 0; j < n_k; ++j)
          values[static_cast<std::size_t>(b) * n_k + j] = detail::lambda_value(
              refit.spec, resample, DiscrepancySpec{side, k_grid[j]}, tol);
      } catch (const degenerate_sample_error&) {
        continue;
      }
      break;
    }
  });

  CvCurve curve;
  curve.k_grid = k_grid;
  curve.side = side;
  curve.B_cv = B_cv;
  curve.seed = seed;
  curve.mean.resize(n_k);
  curve.sd.resize(n_k);
  curve.inv_cv.resize(n_k);
  for (std::size_t j = 0; j < n_k; ++j) {
    double m = 0.0;
    for (std::int64_t b = 0; b < B_cv; ++b)
      m += values[static_cast<std::size_t>(b) * n_k + j];
    m /= static_cast<double>(B_cv);
    double ss = 0.0;
    for (std::int64_t b = 0; b < B_cv; ++b) {
      const double d = values[static_cast<std::size_t>(b) * n_k + j] - m;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(B_cv - 1));
    curve.mean[j] = m;
    curve.sd[j] = sd;
    curve.inv_cv[j] = sd < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : m / sd;
  }
  return curve;
}

// Argmax of inv_cv across both curves.  Ties break toward the smaller k
// (the cheaper statistic), then toward the maximum side.
inline DiscrepancySpec select_k(const CvCurve& curve_max, const CvCurve& curve_min) {
  if (curve_max.k_grid != curve_min.k_grid)
    throw domain_error("select_k requires curves over the same k grid");
  bool found = false;
  DiscrepancySpec best{Side::max, 2};
  double best_value = -std::numeric_limits<double>::infinity();
  const auto consider = [&](Side side, int k, double value) {
    if (std::isnan(value)) return;
    const bool better =
        value > best_value ||
        (value == best_value && (k < best.k || (k == best.k && side == Side::max &&
                                                best.side == Side::min)));
    if (!found || better) {
      found = true;
      best_value = value;
      best = DiscrepancySpec{side, k};
    }
  };
  for (std::size_t j = 0; j < curve_max.k_grid.size(); ++j) {
    consider(Side::max, curve_max.k_grid[j], curve_max.inv_cv[j]);
    consider(Side::min, curve_min.k_grid[j], curve_min.inv_cv[j]);
  }
  if (!found) throw domain_error("select_k: every inverse-CV value is undefined");
  return best;
}

}  // namespace zistats
