#pragma once

// Parametrized count-distribution families: pmf, cdf, moments and
// seeded sampling.  Every family is parametrized by its mean `theta`;
// zero-inflated variants add the structural-zero weight `p`, the
// binomial adds the trial count `m`, and the negative binomial family
// carries the dispersion parameter `t` (variance theta + t theta^2 at
// p = 0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zistats/errors.hpp"
#include "zistats/numerics.hpp"
#include "zistats/random.hpp"

namespace zistats {

enum class Family { poisson, zip, zib, nb, zinb1, zinb2 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::poisson: return "poisson";
    case Family::zip: return "zip";
    case Family::zib: return "zib";
    case Family::nb: return "nb";
    case Family::zinb1: return "zinb1";
    case Family::zinb2: return "zinb2";
  }
  return "?";
}

struct DistributionSpec {
  Family family = Family::poisson;
  double theta = 1.0;  // common mean
  double p = 0.0;      // structural-zero proportion (fixed 0 for poisson/nb)
  double t = 0.0;      // dispersion (nb/zinb only)
  std::int64_t m = 0;  // trials (zib only)

  static DistributionSpec poisson(double theta) { return {Family::poisson, theta, 0.0, 0.0, 0}; }
  static DistributionSpec zip(double theta, double p) { return {Family::zip, theta, p, 0.0, 0}; }
  static DistributionSpec zib(std::int64_t m, double theta, double p) {
    return {Family::zib, theta, p, 0.0, m};
  }
  static DistributionSpec nb(double t, double theta) { return {Family::nb, theta, 0.0, t, 0}; }
  static DistributionSpec zinb1(double t, double theta, double p) {
    return {Family::zinb1, theta, p, t, 0};
  }
  static DistributionSpec zinb2(double t, double theta, double p) {
    return {Family::zinb2, theta, p, t, 0};
  }
};

inline void validate(const DistributionSpec& s) {
  if (!(s.theta > 0.0)) throw domain_error("theta must be positive");
  if (!(s.p >= 0.0) || !(s.p < 1.0)) throw domain_error("p must lie in [0, 1)");
  switch (s.family) {
    case Family::poisson:
    case Family::nb:
      if (s.p != 0.0) throw domain_error("p is fixed at 0 for this family");
      break;
    default:
      break;
  }
  if (s.family == Family::zib) {
    if (s.m < 1) throw domain_error("zib requires m >= 1");
    if (s.theta > static_cast<double>(s.m) * (1.0 - s.p))
      throw domain_error("zib requires theta <= m (1 - p)");
  }
  if (s.family == Family::nb || s.family == Family::zinb1 || s.family == Family::zinb2) {
    if (!(s.t > 0.0)) throw domain_error("t must be positive");
  }
}

inline double mean(const DistributionSpec& s) {
  validate(s);
  return s.theta;
}

inline double variance(const DistributionSpec& s) {
  validate(s);
  const double th = s.theta, p = s.p, q = 1.0 - s.p;
  switch (s.family) {
    case Family::poisson: return th;
    case Family::zip: return th + th * th * p / q;
    case Family::zib: return th + th * th * p / q - th * th / (static_cast<double>(s.m) * q);
    case Family::nb: return th + th * th * s.t;
    case Family::zinb1: return th + th * th * p / q + th * th * s.t;
    case Family::zinb2: return th + th * th * p / q + th * th * s.t / q;
  }
  throw domain_error("unknown family");
}

namespace detail {

inline double poisson_log_pmf(double lambda, std::int64_t j) {
  return static_cast<double>(j) * std::log(lambda) - lambda - log_factorial(j);
}

// Negative binomial with mean theta and variance theta (1 + theta t).
inline double nb_log_pmf(double t, double theta, std::int64_t j) {
  const double a = 1.0 / t;
  const double tt = theta * t;
  return log_rising_factorial(a, j) - log_factorial(j) +
         static_cast<double>(j) * std::log(tt) -
         (static_cast<double>(j) + a) * std::log1p(tt);
}

// Binomial(m, q); q == 1 degenerates to a point mass at m.
inline double binomial_log_pmf(std::int64_t m, double q, std::int64_t j) {
  if (q >= 1.0) return j == m ? 0.0 : -std::numeric_limits<double>::infinity();
  if (q <= 0.0) return j == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double lchoose =
      log_factorial(m) - log_factorial(j) - log_factorial(m - j);
  return lchoose + static_cast<double>(j) * std::log(q) +
         static_cast<double>(m - j) * std::log1p(-q);
}

struct MixtureView {
  double p = 0.0;  // structural-zero weight
  enum class Base { poisson, nb, binomial } base;
  double lambda = 0.0;                 // poisson
  double t = 0.0, theta = 0.0;         // nb
  std::int64_t m = 0; double q = 0.0;  // binomial

  double base_log_pmf(std::int64_t j) const {
    switch (base) {
      case Base::poisson: return poisson_log_pmf(lambda, j);
      case Base::nb: return nb_log_pmf(t, theta, j);
      case Base::binomial: return binomial_log_pmf(m, q, j);
    }
    return -std::numeric_limits<double>::infinity();
  }
};

inline MixtureView mixture_view(const DistributionSpec& s) {
  MixtureView v;
  v.p = s.p;
  const double q1 = 1.0 - s.p;
  switch (s.family) {
    case Family::poisson:
      v.base = MixtureView::Base::poisson;
      v.lambda = s.theta;
      break;
    case Family::zip:
      v.base = MixtureView::Base::poisson;
      v.lambda = s.theta / q1;
      break;
    case Family::zib:
      v.base = MixtureView::Base::binomial;
      v.m = s.m;
      v.q = s.theta / (static_cast<double>(s.m) * q1);
      break;
    case Family::nb:
      v.base = MixtureView::Base::nb;
      v.t = s.t;
      v.theta = s.theta;
      break;
    case Family::zinb1:
      v.base = MixtureView::Base::nb;
      v.t = s.t * q1;
      v.theta = s.theta / q1;
      break;
    case Family::zinb2:
      v.base = MixtureView::Base::nb;
      v.t = s.t;
      v.theta = s.theta / q1;
      break;
  }
  return v;
}

}  // namespace detail

inline double log_pmf(const DistributionSpec& s, std::int64_t j) {
  validate(s);
  if (j < 0) return -std::numeric_limits<double>::infinity();
  if (s.family == Family::zib && j > s.m) return -std::numeric_limits<double>::infinity();
  const auto v = detail::mixture_view(s);
  if (j == 0) {
    const double base0 = v.base_log_pmf(0);
    if (v.p == 0.0) return base0;
    return std::log(v.p + std::exp(std::log1p(-v.p) + base0));
  }
  if (v.p == 0.0) return v.base_log_pmf(j);
  return std::log1p(-v.p) + v.base_log_pmf(j);
}

inline double pmf(const DistributionSpec& s, std::int64_t j) {
  validate(s);
  if (j < 0) return 0.0;
  if (s.family == Family::zib && j > s.m) return 0.0;
  const auto v = detail::mixture_view(s);
  if (j == 0) return v.p + (1.0 - v.p) * std::exp(v.base_log_pmf(0));
  return std::exp(log_pmf(s, j));
}

inline double cdf(const DistributionSpec& s, std::int64_t j) {
  validate(s);
  if (j < 0) return 0.0;
  if (s.family == Family::zib && j >= s.m) return 1.0;  // finite support
  double acc = 0.0;
  for (std::int64_t i = 0; i <= j; ++i) acc += pmf(s, i);
  return std::min(acc, 1.0);
}

// Smallest j with 1 - cdf(j) <= eps, located by doubling from
// ceil(theta) followed by bisection.
inline std::int64_t truncation_index(const DistributionSpec& s, double eps) {
  validate(s);
  if (!(eps > 0.0)) throw domain_error("truncation_index requires eps > 0");
  std::int64_t hi = static_cast<std::int64_t>(std::ceil(s.theta));
  std::int64_t guard = 0;
  while (1.0 - cdf(s, hi) > eps) {
    hi = hi * 2 + 1;
    if (++guard > 70) throw convergence_error("truncation_index: tail does not shrink");
  }
  std::int64_t lo = -1;  // cdf(-1) = 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (1.0 - cdf(s, mid) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Samples

struct CountSample {
  std::vector<std::int64_t> counts;  // observation order preserved
  std::int64_t n = 0;
  std::int64_t n0 = 0;
  double mean = 0.0;
};

inline CountSample make_sample(std::vector<std::int64_t> counts) {
  if (counts.empty()) throw domain_error("a count sample needs at least one observation");
  CountSample s;
  s.n = static_cast<std::int64_t>(counts.size());
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw domain_error("counts must be non-negative");
    if (c == 0) ++s.n0;
    total += c;
  }
  s.mean = static_cast<double>(total) / static_cast<double>(s.n);
  s.counts = std::move(counts);
  return s;
}

// Expands (value, count) pairs into a multiset in nondecreasing order.
inline CountSample make_sample_from_frequencies(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& freq) {
  std::map<std::int64_t, std::int64_t> table;
  for (const auto& [value, count] : freq) {
    if (value < 0) throw domain_error("counts must be non-negative");
    if (count <= 0) throw domain_error("frequencies must be positive");
    table[value] += count;
  }
  std::vector<std::int64_t> counts;
  for (const auto& [value, count] : table)
    counts.insert(counts.end(), static_cast<std::size_t>(count), value);
  return make_sample(std::move(counts));
}

inline std::map<std::int64_t, std::int64_t> histogram(const CountSample& s) {
  std::map<std::int64_t, std::int64_t> h;
  for (auto c : s.counts) ++h[c];
  return h;
}

namespace detail {

// Inversion sampling with a running pmf recursion; exactly one uniform
// per draw.
inline std::int64_t poisson_draw(double lambda, double u) {
  double p = std::exp(-lambda);
  if (p == 0.0)
    throw overflow_error("poisson sampling unsupported for mean " + std::to_string(lambda));
  double acc = p;
  std::int64_t k = 0;
  const std::int64_t cap = 1000 + static_cast<std::int64_t>(20.0 * lambda);
  while (u >= acc && k < cap) {
    ++k;
    p *= lambda / static_cast<double>(k);
    acc += p;
  }
  return k;
}

inline std::int64_t nb_draw(double t, double theta, double u) {
  const double tt = theta * t;
  double p = std::exp(-std::log1p(tt) / t);
  if (p == 0.0)
    throw overflow_error("negative binomial sampling unsupported for these parameters");
  const double ratio_base = tt / (1.0 + tt);
  const double a = 1.0 / t;
  double acc = p;
  std::int64_t k = 0;
  const std::int64_t cap =
      1000 + static_cast<std::int64_t>(20.0 * (theta + std::sqrt(theta * (1.0 + tt))));
  while (u >= acc && k < cap) {
    p *= (static_cast<double>(k) + a) / (static_cast<double>(k) + 1.0) * ratio_base;
    ++k;
    acc += p;
  }
  return k;
}

inline std::int64_t binomial_draw(std::int64_t m, double q, double u) {
  if (q >= 1.0) return m;
  if (q <= 0.0) return 0;
  double p = std::exp(static_cast<double>(m) * std::log1p(-q));
  double acc = p;
  std::int64_t k = 0;
  const double odds = q / (1.0 - q);
  while (u >= acc && k < m) {
    p *= static_cast<double>(m - k) / (static_cast<double>(k) + 1.0) * odds;
    ++k;
    acc += p;
  }
  return k;
}

}  // namespace detail

// n independent draws.  Mixture families first draw the structural-zero
// indicator, then the base count; identical stream state yields
// identical output.
inline CountSample sample_from(const DistributionSpec& s, std::int64_t n,
                               RandomStream& stream) {
  validate(s);
  if (n < 1) throw domain_error("sample size must be at least 1");
  const auto v = detail::mixture_view(s);
  const bool mixture = s.family != Family::poisson && s.family != Family::nb;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
  for (auto& c : counts) {
    if (mixture && stream.next_unit() < v.p) {
      c = 0;
      continue;
    }
    const double u = stream.next_unit();
    switch (v.base) {
      case detail::MixtureView::Base::poisson: c = detail::poisson_draw(v.lambda, u); break;
      case detail::MixtureView::Base::nb: c = detail::nb_draw(v.t, v.theta, u); break;
      case detail::MixtureView::Base::binomial: c = detail::binomial_draw(v.m, v.q, u); break;
    }
  }
  return make_sample(std::move(counts));
}

// ---------------------------------------------------------------------------
// Canonical text form, e.g. "zip:theta=0.36,p=0.58" or "zib:m=10,theta=3,p=0.1".

inline std::string format_spec(const DistributionSpec& s) {
  std::ostringstream os;
  os.precision(15);
  os << family_name(s.family) << ":";
  if (s.family == Family::zib) os << "m=" << s.m << ",";
  os << "theta=" << s.theta;
  if (s.family == Family::nb || s.family == Family::zinb1 || s.family == Family::zinb2)
    os << ",t=" << s.t;
  if (s.family == Family::zip || s.family == Family::zib ||
      s.family == Family::zinb1 || s.family == Family::zinb2)
    os << ",p=" << s.p;
  return os.str();
}

inline DistributionSpec parse_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string fam = text.substr(0, colon);
  DistributionSpec s;
  if (fam == "poisson") s.family = Family::poisson;
  else if (fam == "zip") s.family = Family::zip;
  else if (fam == "zib") s.family = Family::zib;
  else if (fam == "nb") s.family = Family::nb;
  else if (fam == "zinb1") s.family = Family::zinb1;
  else if (fam == "zinb2") s.family = Family::zinb2;
  else throw parse_error("unknown family '" + fam + "' in spec '" + text + "'");

  bool saw_theta = false;
  if (colon != std::string::npos && colon + 1 < text.size()) {
    std::istringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw parse_error("expected key=value, got '" + item + "' in spec '" + text + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double number;
      try {
        number = std::stod(val, &used);
      } catch (const std::exception&) {
        throw parse_error("bad number '" + val + "' in spec '" + text + "'");
      }
      if (used != val.size())
        throw parse_error("bad number '" + val + "' in spec '" + text + "'");
      if (key == "theta") { s.theta = number; saw_theta = true; }
      else if (key == "p") s.p = number;
      else if (key == "t") s.t = number;
      else if (key == "m") {
        if (number != std::floor(number))
          throw parse_error("m must be an integer, got '" + val + "' in spec '" + text + "'");
        s.m = static_cast<std::int64_t>(number);
      }
      else throw parse_error("unknown key '" + key + "' in spec '" + text + "'");
    }
  }
  if (!saw_theta) throw parse_error("spec '" + text + "' is missing theta");
  validate(s);
  return s;
}

}  // namespace zistats
