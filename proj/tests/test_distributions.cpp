#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracle_utils.hpp"
#include "zistats/distributions.hpp"

using namespace zistats;

namespace {

// Representative parameter points for every family, all with mean theta.
std::vector<DistributionSpec> family_grid() {
  std::vector<DistributionSpec> grid;
  for (double theta : {0.36, 1.0, 3.0}) {
    grid.push_back(DistributionSpec::poisson(theta));
    for (double p : {0.0, 0.1, 0.4}) {
      grid.push_back(DistributionSpec::zip(theta, p));
      grid.push_back(DistributionSpec::zib(10, theta, p));
      for (double t : {0.1, 0.5, 1.89}) {
        grid.push_back(DistributionSpec::zinb1(t, theta, p));
        grid.push_back(DistributionSpec::zinb2(t, theta, p));
      }
    }
    for (double t : {0.1, 0.5, 1.89}) grid.push_back(DistributionSpec::nb(t, theta));
  }
  return grid;
}

}  // namespace

TEST_CASE("zip with p = 0 is plain poisson") {
  for (double theta : {0.36, 3.0})
    for (std::int64_t j = 0; j <= 40; ++j)
      CHECK(pmf(DistributionSpec::zip(theta, 0.0), j) ==
            doctest::Approx(pmf(DistributionSpec::poisson(theta), j)).epsilon(1e-14));
}

TEST_CASE("zip decomposes into a point mass plus a poisson component") {
  const double theta = 2.0, p = 0.3;
  const auto zip = DistributionSpec::zip(theta, p);
  const auto pois = DistributionSpec::poisson(theta / (1.0 - p));
  for (std::int64_t j = 0; j <= 40; ++j) {
    const double expected = (j == 0 ? p : 0.0) + (1.0 - p) * pmf(pois, j);
    CHECK(pmf(zip, j) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("fitted lamb zero frequencies match the reference fits") {
  CHECK(240.0 * pmf(DistributionSpec::zip(0.36, 0.58), 0) ==
        doctest::Approx(182.0).epsilon(0.05 / 182.0));
  // theta is the exact lamb mean; 0.36 is its display rounding, which
  // alone shifts the zero cell by more than the reference tolerance
  CHECK(240.0 * pmf(DistributionSpec::nb(1.89, 86.0 / 240.0), 0) ==
        doctest::Approx(182.5).epsilon(0.1 / 182.5));
}

TEST_CASE("the two zero-inflated nb parametrizations coincide after rescaling t") {
  const double t = 0.7, theta = 2.0, p = 0.3;
  const auto z1 = DistributionSpec::zinb1(t, theta, p);
  const auto z2 = DistributionSpec::zinb2(t * (1.0 - p), theta, p);
  for (std::int64_t j = 0; j <= 60; ++j)
    CHECK(pmf(z1, j) == doctest::Approx(pmf(z2, j)).epsilon(1e-12));
}

TEST_CASE("cdf closed form at zero and at the binomial endpoint") {
  const double theta = 0.8, p = 0.25;
  CHECK(cdf(DistributionSpec::zip(theta, p), 0) ==
        doctest::Approx(p + (1 - p) * std::exp(-theta / (1 - p))).epsilon(1e-14));
  CHECK(cdf(DistributionSpec::zib(7, 2.0, 0.1), 7) == 1.0);
  CHECK(cdf(DistributionSpec::poisson(1.0), 200) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cdf(DistributionSpec::poisson(1.0), -1) == 0.0);
}

TEST_CASE("cdf is nondecreasing and reaches the tail rule") {
  for (const auto& spec : family_grid()) {
    double prev = 0.0;
    const std::int64_t j_tail = truncation_index(spec, 1e-10);
    for (std::int64_t j = 0; j <= j_tail; ++j) {
      const double cur = cdf(spec, j);
      CHECK(cur >= prev);
      prev = cur;
    }
    CHECK(1.0 - cdf(spec, j_tail) <= 1e-10);
  }
}

TEST_CASE("normalization under the truncation rule") {
  const double eps = 1e-9;
  for (const auto& spec : family_grid()) {
    const std::int64_t j_max = truncation_index(spec, eps);
    double total = 0.0;
    for (std::int64_t j = 0; j <= j_max; ++j) total += pmf(spec, j);
    CHECK(total >= 1.0 - eps - 1e-13);
    CHECK(total <= 1.0 + 1e-12);
  }
}

TEST_CASE("moment identities across the family grid") {
  for (const auto& spec : family_grid()) {
    const std::int64_t j_max =
        spec.family == Family::zib ? spec.m : truncation_index(spec, 1e-13) + 4;
    double m1 = 0.0, m2 = 0.0;
    for (std::int64_t j = 0; j <= j_max; ++j) {
      const double w = pmf(spec, j);
      m1 += static_cast<double>(j) * w;
      m2 += static_cast<double>(j) * static_cast<double>(j) * w;
    }
    CHECK(m1 == doctest::Approx(mean(spec)).epsilon(1e-8));
    CHECK(m2 - m1 * m1 == doctest::Approx(variance(spec)).epsilon(1e-8));
  }
}

TEST_CASE("closed-form variances") {
  const double theta = 1.5, p = 0.2, t = 0.4;
  CHECK(variance(DistributionSpec::zip(theta, p)) ==
        doctest::Approx(theta + theta * theta * p / (1 - p)).epsilon(1e-14));
  CHECK(variance(DistributionSpec::zip(theta, 0.0)) == doctest::Approx(theta));
  const double gap = variance(DistributionSpec::zinb2(t, theta, p)) -
                     variance(DistributionSpec::zinb1(t, theta, p));
  CHECK(gap == doctest::Approx(theta * theta * t * p / (1 - p)).epsilon(1e-12));
  CHECK(gap >= 0.0);
}

TEST_CASE("degenerate zib concentrates on 0 and m") {
  const auto spec = DistributionSpec::zib(5, 5.0 * (1.0 - 0.2), 0.2);  // success prob 1
  CHECK(pmf(spec, 0) == doctest::Approx(0.2));
  CHECK(pmf(spec, 5) == doctest::Approx(0.8));
  for (std::int64_t j = 1; j < 5; ++j) CHECK(pmf(spec, j) == 0.0);
  CHECK(pmf(spec, 6) == 0.0);
}

TEST_CASE("spec validation rejects out-of-domain parameters") {
  CHECK_THROWS_AS(validate(DistributionSpec::poisson(0.0)), domain_error);
  CHECK_THROWS_AS(validate(DistributionSpec::zip(1.0, 1.0)), domain_error);
  CHECK_THROWS_AS(validate(DistributionSpec::zip(1.0, -0.1)), domain_error);
  CHECK_THROWS_AS(validate(DistributionSpec::zib(3, 3.5, 0.2)), domain_error);
  CHECK_THROWS_AS(validate(DistributionSpec::nb(0.0, 1.0)), domain_error);
  CHECK_NOTHROW(validate(DistributionSpec::zib(5, 4.0, 0.2)));  // theta == m(1-p)
}

TEST_CASE("sampling is deterministic in the stream state") {
  const auto spec = DistributionSpec::zinb2(0.5, 2.0, 0.2);
  RandomStream a(11), b(11);
  const auto s1 = sample_from(spec, 500, a);
  const auto s2 = sample_from(spec, 500, b);
  CHECK(s1.counts == s2.counts);
  RandomStream c(12);
  CHECK(sample_from(spec, 500, c).counts != s1.counts);
}

TEST_CASE("large-sample moments of the zip sampler") {
  const auto spec = DistributionSpec::zip(3.0, 0.1);
  RandomStream stream(20240811);
  const auto s = sample_from(spec, 1000000, stream);
  CHECK(std::abs(s.mean - 3.0) < 0.02);  // 5 sigma of sqrt(var/n)
  const double zero_frac = static_cast<double>(s.n0) / static_cast<double>(s.n);
  CHECK(std::abs(zero_frac - cdf(spec, 0)) < 0.005);
}

TEST_CASE("large-sample mean of every family's sampler") {
  for (const auto& spec : {DistributionSpec::poisson(2.0), DistributionSpec::nb(0.5, 2.0),
                           DistributionSpec::zib(8, 2.0, 0.3),
                           DistributionSpec::zinb1(0.5, 2.0, 0.3)}) {
    RandomStream stream(5);
    const auto s = sample_from(spec, 200000, stream);
    const double band = 5.0 * std::sqrt(variance(spec) / 200000.0);
    CHECK(std::abs(s.mean - mean(spec)) < band);
  }
}

TEST_CASE("frequency expansion is canonical and validated") {
  const auto s = make_sample_from_frequencies({{2, 1}, {0, 2}, {1, 1}});
  CHECK(s.counts == std::vector<std::int64_t>{0, 0, 1, 2});
  CHECK(s.n == 4);
  CHECK(s.n0 == 2);
  CHECK(s.mean == doctest::Approx(0.75));
  CHECK_THROWS_AS(make_sample_from_frequencies({{-1, 2}}), domain_error);
  CHECK_THROWS_AS(make_sample_from_frequencies({{1, 0}}), domain_error);
  CHECK_THROWS_AS(make_sample({}), domain_error);
  CHECK_THROWS_AS(make_sample({1, -2}), domain_error);
}

TEST_CASE("spec text form round-trips") {
  for (const auto& spec : family_grid()) {
    const auto parsed = parse_spec(format_spec(spec));
    CHECK(parsed.family == spec.family);
    CHECK(parsed.theta == doctest::Approx(spec.theta).epsilon(1e-14));
    CHECK(parsed.p == doctest::Approx(spec.p).epsilon(1e-14));
  }
  const auto s = parse_spec("zib:m=10,theta=3,p=0.1");
  CHECK(s.m == 10);
  CHECK(s.theta == 3.0);
}

TEST_CASE("spec parse errors name the offending token") {
  CHECK_THROWS_WITH_AS(parse_spec("zap:theta=1"),
                       doctest::Contains("zap"), parse_error);
  CHECK_THROWS_WITH_AS(parse_spec("zip:theta=1,q=0.2"),
                       doctest::Contains("q"), parse_error);
  CHECK_THROWS_WITH_AS(parse_spec("zip:theta=abc"),
                       doctest::Contains("abc"), parse_error);
  CHECK_THROWS_WITH_AS(parse_spec("zip:p=0.5"),
                       doctest::Contains("theta"), parse_error);
  CHECK_THROWS_AS(parse_spec("zib:m=2.5,theta=1,p=0"), parse_error);
}
