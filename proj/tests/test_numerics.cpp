#include <cmath>

#include "doctest.h"
#include "oracle_utils.hpp"
#include "zistats/extremes.hpp"
#include "zistats/numerics.hpp"
#include "zistats/testing.hpp"

using namespace zistats;

// 200-term partial sum of the ascending series for I_0(2), evaluated in
// exact rational arithmetic (Python fractions.Fraction) and rounded to
// 30 digits; the generator script lives in tests/tools/bessel_oracle.py.
static constexpr double kI0At2 = 2.279585302336067267437204440812;
static constexpr double kI1At2 = 1.590636854637329063382254425000;
static constexpr double kI2At2 = 0.688948447698738204054950015812;

TEST_CASE("bessel series at zero argument") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i(2, 0.0) == 0.0);
}

TEST_CASE("bessel series against exact-rational oracle values") {
  CHECK(bessel_i(0, 2.0) == doctest::Approx(kI0At2).epsilon(1e-10));
  CHECK(bessel_i(1, 2.0) == doctest::Approx(kI1At2).epsilon(1e-12));
  CHECK(bessel_i(2, 2.0) == doctest::Approx(kI2At2).epsilon(1e-12));
}

TEST_CASE("bessel order interlacing and recurrence on (0, 50]") {
  for (double x = 0.5; x <= 50.0; x += 0.5) {
    const double i0 = bessel_i(0, x);
    const double i1 = bessel_i(1, x);
    const double i2 = bessel_i(2, x);
    CHECK(i0 > i1);
    CHECK(i1 > i2);
    CHECK(i2 > 0.0);
    const double lhs = i0 - i2;
    const double rhs = 2.0 / x * i1;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("bessel derivative identities via central differences") {
  const double h = 1e-6;
  for (double x : {0.3, 1.0, 2.0, 5.0, 12.0}) {
    const double d0 = (bessel_i(0, x + h) - bessel_i(0, x - h)) / (2 * h);
    CHECK(std::abs(d0 - bessel_i(1, x)) <= 1e-6 * std::max(1.0, bessel_i(1, x)));
    const double d1 = (bessel_i(1, x + h) - bessel_i(1, x - h)) / (2 * h);
    const double expected = 0.5 * (bessel_i(0, x) + bessel_i(2, x));
    CHECK(std::abs(d1 - expected) <= 1e-6 * std::max(1.0, expected));
  }
}

TEST_CASE("scaled bessel evaluation matches the plain series where both work") {
  for (double x : {0.1, 1.0, 5.0, 20.0, 50.0})
    for (int nu : {0, 1, 2})
      CHECK(bessel_i_scaled(nu, x) ==
            doctest::Approx(std::exp(-x) * bessel_i(nu, x)).epsilon(1e-12));
}

TEST_CASE("scaled bessel term stays in (0,1) across the theta range") {
  for (double theta : {0.01, 0.1, 1.0, 5.0, 20.0, 100.0, 300.0}) {
    const double v = scaled_bessel_term(theta);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("scaled bessel term complement equals the discrepancy derivative") {
  // theta (1 - value) must match the derivative of the closed-form
  // two-sample discrepancy in the mixing weight at zero.
  for (double theta : {0.1, 0.36, 1.0, 3.0, 10.0}) {
    const double fd = oracle::central_difference(
        [theta](double p) { return delta22_closed_form(theta, p); }, 0.0, 1e-6);
    const double complement = 1.0 - scaled_bessel_term(theta);
    CHECK(std::abs(fd / theta - complement) <= 1e-5 * std::max(1.0, complement));
  }
}

TEST_CASE("scaled bessel term at theta = 1 matches direct bracket substitution") {
  const double expected =
      std::exp(-2.0) * (2.0 * bessel_i(0, 2.0) + bessel_i(1, 2.0) - bessel_i(2, 2.0));
  CHECK(scaled_bessel_term(1.0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("scaled bessel term tends to 1 as theta -> 0+") {
  CHECK(scaled_bessel_term(1e-9) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("bessel domain and overflow errors") {
  CHECK_THROWS_AS(bessel_i(3, 1.0), domain_error);
  CHECK_THROWS_AS(bessel_i(-1, 1.0), domain_error);
  CHECK_THROWS_AS(bessel_i(0, -0.5), domain_error);
  CHECK_THROWS_AS(bessel_i(0, 1500.0), overflow_error);
  CHECK_THROWS_AS(scaled_bessel_term(0.0), domain_error);
  CHECK_THROWS_AS(scaled_bessel_term(-2.0), domain_error);
  CHECK_THROWS_AS(scaled_bessel_term(500.0), overflow_error);
}

TEST_CASE("series tolerance validation") {
  CHECK_THROWS_AS(validate(SeriesTolerance{0.0, 100000}), domain_error);
  CHECK_THROWS_AS(validate(SeriesTolerance{1e-2, 100000}), domain_error);
  CHECK_THROWS_AS(validate(SeriesTolerance{1e-12, 10}), domain_error);
  CHECK_NOTHROW(validate(SeriesTolerance{}));
}

TEST_CASE("log gamma agrees with the standard library") {
  for (double x : {0.03, 0.2, 0.5, 0.99, 1.0, 1.5, 4.2, 20.0, 1e3, 1e6, 1e10}) {
    const double mine = log_gamma(x);
    const double ref = std::lgamma(x);
    CHECK(std::abs(mine - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK_THROWS_AS(log_gamma(0.0), domain_error);
}

TEST_CASE("log rising factorial avoids cancellation for huge bases") {
  const double a = 1e10;
  double direct = 0.0;
  for (int i = 0; i < 3; ++i) direct += std::log(a + i);
  CHECK(log_rising_factorial(a, 3) == doctest::Approx(direct).epsilon(1e-15));
  CHECK(log_rising_factorial(2.5, 0) == 0.0);
}

TEST_CASE("normal quantile and tail invert each other") {
  for (double q : {1e-6, 0.01, 0.05, 0.5, 0.9, 0.975, 1 - 1e-6}) {
    const double z = normal_quantile(q);
    CHECK(1.0 - normal_upper_tail(z) == doctest::Approx(q).epsilon(1e-12));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  // chi-square(1) upper tail is the two-sided normal tail.
  for (double s : {0.1, 1.0, 3.84, 10.0})
    CHECK(chi_squared1_upper_tail(s) ==
          doctest::Approx(2.0 * normal_upper_tail(std::sqrt(s))).epsilon(1e-13));
}
