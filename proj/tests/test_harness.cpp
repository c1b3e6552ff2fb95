#include <cmath>
#include <sstream>

#include "doctest.h"
#include "zistats/harness.hpp"

using namespace zistats;

TEST_CASE("study config parsing") {
  std::istringstream in(
      "# a small study\n"
      "family = zip\n"
      "theta = 3,5\n"
      "p = 0, 0.05\n"
      "n = 50,100\n"
      "test = asymptotic\n"
      "alpha = 0.05\n"
      "mc_reps = 250\n"
      "seed = 99\n");
  const auto cfg = parse_study_config(in);
  CHECK(cfg.generator_family == Family::zip);
  CHECK(cfg.theta_list == std::vector<double>{3.0, 5.0});
  CHECK(cfg.p_list == std::vector<double>{0.0, 0.05});
  CHECK(cfg.n_list == std::vector<std::int64_t>{50, 100});
  CHECK(cfg.test == StudyTest::asymptotic);
  CHECK(cfg.mc_reps == 250);
  CHECK(cfg.seed == 99);
}

TEST_CASE("study config errors carry line numbers") {
  std::istringstream bad_key("family = zip\ntheta = 3\nwat = 7\n");
  CHECK_THROWS_WITH_AS(parse_study_config(bad_key), doctest::Contains("line 3"),
                       parse_error);
  std::istringstream bad_number("family = zip\ntheta = 3,oops\n");
  CHECK_THROWS_WITH_AS(parse_study_config(bad_number), doctest::Contains("line 2"),
                       parse_error);
  std::istringstream no_family("theta = 3\n");
  CHECK_THROWS_AS(parse_study_config(no_family), parse_error);
}

TEST_CASE("study validation") {
  StudyConfig cfg;
  cfg.theta_list = {3.0};
  cfg.p_list = {0.0};
  cfg.n_list = {50};
  cfg.mc_reps = 10;  // too small
  CHECK_THROWS_AS(validate(cfg), domain_error);
  cfg.mc_reps = 100;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("studies are bit-reproducible across runs and thread counts") {
  StudyConfig cfg;
  cfg.generator_family = Family::zip;
  cfg.theta_list = {3.0};
  cfg.p_list = {0.0, 0.1};
  cfg.n_list = {50};
  cfg.test = StudyTest::asymptotic;
  cfg.mc_reps = 200;
  cfg.seed = 314;
  const auto r1 = run_study(cfg);
  const auto r2 = run_study(cfg);
  cfg.threads = 2;
  const auto r3 = run_study(cfg);
  REQUIRE(r1.rows.size() == 2);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].rejection_rate == r2.rows[i].rejection_rate);
    CHECK(r1.rows[i].rejection_rate == r3.rows[i].rejection_rate);
    CHECK(r1.rows[i].mc_standard_error ==
          doctest::Approx(std::sqrt(r1.rows[i].rejection_rate *
                                    (1.0 - r1.rows[i].rejection_rate) / 200.0))
              .epsilon(1e-14));
  }
  CHECK(r1.rows[0].generator == "zip:theta=3,p=0");
  CHECK(r1.rows[1].rejection_rate > r1.rows[0].rejection_rate);  // power > level
}

TEST_CASE("a bootstrap study runs end to end at tiny scale") {
  StudyConfig cfg;
  cfg.generator_family = Family::zip;
  cfg.theta_list = {3.0};
  cfg.p_list = {0.1};
  cfg.n_list = {30};
  cfg.test = StudyTest::bootstrap_zero;
  cfg.p0 = 0.0;
  cfg.mc_reps = 100;
  cfg.B = 99;
  cfg.seed = 2718;
  const auto report = run_study(cfg);
  REQUIRE(report.rows.size() == 1);
  const auto& row = report.rows.front();
  CHECK(row.rejection_rate >= 0.0);
  CHECK(row.rejection_rate <= 1.0);
  CHECK(row.method == "bootstrap_zero");
  CHECK(row.n == 30);
  CHECK(row.wall_seconds > 0.0);
}

TEST_CASE("cells with frequent degenerate samples are flagged") {
  StudyConfig cfg;
  cfg.generator_family = Family::zip;
  cfg.theta_list = {0.05};
  cfg.p_list = {0.8};
  cfg.n_list = {10};
  cfg.test = StudyTest::score;
  cfg.mc_reps = 100;
  cfg.seed = 10;
  const auto report = run_study(cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows.front().degenerate_redraws > 0);
  CHECK(report.rows.front().flagged);
}

TEST_CASE("power and inverse cv under the null stay near the level") {
  const auto rows = power_vs_invcv(DistributionSpec::poisson(3.0), 50,
                                   NullFamily::poisson, Side::min, {2, 5}, 200, 99,
                                   0.05, 4242);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    // alpha = 0.05 within 3 binomial standard errors over 200 reps
    CHECK(std::abs(row.power - 0.05) <= 3.0 * std::sqrt(0.05 * 0.95 / 200.0));
    CHECK(std::isfinite(row.inv_cv));
  }
}

TEST_CASE("power table is deterministic") {
  const auto a = power_vs_invcv(DistributionSpec::zip(3.0, 0.1), 40,
                                NullFamily::poisson, Side::min, {2, 5}, 120, 99, 0.05, 7);
  const auto b = power_vs_invcv(DistributionSpec::zip(3.0, 0.1), 40,
                                NullFamily::poisson, Side::min, {2, 5}, 120, 99, 0.05, 7,
                                {}, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].power == b[i].power);
    CHECK(a[i].mean == b[i].mean);
    CHECK(a[i].sd == b[i].sd);
  }
}
