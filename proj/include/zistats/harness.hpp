#pragma once

// Monte Carlo study runner: sweeps a grid of generating distributions
// and sample sizes, applies the configured test to mc_reps independent
// samples per cell, and reports rejection rates with their binomial
// standard errors.  Cell seeds are derived from the master seed and the
// cell's own coordinates, so any subset of cells can be re-run in
// isolation with identical results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "zistats/distributions.hpp"
#include "zistats/errors.hpp"
#include "zistats/parallel.hpp"
#include "zistats/random.hpp"
#include "zistats/selection.hpp"
#include "zistats/testing.hpp"

namespace zistats {

enum class StudyTest { bootstrap_zero, asymptotic, score, overdispersion };

inline const char* study_test_name(StudyTest t) {
  switch (t) {
    case StudyTest::bootstrap_zero: return "bootstrap_zero";
    case StudyTest::asymptotic: return "asymptotic";
    case StudyTest::score: return "score";
    case StudyTest::overdispersion: return "overdispersion";
  }
  return "?";
}

struct StudyConfig {
  Family generator_family = Family::zip;
  std::vector<double> theta_list;
  std::vector<double> p_list;  // zero-inflated generators
  std::vector<double> t_list;  // nb / zinb generators
  std::int64_t m = 0;          // zib generators
  std::vector<std::int64_t> n_list;
  StudyTest test = StudyTest::bootstrap_zero;
  double p0 = 0.0;
  DiscrepancySpec d{Side::max, 2};
  NullFamily null_family = NullFamily::poisson;
  std::int64_t mc_reps = 500;
  std::int64_t B = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 20240811;
  SeriesTolerance tol{};
  int threads = 0;
};

inline void validate(const StudyConfig& cfg) {
  if (cfg.mc_reps < 100) throw domain_error("study needs mc_reps >= 100");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0))
    throw domain_error("alpha must lie in (0, 1)");
  if (cfg.theta_list.empty()) throw domain_error("study needs at least one theta");
  if (cfg.n_list.empty()) throw domain_error("study needs at least one n");
  validate(cfg.tol);
}

struct StudyRow {
  std::int64_t n = 0;
  std::string generator;       // canonical spec text
  std::string method;
  double rejection_rate = 0.0;
  double mc_standard_error = 0.0;
  double wall_seconds = 0.0;
  std::int64_t degenerate_redraws = 0;
  bool flagged = false;  // more than 1% of replicates needed redrawing
};

struct StudyReport {
  std::vector<StudyRow> rows;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::vector<DistributionSpec> generator_grid(const StudyConfig& cfg,
                                                    double theta) {
  std::vector<DistributionSpec> specs;
  switch (cfg.generator_family) {
    case Family::poisson:
      specs.push_back(DistributionSpec::poisson(theta));
      break;
    case Family::nb:
      for (double t : cfg.t_list) specs.push_back(DistributionSpec::nb(t, theta));
      break;
    case Family::zip:
      for (double p : cfg.p_list) specs.push_back(DistributionSpec::zip(theta, p));
      break;
    case Family::zib:
      for (double p : cfg.p_list) specs.push_back(DistributionSpec::zib(cfg.m, theta, p));
      break;
    case Family::zinb1:
      for (double p : cfg.p_list)
        for (double t : cfg.t_list) specs.push_back(DistributionSpec::zinb1(t, theta, p));
      break;
    case Family::zinb2:
      for (double p : cfg.p_list)
        for (double t : cfg.t_list) specs.push_back(DistributionSpec::zinb2(t, theta, p));
      break;
  }
  if (specs.empty())
    throw domain_error("generator grid is empty; check the p / t lists");
  return specs;
}

// A sample the configured test cannot even fit is redrawn.
inline bool degenerate_for_test(const StudyConfig& cfg, const CountSample& s) {
  if (s.n0 == s.n) return true;
  if (cfg.test == StudyTest::overdispersion && cfg.null_family == NullFamily::nb) {
    for (auto c : s.counts)
      if (c != s.counts.front()) return false;
    return true;  // zero variance
  }
  return false;
}

}  // namespace detail

inline StudyReport run_study(const StudyConfig& cfg) {
  validate(cfg);
  StudyReport report;
  for (std::int64_t n : cfg.n_list) {
    for (double theta : cfg.theta_list) {
      for (const auto& gen : detail::generator_grid(cfg, theta)) {
        validate(gen);
        const std::string cell_id =
            "gen=" + format_spec(gen) + ";n=" + std::to_string(n) +
            ";test=" + study_test_name(cfg.test) + ";p0=" + std::to_string(cfg.p0) +
            ";side=" + side_name(cfg.d.side) + ";k=" + std::to_string(cfg.d.k) +
            ";null=" + null_family_name(cfg.null_family);
        const RandomStream cell_root(cfg.seed ^ detail::fnv1a64(cell_id));

        const auto start = std::chrono::steady_clock::now();
        std::vector<char> rejected(static_cast<std::size_t>(cfg.mc_reps), 0);
        std::vector<std::int64_t> redraws(static_cast<std::size_t>(cfg.mc_reps), 0);
        parallel_for(cfg.mc_reps, cfg.threads, [&](std::int64_t rep) {
          const RandomStream rep_root = cell_root.child(static_cast<std::uint64_t>(rep));
          CountSample sample;
          std::uint64_t attempt = 0;
          for (;; ++attempt) {
            if (attempt > 1000)
              throw convergence_error("study replicate kept degenerating");
            RandomStream stream = rep_root.child(2 * attempt);
            sample = sample_from(gen, n, stream);
            if (!detail::degenerate_for_test(cfg, sample)) break;
            ++redraws[static_cast<std::size_t>(rep)];
          }
          RandomStream seeder = rep_root.child(2 * attempt + 1);
          BootstrapConfig boot;
          boot.B = cfg.B;
          boot.alpha = cfg.alpha;
          boot.tol = cfg.tol;
          boot.threads = 1;  // replicates are already parallel
          boot.seed = seeder.next_u64();
          TestResult result;
          switch (cfg.test) {
            case StudyTest::bootstrap_zero:
              result = bootstrap_zero_test(sample, cfg.p0, cfg.d, boot);
              break;
            case StudyTest::asymptotic:
              result = asymptotic_zip_test(sample, cfg.alpha);
              break;
            case StudyTest::score:
              result = score_test(sample, cfg.alpha);
              break;
            case StudyTest::overdispersion:
              result = bootstrap_overdispersion_test(sample, cfg.null_family, cfg.d, boot);
              break;
          }
          rejected[static_cast<std::size_t>(rep)] = result.reject ? 1 : 0;
        });
        const auto stop = std::chrono::steady_clock::now();

        StudyRow row;
        row.n = n;
        row.generator = format_spec(gen);
        row.method = study_test_name(cfg.test);
        std::int64_t reject_count = 0;
        for (char c : rejected) reject_count += c;
        for (auto c : redraws) row.degenerate_redraws += c;
        const double rate =
            static_cast<double>(reject_count) / static_cast<double>(cfg.mc_reps);
        row.rejection_rate = rate;
        row.mc_standard_error =
            std::sqrt(rate * (1.0 - rate) / static_cast<double>(cfg.mc_reps));
        row.wall_seconds =
            std::chrono::duration<double>(stop - start).count();
        row.flagged = static_cast<double>(row.degenerate_redraws) >
                      0.01 * static_cast<double>(cfg.mc_reps);
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Power and inverse-CV of the overdispersion statistic under a known
// alternative, per k.  Each Monte Carlo sample shares its B bootstrap
// resamples across the whole k grid.

struct PowerCvRow {
  int k = 0;
  double power = 0.0;
  double inv_cv = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

inline std::vector<PowerCvRow> power_vs_invcv(
    const DistributionSpec& generator, std::int64_t n, NullFamily nf, Side side,
    const std::vector<int>& k_grid, std::int64_t mc_reps, std::int64_t B,
    double alpha, std::uint64_t seed, SeriesTolerance tol = {}, int threads = 0) {
  validate(generator);
  if (k_grid.empty()) throw domain_error("power_vs_invcv needs a nonempty k grid");
  for (int k : k_grid)
    if (k < 2) throw domain_error("power_vs_invcv requires every k >= 2");
  if (mc_reps < 2 || B < 99) throw domain_error("power_vs_invcv needs mc_reps >= 2, B >= 99");

  const auto n_k = k_grid.size();
  std::vector<double> lambda(static_cast<std::size_t>(mc_reps) * n_k);
  std::vector<char> reject(static_cast<std::size_t>(mc_reps) * n_k, 0);
  const RandomStream root =
      RandomStream(seed ^ detail::fnv1a64("power_vs_invcv;gen=" + format_spec(generator) +
                                          ";n=" + std::to_string(n)));
  parallel_for(mc_reps, threads, [&](std::int64_t rep) {
    const RandomStream rep_root = root.child(static_cast<std::uint64_t>(rep));
    CountSample sample;
    FitResult fit;
    std::uint64_t attempt = 0;
    for (;; ++attempt) {
      if (attempt > 1000) throw convergence_error("replicate kept degenerating");
      RandomStream stream = rep_root.child(2 * attempt);
      sample = sample_from(generator, n, stream);
      try {
        fit = detail::fit_null_family(nf, sample);
        break;
      } catch (const degenerate_sample_error&) {
      }
    }
    for (std::size_t j = 0; j < n_k; ++j)
      lambda[static_cast<std::size_t>(rep) * n_k + j] =
          detail::lambda_value(fit.spec, sample, DiscrepancySpec{side, k_grid[j]}, tol);

    // Shared bootstrap resamples across k.
    const RandomStream boot_root = rep_root.child(2 * attempt + 1);
    std::vector<double> repl(static_cast<std::size_t>(B) * n_k);
    for (std::int64_t b = 0; b < B; ++b) {
      for (std::uint64_t boot_attempt = 0;; ++boot_attempt) {
        if (boot_attempt > 1000)
          throw convergence_error("bootstrap replicate kept degenerating");
        RandomStream stream =
            boot_root.child(static_cast<std::uint64_t>(b)).child(boot_attempt);
        const CountSample resample = sample_from(fit.spec, n, stream);
        try {
          const auto refit = detail::refit_null_for_bootstrap(nf, fit.spec, resample);
          for (std::size_t j = 0; j < n_k; ++j)
            repl[static_cast<std::size_t>(b) * n_k + j] = detail::lambda_value(
                refit, resample, DiscrepancySpec{side, k_grid[j]}, tol);
        } catch (const degenerate_sample_error&) {
          continue;
        }
        break;
      }
    }
    std::vector<double> column(static_cast<std::size_t>(B));
    for (std::size_t j = 0; j < n_k; ++j) {
      for (std::int64_t b = 0; b < B; ++b)
        column[static_cast<std::size_t>(b)] = repl[static_cast<std::size_t>(b) * n_k + j];
      const double crit = detail::bootstrap_critical_value(column, alpha);
      reject[static_cast<std::size_t>(rep) * n_k + j] =
          lambda[static_cast<std::size_t>(rep) * n_k + j] > crit ? 1 : 0;
    }
  });

  std::vector<PowerCvRow> rows(n_k);
  for (std::size_t j = 0; j < n_k; ++j) {
    PowerCvRow& row = rows[j];
    row.k = k_grid[j];
    std::int64_t count = 0;
    double m = 0.0;
    for (std::int64_t rep = 0; rep < mc_reps; ++rep) {
      count += reject[static_cast<std::size_t>(rep) * n_k + j];
      m += lambda[static_cast<std::size_t>(rep) * n_k + j];
    }
    m /= static_cast<double>(mc_reps);
    double ss = 0.0;
    for (std::int64_t rep = 0; rep < mc_reps; ++rep) {
      const double ddev = lambda[static_cast<std::size_t>(rep) * n_k + j] - m;
      ss += ddev * ddev;
    }
    const double sd = std::sqrt(ss / static_cast<double>(mc_reps - 1));
    row.power = static_cast<double>(count) / static_cast<double>(mc_reps);
    row.mean = m;
    row.sd = sd;
    row.inv_cv = sd < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : m / sd;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Key-value study configuration, one `key = value` per line, grids as
// comma lists, '#' comments allowed.

inline StudyConfig parse_study_config(std::istream& in) {
  StudyConfig cfg;
  cfg.theta_list.clear();
  cfg.n_list.clear();
  std::string line;
  int line_no = 0;
  bool saw_family = false;
  const auto to_double = [](const std::string& text, int where) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw parse_error("bad number '" + text + "'", where);
    }
  };
  const auto to_int = [&](const std::string& text, int where) {
    const double v = to_double(text, where);
    if (v != std::floor(v)) throw parse_error("expected an integer, got '" + text + "'", where);
    return static_cast<std::int64_t>(v);
  };
  const auto split_doubles = [&](const std::string& text, int where) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item, where));
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    line.erase(std::remove_if(line.begin(), line.end(), is_space), line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw parse_error("expected key = value", line_no);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "family") {
      if (value == "poisson") cfg.generator_family = Family::poisson;
      else if (value == "zip") cfg.generator_family = Family::zip;
      else if (value == "zib") cfg.generator_family = Family::zib;
      else if (value == "nb") cfg.generator_family = Family::nb;
      else if (value == "zinb1") cfg.generator_family = Family::zinb1;
      else if (value == "zinb2") cfg.generator_family = Family::zinb2;
      else throw parse_error("unknown family '" + value + "'", line_no);
      saw_family = true;
    } else if (key == "theta") cfg.theta_list = split_doubles(value, line_no);
    else if (key == "p") cfg.p_list = split_doubles(value, line_no);
    else if (key == "t") cfg.t_list = split_doubles(value, line_no);
    else if (key == "m") cfg.m = to_int(value, line_no);
    else if (key == "n") {
      cfg.n_list.clear();
      for (double v : split_doubles(value, line_no))
        cfg.n_list.push_back(static_cast<std::int64_t>(v));
    } else if (key == "test") {
      if (value == "bootstrap_zero") cfg.test = StudyTest::bootstrap_zero;
      else if (value == "asymptotic") cfg.test = StudyTest::asymptotic;
      else if (value == "score") cfg.test = StudyTest::score;
      else if (value == "overdispersion") cfg.test = StudyTest::overdispersion;
      else throw parse_error("unknown test '" + value + "'", line_no);
    } else if (key == "null") {
      if (value == "poisson") cfg.null_family = NullFamily::poisson;
      else if (value == "zip") cfg.null_family = NullFamily::zip;
      else if (value == "nb") cfg.null_family = NullFamily::nb;
      else throw parse_error("unknown null family '" + value + "'", line_no);
    } else if (key == "side") {
      if (value == "max") cfg.d.side = Side::max;
      else if (value == "min") cfg.d.side = Side::min;
      else throw parse_error("side must be max or min", line_no);
    } else if (key == "k") cfg.d.k = static_cast<int>(to_int(value, line_no));
    else if (key == "p0") cfg.p0 = to_double(value, line_no);
    else if (key == "mc_reps") cfg.mc_reps = to_int(value, line_no);
    else if (key == "B") cfg.B = to_int(value, line_no);
    else if (key == "alpha") cfg.alpha = to_double(value, line_no);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, line_no));
    else if (key == "eps") cfg.tol.eps = to_double(value, line_no);
    else throw parse_error("unknown key '" + key + "'", line_no);
  }
  if (!saw_family) throw parse_error("config is missing the generator family");
  return cfg;
}

}  // namespace zistats
