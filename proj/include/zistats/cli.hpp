#pragma once

// Command-line front end: dataset ingestion (raw and value,count
// frequency formats), subcommand dispatch, and machine-readable report
// envelopes.  Every command writes one JSON envelope to stdout (or a
// text/CSV rendering with --format); auxiliary tables go to --out.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical
// non-convergence.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zistats/distributions.hpp"
#include "zistats/errors.hpp"
#include "zistats/estimation.hpp"
#include "zistats/extremes.hpp"
#include "zistats/harness.hpp"
#include "zistats/selection.hpp"
#include "zistats/testing.hpp"
#include "zistats/version.hpp"

namespace zistats::cli {

using nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 20240811;

// ---------------------------------------------------------------------------
// Dataset files

enum class DataFormat { automatic, raw, freq };

inline CountSample read_dataset(std::istream& in, DataFormat format,
                                const std::string& name) {
  std::vector<std::pair<std::string, int>> lines;  // text, line number
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    line.erase(std::remove_if(line.begin(), line.end(), is_space), line.end());
    if (!line.empty()) lines.emplace_back(line, line_no);
  }
  if (lines.empty()) throw parse_error(name + ": no data lines");

  if (format == DataFormat::automatic)
    format = lines.front().first.find(',') != std::string::npos ? DataFormat::freq
                                                                : DataFormat::raw;

  const auto parse_count = [&](const std::string& text, int where) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return static_cast<std::int64_t>(v);
    } catch (const std::exception&) {
      throw parse_error(name + ": expected an integer, got '" + text + "'", where);
    }
  };

  if (format == DataFormat::raw) {
    std::vector<std::int64_t> counts;
    counts.reserve(lines.size());
    for (const auto& [text, where] : lines) {
      const std::int64_t v = parse_count(text, where);
      if (v < 0) throw parse_error(name + ": counts must be non-negative", where);
      counts.push_back(v);
    }
    return make_sample(std::move(counts));
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> freq;
  bool first = true;
  for (const auto& [text, where] : lines) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
      throw parse_error(name + ": expected value,count", where);
    const std::string left = text.substr(0, comma);
    const std::string right = text.substr(comma + 1);
    // Tolerate one header row such as "value,count".
    if (first && !left.empty() && std::isalpha(static_cast<unsigned char>(left[0]))) {
      first = false;
      continue;
    }
    first = false;
    const std::int64_t value = parse_count(left, where);
    const std::int64_t count = parse_count(right, where);
    if (value < 0) throw parse_error(name + ": values must be non-negative", where);
    if (count <= 0) throw parse_error(name + ": frequencies must be positive", where);
    freq.emplace_back(value, count);
  }
  if (freq.empty()) throw parse_error(name + ": no data rows");
  return make_sample_from_frequencies(freq);
}

inline CountSample read_dataset_file(const std::string& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  return read_dataset(in, format, path);
}

// ---------------------------------------------------------------------------
// JSON rendering

inline json spec_to_json(const DistributionSpec& s) {
  json j{{"family", family_name(s.family)}, {"theta", s.theta}, {"text", format_spec(s)}};
  if (s.family == Family::zip || s.family == Family::zib || s.family == Family::zinb1 ||
      s.family == Family::zinb2)
    j["p"] = s.p;
  if (s.family == Family::nb || s.family == Family::zinb1 || s.family == Family::zinb2)
    j["t"] = s.t;
  if (s.family == Family::zib) j["m"] = s.m;
  return j;
}

inline json test_result_to_json(const TestResult& r) {
  json j{{"method", method_name(r.method)},
         {"statistic", r.statistic},
         {"p_value", r.p_value},
         {"critical_value", r.critical_value},
         {"alpha", r.alpha},
         {"reject", r.reject},
         {"fitted_null", spec_to_json(r.fitted_null)}};
  if (r.discrepancy) {
    j["k"] = r.discrepancy->k;
    j["side"] = side_name(r.discrepancy->side);
  }
  if (r.B) j["B"] = *r.B;
  if (r.seed) j["seed"] = *r.seed;
  if (r.fitted_alt) j["fitted_alt"] = spec_to_json(*r.fitted_alt);
  if (r.method == TestMethod::bootstrap) j["degenerate_redraws"] = r.degenerate_redraws;
  if (r.method == TestMethod::score) j["signed_root"] = r.signed_root;
  return j;
}

inline json sample_digest(const CountSample& s) {
  const auto max_it = std::max_element(s.counts.begin(), s.counts.end());
  return json{{"n", s.n}, {"n0", s.n0}, {"mean", s.mean}, {"max", *max_it}};
}

struct Envelope {
  std::string command;
  std::optional<json> input;
  json result;
  std::optional<std::uint64_t> seed;

  json to_json() const {
    json j{{"tool", "zistats"},
           {"version", kVersion},
           {"command", command},
           {"result", result}};
    j["input"] = input ? *input : json(nullptr);
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
  }
};

// Flat "key,value" / indented-text renderings of the envelope for the
// --format csv / text modes.
inline void write_flat(const json& j, const std::string& prefix, const char* sep,
                       std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      write_flat(value, prefix.empty() ? key : prefix + "." + key, sep, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      write_flat(j[i], prefix + "[" + std::to_string(i) + "]", sep, out);
  } else {
    out << prefix << sep << j.dump() << "\n";
  }
}

inline void emit(const Envelope& env, const std::string& format, std::ostream& out) {
  const json j = env.to_json();
  if (format == "json") {
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "key,value\n";
    write_flat(j, "", ",", out);
  } else {
    write_flat(j, "", " = ", out);
  }
}

// ---------------------------------------------------------------------------
// Shared option plumbing

struct CommonOptions {
  std::string format = "json";
  double tol_eps = 1e-12;
  int threads = 0;
  std::string out_path;

  SeriesTolerance tolerance() const { return SeriesTolerance{tol_eps, 100000}; }
};

inline void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--tol", opts.tol_eps, "series truncation tolerance")
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = all cores; never changes results)")
      ->capture_default_str();
  cmd->add_option("--out", opts.out_path, "write the auxiliary CSV table here");
}

inline DataFormat parse_data_format(const std::string& text) {
  if (text == "auto") return DataFormat::automatic;
  if (text == "raw") return DataFormat::raw;
  return DataFormat::freq;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw parse_error("cannot open '" + path + "' for writing");
  return f;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_fit(const std::string& command_echo, const std::string& data_path,
                   DataFormat data_format, const std::string& family,
                   const CommonOptions& opts, std::ostream& out) {
  const CountSample sample = read_dataset_file(data_path, data_format);
  FitResult fit;
  if (family == "poisson") fit = fit_poisson(sample);
  else if (family == "zip") fit = fit_zip(sample);
  else fit = fit_nb(sample);

  json result{{"family", family},
              {"spec", spec_to_json(fit.spec)},
              {"loglik", fit.loglik},
              {"converged", fit.converged},
              {"iterations", fit.iterations},
              {"boundary", fit.boundary}};
  const std::int64_t max_count =
      *std::max_element(sample.counts.begin(), sample.counts.end());
  auto hist = histogram(sample);
  json table = json::array();
  for (std::int64_t j = 0; j <= max_count + 2; ++j) {
    const auto obs = hist.count(j) ? hist[j] : 0;
    table.push_back(json{{"value", j},
                         {"observed", obs},
                         {"expected", static_cast<double>(sample.n) * pmf(fit.spec, j)}});
  }
  result["expected_frequencies"] = table;

  Envelope env{command_echo, sample_digest(sample), result, std::nullopt};
  emit(env, opts.format, out);
  return 0;
}

inline int cmd_test(const std::string& command_echo, const std::string& data_path,
                    DataFormat data_format, const std::string& mode,
                    double p0, const std::string& null_family, int k,
                    const std::string& side, std::int64_t B, double alpha,
                    std::uint64_t seed, const CommonOptions& opts, std::ostream& out) {
  const CountSample sample = read_dataset_file(data_path, data_format);
  const DiscrepancySpec d{side == "min" ? Side::min : Side::max, k};
  BootstrapConfig cfg;
  cfg.B = B;
  cfg.alpha = alpha;
  cfg.seed = seed;
  cfg.tol = opts.tolerance();
  cfg.threads = opts.threads;

  TestResult r;
  if (mode == "zip-p") {
    r = bootstrap_zero_test(sample, p0, d, cfg);
  } else if (mode == "overdispersion") {
    NullFamily nf = NullFamily::poisson;
    if (null_family == "zip") nf = NullFamily::zip;
    else if (null_family == "nb") nf = NullFamily::nb;
    r = bootstrap_overdispersion_test(sample, nf, d, cfg);
  } else if (mode == "asymptotic") {
    r = asymptotic_zip_test(sample, alpha);
  } else {
    r = score_test(sample, alpha);
  }

  json result = test_result_to_json(r);
  result["mode"] = mode;
  if (mode == "zip-p") result["p0"] = p0;
  if (mode == "overdispersion") result["null"] = null_family;
  Envelope env{command_echo, sample_digest(sample), result,
               r.seed ? std::optional<std::uint64_t>(*r.seed) : std::nullopt};
  emit(env, opts.format, out);
  return 0;
}

inline int cmd_select_k(const std::string& command_echo, const std::string& data_path,
                        DataFormat data_format, const std::string& null_family,
                        const std::vector<int>& k_grid, std::int64_t B_cv,
                        std::uint64_t seed, const CommonOptions& opts,
                        std::ostream& out) {
  const CountSample sample = read_dataset_file(data_path, data_format);
  NullFamily nf = NullFamily::poisson;
  if (null_family == "zip") nf = NullFamily::zip;
  else if (null_family == "nb") nf = NullFamily::nb;

  const CvCurve curve_max =
      cv_curve(sample, nf, Side::max, k_grid, B_cv, seed, opts.tolerance(), opts.threads);
  const CvCurve curve_min =
      cv_curve(sample, nf, Side::min, k_grid, B_cv, seed, opts.tolerance(), opts.threads);
  const DiscrepancySpec chosen = select_k(curve_max, curve_min);

  const auto curve_json = [](const CvCurve& c) {
    json points = json::array();
    for (std::size_t j = 0; j < c.k_grid.size(); ++j)
      points.push_back(json{{"k", c.k_grid[j]},
                            {"mean", c.mean[j]},
                            {"sd", c.sd[j]},
                            {"inv_cv", c.inv_cv[j]}});
    return json{{"side", side_name(c.side)}, {"points", points}};
  };
  json result{{"curves", json::array({curve_json(curve_max), curve_json(curve_min)})},
              {"selected", json{{"side", side_name(chosen.side)}, {"k", chosen.k}}},
              {"B_cv", B_cv},
              {"null", null_family}};

  std::ostringstream csv;
  csv << "k,side,mean,sd,inv_cv\n";
  const auto csv_curve = [&](const CvCurve& c) {
    for (std::size_t j = 0; j < c.k_grid.size(); ++j) {
      csv << c.k_grid[j] << "," << side_name(c.side) << ",";
      csv.precision(15);
      csv << c.mean[j] << "," << c.sd[j] << "," << c.inv_cv[j] << "\n";
    }
  };
  csv_curve(curve_max);
  csv_curve(curve_min);
  if (!opts.out_path.empty()) open_out(opts.out_path) << csv.str();

  Envelope env{command_echo, sample_digest(sample), result, seed};
  emit(env, opts.format, out);
  return 0;
}

inline int cmd_extremes(const std::string& command_echo, const std::string& spec_text,
                        int k, const std::string& side, const CommonOptions& opts,
                        std::ostream& out) {
  const DistributionSpec spec = parse_spec(spec_text);
  const double value = side == "min" ? expected_min(spec, k, opts.tolerance())
                                     : expected_max(spec, k, opts.tolerance());
  json result{{"spec", spec_to_json(spec)},
              {"k", k},
              {"side", side},
              {"value", value}};
  if (spec.family == Family::poisson && k == 2)
    result["m2_closed_form"] = m2(spec.theta);
  Envelope env{command_echo, std::nullopt, result, std::nullopt};
  emit(env, opts.format, out);
  return 0;
}

inline int cmd_simulate(const std::string& command_echo, const std::string& config_path,
                        bool timing, std::uint64_t seed, bool seed_given,
                        const CommonOptions& opts, std::ostream& out) {
  std::ifstream in(config_path);
  if (!in) throw parse_error("cannot open '" + config_path + "'");
  StudyConfig cfg = parse_study_config(in);
  if (seed_given) cfg.seed = seed;
  cfg.threads = opts.threads;
  cfg.tol = opts.tolerance();

  const StudyReport report = run_study(cfg);

  json rows = json::array();
  std::ostringstream csv;
  csv << "n,generator,method,rejection_rate,mc_standard_error,degenerate_redraws,flagged";
  if (timing) csv << ",wall_seconds";
  csv << "\n";
  csv.precision(15);
  for (const auto& row : report.rows) {
    json r{{"n", row.n},
           {"generator", row.generator},
           {"method", row.method},
           {"rejection_rate", row.rejection_rate},
           {"mc_standard_error", row.mc_standard_error},
           {"degenerate_redraws", row.degenerate_redraws},
           {"flagged", row.flagged}};
    if (timing) r["wall_seconds"] = row.wall_seconds;
    rows.push_back(r);
    csv << row.n << ",\"" << row.generator << "\"," << row.method << ","
        << row.rejection_rate << "," << row.mc_standard_error << ","
        << row.degenerate_redraws << "," << (row.flagged ? 1 : 0);
    if (timing) csv << "," << row.wall_seconds;
    csv << "\n";
  }
  if (!opts.out_path.empty()) open_out(opts.out_path) << csv.str();

  json result{{"rows", rows}, {"seed", cfg.seed}, {"mc_reps", cfg.mc_reps}, {"B", cfg.B}};
  Envelope env{command_echo, std::nullopt, result, cfg.seed};
  emit(env, opts.format, out);
  return 0;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // The echo documents what produced the report.  Execution-neutral
  // flags are omitted so reports from runs that differ only in worker
  // count compare byte-identical.
  std::string command_echo;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--threads") {
      ++i;
      continue;
    }
    if (args[i].rfind("--threads=", 0) == 0) continue;
    if (!command_echo.empty()) command_echo += ' ';
    command_echo += args[i];
  }

  CLI::App app{"zero-inflation and overdispersion tests for count data", "zistats"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonOptions fit_opts, test_opts, select_opts, extremes_opts, simulate_opts;

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a count model and report expected frequencies");
  std::string fit_family, fit_data, fit_format = "auto";
  fit_cmd->add_option("--family", fit_family, "model family")
      ->required()
      ->check(CLI::IsMember({"poisson", "zip", "nb"}));
  fit_cmd->add_option("data", fit_data, "dataset file")->required();
  fit_cmd->add_option("--input-format", fit_format, "raw, freq or auto")
      ->check(CLI::IsMember({"auto", "raw", "freq"}))
      ->capture_default_str();
  add_common(fit_cmd, fit_opts);

  // test
  auto* test_cmd = app.add_subcommand("test", "run a hypothesis test");
  std::string test_mode, test_data, test_format = "auto", test_null = "poisson",
              test_side = "max";
  double test_p0 = 0.0, test_alpha = 0.05;
  int test_k = 2;
  std::int64_t test_B = 999;
  std::uint64_t test_seed = kDefaultSeed;
  test_cmd->add_option("--mode", test_mode, "zip-p, overdispersion, asymptotic or score")
      ->required()
      ->check(CLI::IsMember({"zip-p", "overdispersion", "asymptotic", "score"}));
  test_cmd->add_option("data", test_data, "dataset file")->required();
  test_cmd->add_option("--input-format", test_format, "raw, freq or auto")
      ->check(CLI::IsMember({"auto", "raw", "freq"}));
  auto* opt_p0 = test_cmd->add_option("--p0", test_p0, "null mixing weight (zip-p only)");
  auto* opt_null = test_cmd->add_option("--null", test_null,
                                        "null family (overdispersion only)")
                       ->check(CLI::IsMember({"poisson", "zip", "nb"}));
  auto* opt_k = test_cmd->add_option("--k", test_k, "subsample size of the discrepancy");
  auto* opt_side = test_cmd->add_option("--side", test_side, "max or min")
                       ->check(CLI::IsMember({"max", "min"}));
  auto* opt_B = test_cmd->add_option("--B", test_B, "bootstrap replicates");
  test_cmd->add_option("--alpha", test_alpha, "significance level")->capture_default_str();
  auto* opt_seed = test_cmd->add_option("--seed", test_seed, "bootstrap master seed");
  add_common(test_cmd, test_opts);

  // select-k
  auto* select_cmd = app.add_subcommand("select-k", "choose the discrepancy by bootstrap CV");
  std::string select_data, select_format = "auto", select_null = "poisson";
  std::vector<int> select_kgrid = default_k_grid();
  std::int64_t select_Bcv = 500;
  std::uint64_t select_seed = kDefaultSeed;
  select_cmd->add_option("data", select_data, "dataset file")->required();
  select_cmd->add_option("--null", select_null, "null family")
      ->check(CLI::IsMember({"poisson", "zip", "nb"}));
  select_cmd->add_option("--kgrid", select_kgrid, "comma list of k values")
      ->delimiter(',');
  select_cmd->add_option("--Bcv", select_Bcv, "bootstrap resamples")->capture_default_str();
  select_cmd->add_option("--seed", select_seed, "resampling seed")->capture_default_str();
  select_cmd->add_option("--input-format", select_format, "raw, freq or auto")
      ->check(CLI::IsMember({"auto", "raw", "freq"}));
  add_common(select_cmd, select_opts);

  // extremes
  auto* extremes_cmd = app.add_subcommand("extremes", "expected extreme of a model");
  std::string extremes_spec, extremes_side = "max";
  int extremes_k = 2;
  extremes_cmd->add_option("spec", extremes_spec, "distribution spec, e.g. zip:theta=3,p=0.1")
      ->required();
  extremes_cmd->add_option("--k", extremes_k, "subsample size")->capture_default_str();
  extremes_cmd->add_option("--side", extremes_side, "max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  add_common(extremes_cmd, extremes_opts);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "run a Monte Carlo study");
  std::string simulate_config;
  bool simulate_timing = false;
  std::uint64_t simulate_seed = kDefaultSeed;
  simulate_cmd->add_option("config", simulate_config, "study configuration file")->required();
  simulate_cmd->add_flag("--timing", simulate_timing,
                         "include wall-clock columns (breaks bit-identical reports)");
  auto* sim_seed_opt = simulate_cmd->add_option("--seed", simulate_seed,
                                                "override the master seed");
  add_common(simulate_cmd, simulate_opts);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  // Flag values outside their domain are usage errors, not data errors.
  for (const CommonOptions* o :
       {&fit_opts, &test_opts, &select_opts, &extremes_opts, &simulate_opts}) {
    if (!(o->tol_eps > 0.0) || !(o->tol_eps < 1e-3)) {
      err << "usage error: --tol must lie in (0, 1e-3)\n";
      return 2;
    }
    if (o->threads < 0) {
      err << "usage error: --threads must be >= 0\n";
      return 2;
    }
  }
  if (*test_cmd) {
    const bool bootstrap_mode = test_mode == "zip-p" || test_mode == "overdispersion";
    if (!(test_alpha > 0.0) || !(test_alpha < 1.0)) {
      err << "usage error: --alpha must lie in (0, 1)\n";
      return 2;
    }
    if (bootstrap_mode && (test_k < 2 || test_B < 99)) {
      err << "usage error: bootstrap modes need --k >= 2 and --B >= 99\n";
      return 2;
    }
    if (test_mode == "zip-p" && (!(test_p0 >= 0.0) || !(test_p0 < 1.0))) {
      err << "usage error: --p0 must lie in [0, 1)\n";
      return 2;
    }
  }
  if (*select_cmd) {
    if (select_Bcv < 2) {
      err << "usage error: --Bcv must be >= 2\n";
      return 2;
    }
    for (int k : select_kgrid)
      if (k < 2) {
        err << "usage error: every --kgrid entry must be >= 2\n";
        return 2;
      }
  }
  if (*extremes_cmd && extremes_k < 1) {
    err << "usage error: --k must be >= 1\n";
    return 2;
  }

  try {
    if (*fit_cmd)
      return cmd_fit(command_echo, fit_data, parse_data_format(fit_format), fit_family,
                     fit_opts, out);
    if (*test_cmd) {
      // Flags must be consistent with the chosen mode.
      const bool bootstrap_mode = test_mode == "zip-p" || test_mode == "overdispersion";
      if (opt_p0->count() > 0 && test_mode != "zip-p") {
        err << "usage error: --p0 applies to --mode zip-p only\n";
        return 2;
      }
      if (opt_null->count() > 0 && test_mode != "overdispersion") {
        err << "usage error: --null applies to --mode overdispersion only\n";
        return 2;
      }
      if (!bootstrap_mode &&
          (opt_k->count() > 0 || opt_side->count() > 0 || opt_B->count() > 0 ||
           opt_seed->count() > 0)) {
        err << "usage error: --k/--side/--B/--seed apply to bootstrap modes only\n";
        return 2;
      }
      return cmd_test(command_echo, test_data, parse_data_format(test_format), test_mode,
                      test_p0, test_null, test_k, test_side, test_B, test_alpha,
                      test_seed, test_opts, out);
    }
    if (*select_cmd)
      return cmd_select_k(command_echo, select_data, parse_data_format(select_format),
                          select_null, select_kgrid, select_Bcv, select_seed,
                          select_opts, out);
    if (*extremes_cmd)
      return cmd_extremes(command_echo, extremes_spec, extremes_k, extremes_side,
                          extremes_opts, out);
    if (*simulate_cmd)
      return cmd_simulate(command_echo, simulate_config, simulate_timing, simulate_seed,
                          sim_seed_opt->count() > 0, simulate_opts, out);
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const parse_error& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const convergence_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const overflow_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const degenerate_sample_error& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const error& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace zistats::cli
