// Command-line front end: run one scenario, sweep a parameter, or validate a
// config file. See README.md for the config schema and output formats.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itqsl/scenario.hpp"
#include "itqsl/version.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  if (csv.empty()) return values;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &consumed);
    } catch (const std::exception&) {
      itqsl::fail(itqsl::ErrorKind::schema, "--values entry '" + token + "' is not a number");
    }
    if (consumed != token.size()) {
      itqsl::fail(itqsl::ErrorKind::schema, "--values entry '" + token + "' is not a number");
    }
    values.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

void apply_steps_override(itqsl::ScenarioConfig& config, int steps) {
  if (steps < 2 || steps % 2 != 0) {
    itqsl::fail(itqsl::ErrorKind::schema, "--steps must be an even integer >= 2");
  }
  config.num_steps = steps;
}

int run_command(const std::string& config_path, int steps, const std::string& out_dir,
                bool quiet) {
  const auto started = std::chrono::steady_clock::now();
  itqsl::ScenarioConfig config = itqsl::parse_config(config_path);
  if (steps > 0) apply_steps_override(config, steps);
  const auto [result, paths] = itqsl::run_scenario(config, out_dir);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  if (!quiet) {
    const auto& q = result.qsl;
    std::printf("scenario: %s (T = %g, n = %d)\n", config.kind_name().c_str(),
                config.horizon(), config.num_steps);
    std::printf("theta_T      = %.17g\n", q.theta_T);
    std::printf("path_length  = %.17g\n", q.path_length);
    std::printf("slack        = %.3e   saturated = %s\n", q.slack,
                q.saturated ? "yes" : "no");
    std::printf("bound_time   = %.17g   actual_time = %.17g\n", q.bound_time, q.actual_time);
    std::printf("saturation   : max residual %.3e over %d checked samples\n",
                result.certificate.max_residual, result.certificate.checked_count);
    if (result.report.contains("grover")) {
      const auto& g = result.report["grover"];
      std::printf("runtime bound: exact %.9f, large-N %.9f\n",
                  g["runtime_bound_exact"].get<double>(),
                  g["runtime_bound_largeN"].get<double>());
      if (g["crossing_reached"].get<bool>()) {
        std::printf("crossing     : r(t) = epsilon at t = %.9f\n",
                    g["measured_crossing_time"].get<double>());
      } else {
        std::printf("crossing     : not reached within the horizon\n");
      }
    }
    if (result.report.contains("two_level")) {
      const auto& t = result.report["two_level"];
      std::printf("closed forms : integral %.17g, theta_T %.17g (quadrature error %.3e)\n",
                  t["closed_form_integral"].get<double>(),
                  t["closed_form_theta_T"].get<double>(), t["quadrature_error"].get<double>());
    }
    std::printf("wrote %s, %s  [%lld ms]\n", paths.trajectory_csv.c_str(),
                paths.report_json.c_str(), static_cast<long long>(elapsed));
  }
  return 0;
}

int sweep_command(const std::string& config_path, const std::string& param,
                  const std::string& values_csv, int steps, const std::string& out_dir,
                  bool quiet) {
  itqsl::ScenarioConfig config = itqsl::parse_config(config_path);
  if (steps > 0) apply_steps_override(config, steps);
  const std::vector<double> values = parse_values(values_csv);
  const auto outcomes = itqsl::run_sweep(config, param, values);
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) itqsl::fail(itqsl::ErrorKind::io, "cannot create output directory '" + out_dir + "'");
  }
  const std::string csv_path = itqsl::resolve_under(out_dir, "sweep.csv");
  itqsl::write_sweep_csv(outcomes, csv_path);
  if (!quiet) {
    int failures = 0;
    for (const auto& o : outcomes) {
      if (!o.ok) ++failures;
    }
    std::printf("sweep over %s: %zu runs (%d failed), wrote %s\n", param.c_str(),
                outcomes.size(), failures, csv_path.c_str());
  }
  return 0;
}

int check_command(const std::string& config_path, bool quiet) {
  const itqsl::ScenarioConfig config = itqsl::parse_config(config_path);
  if (!quiet) {
    std::printf("ok: %s scenario, T = %g, n = %d\n", config.kind_name().c_str(),
                config.horizon(), config.num_steps);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"imaginary-time evolution speed-limit toolkit"};
  app.set_version_flag("--version", std::string(itqsl::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string param;
  std::string values_csv;
  int steps = 0;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "simulate a scenario and write CSV/JSON outputs");
  run->add_option("config", config_path, "scenario config (JSON)")->required();
  run->add_option("--steps", steps, "override num_steps (even, >= 2)");
  run->add_option("--out-dir", out_dir, "directory for output files");
  run->add_flag("--quiet", quiet, "suppress the summary printout");

  CLI::App* sweep = app.add_subcommand("sweep", "repeat a scenario over parameter values");
  sweep->add_option("config", config_path, "scenario config (JSON)")->required();
  sweep->add_option("--param", param, "parameter to sweep")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();
  sweep->add_option("--steps", steps, "override num_steps (even, >= 2)");
  sweep->add_option("--out-dir", out_dir, "directory for sweep.csv");
  sweep->add_flag("--quiet", quiet, "suppress the summary printout");

  CLI::App* check = app.add_subcommand("check", "validate a config file and exit");
  check->add_option("config", config_path, "scenario config (JSON)")->required();
  check->add_flag("--quiet", quiet, "suppress the summary printout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(config_path, steps, out_dir, quiet);
    if (sweep->parsed()) return sweep_command(config_path, param, values_csv, steps, out_dir, quiet);
    return check_command(config_path, quiet);
  } catch (const itqsl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
