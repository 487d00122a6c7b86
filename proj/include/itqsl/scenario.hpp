#pragma once

// Scenario configs (JSON), run orchestration and file outputs. A scenario
// names one of the built-in models or a custom Hermitian matrix, a time grid
// and tolerances; a run produces a trajectory CSV and a report JSON with
// deterministic, byte-identical content for identical configs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "itqsl/algebra.hpp"
#include "itqsl/geometry.hpp"
#include "itqsl/ite.hpp"
#include "itqsl/models.hpp"
#include "itqsl/version.hpp"

namespace itqsl {

using Json = nlohmann::json;

struct Tolerances {
  double saturation = kSaturationTolerance;
  double residual = kResidualTolerance;
  double quadrature = 1e-8;
};

struct OutputPaths {
  std::string trajectory_csv = "trajectory.csv";
  std::string report_json = "report.json";
};

struct TwoLevelScenario {
  TwoLevelParams params;
};

struct GroverScenario {
  GroverParams params;
  bool embed;
};

struct CustomScenario {
  HermitianOperator hamiltonian;
  StateVector initial_state;
  double horizon;
};

struct ScenarioConfig {
  std::variant<TwoLevelScenario, GroverScenario, CustomScenario> scenario;
  int num_steps = 1000;
  Tolerances tolerances;
  OutputPaths outputs;

  explicit ScenarioConfig(std::variant<TwoLevelScenario, GroverScenario, CustomScenario> s)
      : scenario(std::move(s)) {}

  std::string kind_name() const {
    switch (scenario.index()) {
      case 0: return "two_level";
      case 1: return "grover";
      default: return "custom";
    }
  }

  double horizon() const {
    if (const auto* tl = std::get_if<TwoLevelScenario>(&scenario)) return tl->params.horizon;
    if (const auto* gr = std::get_if<GroverScenario>(&scenario)) return gr->params.horizon;
    return std::get<CustomScenario>(scenario).horizon;
  }
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& field, const std::string& reason) {
  fail(ErrorKind::schema, "config field '" + field + "': " + reason);
}

inline double require_number(const Json& obj, const std::string& field) {
  if (!obj.contains(field)) schema_error(field, "missing required field");
  const Json& v = obj.at(field);
  if (!v.is_number()) schema_error(field, "expected a number");
  return v.get<double>();
}

inline std::int64_t require_integer(const Json& obj, const std::string& field) {
  if (!obj.contains(field)) schema_error(field, "missing required field");
  const Json& v = obj.at(field);
  if (!v.is_number_integer()) schema_error(field, "expected an integer");
  return v.get<std::int64_t>();
}

inline Complex parse_complex(const Json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    schema_error(field, "complex entries must be [re, im] number pairs");
  }
  return Complex(v[0].get<double>(), v[1].get<double>());
}

inline void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      schema_error(item.key(), "unknown field for this scenario kind");
    }
  }
}

inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace detail

inline ScenarioConfig parse_config_json(const Json& root) {
  using detail::require_integer;
  using detail::require_number;
  using detail::schema_error;

  if (!root.is_object()) fail(ErrorKind::schema, "config root must be a JSON object");
  if (!root.contains("kind") || !root.at("kind").is_string()) {
    schema_error("kind", "missing or not a string");
  }
  const std::string kind = root.at("kind").get<std::string>();

  std::set<std::string> allowed = {"kind", "horizon", "num_steps", "tolerances", "outputs"};
  if (kind == "two_level") {
    allowed.insert({"theta0", "energy"});
  } else if (kind == "grover") {
    allowed.insert({"dimension", "e_w", "e_perp", "epsilon", "embed"});
  } else if (kind == "custom") {
    allowed.insert({"hamiltonian", "initial_state"});
  } else {
    schema_error("kind", "must be one of two_level, grover, custom");
  }
  detail::reject_unknown_keys(root, allowed);

  const double horizon = require_number(root, "horizon");

  auto scenario = [&]() -> std::variant<TwoLevelScenario, GroverScenario, CustomScenario> {
    if (kind == "two_level") {
      return TwoLevelScenario{TwoLevelParams(require_number(root, "theta0"),
                                             require_number(root, "energy"), horizon)};
    }
    if (kind == "grover") {
      const auto dim64 = require_integer(root, "dimension");
      if (dim64 < 2 || dim64 > (1 << 30)) schema_error("dimension", "must be an integer >= 2");
      GroverParams params(static_cast<int>(dim64), require_number(root, "e_w"),
                          require_number(root, "e_perp"), horizon,
                          require_number(root, "epsilon"));
      if (params.gap() <= 0.0) {
        fail(ErrorKind::non_positive_gap,
             "config field 'e_perp': must exceed e_w for convergence to the marked state "
             "(gap = " +
                 detail::format_double(params.gap()) + ")");
      }
      bool embed = grover_embeds_by_default(params.dimension);
      if (root.contains("embed")) {
        if (!root.at("embed").is_boolean()) schema_error("embed", "expected a boolean");
        embed = root.at("embed").get<bool>();
      }
      return GroverScenario{params, embed};
    }
    if (!root.contains("hamiltonian") || !root.at("hamiltonian").is_array()) {
      schema_error("hamiltonian", "missing or not a nested array");
    }
    const Json& rows = root.at("hamiltonian");
    const auto d = static_cast<Eigen::Index>(rows.size());
    if (d < 2) schema_error("hamiltonian", "needs dimension >= 2");
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
        schema_error("hamiltonian", "must be a square matrix of [re, im] pairs");
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        m(i, j) = detail::parse_complex(row[static_cast<std::size_t>(j)], "hamiltonian");
      }
    }
    if (!root.contains("initial_state") || !root.at("initial_state").is_array()) {
      schema_error("initial_state", "missing or not an array");
    }
    const Json& amps = root.at("initial_state");
    Vector psi0(static_cast<Eigen::Index>(amps.size()));
    for (Eigen::Index i = 0; i < psi0.size(); ++i) {
      psi0(i) = detail::parse_complex(amps[static_cast<std::size_t>(i)], "initial_state");
    }
    if (psi0.size() != d) {
      schema_error("initial_state", "length must match the matrix dimension");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      schema_error("horizon", "must be a positive finite number");
    }
    return CustomScenario{HermitianOperator::validated(m), StateVector(std::move(psi0)),
                          horizon};
  }();

  ScenarioConfig config(std::move(scenario));

  if (root.contains("num_steps")) {
    const auto n = require_integer(root, "num_steps");
    if (n < 2 || n % 2 != 0 || n > 100'000'000) {
      schema_error("num_steps", "must be an even integer >= 2");
    }
    config.num_steps = static_cast<int>(n);
  }

  if (root.contains("tolerances")) {
    const Json& tols = root.at("tolerances");
    if (!tols.is_object()) schema_error("tolerances", "expected an object");
    detail::reject_unknown_keys(tols, {"saturation", "residual", "quadrature"});
    const auto read_tol = [&](const char* name, double& slot) {
      if (!tols.contains(name)) return;
      if (!tols.at(name).is_number() || !(tols.at(name).get<double>() > 0.0)) {
        schema_error(std::string("tolerances.") + name, "must be a positive number");
      }
      slot = tols.at(name).get<double>();
    };
    read_tol("saturation", config.tolerances.saturation);
    read_tol("residual", config.tolerances.residual);
    read_tol("quadrature", config.tolerances.quadrature);
  }

  if (root.contains("outputs")) {
    const Json& outs = root.at("outputs");
    if (!outs.is_object()) schema_error("outputs", "expected an object");
    detail::reject_unknown_keys(outs, {"trajectory_csv", "report_json"});
    const auto read_path = [&](const char* name, std::string& slot) {
      if (!outs.contains(name)) return;
      if (!outs.at(name).is_string() || outs.at(name).get<std::string>().empty()) {
        schema_error(std::string("outputs.") + name, "must be a nonempty string");
      }
      slot = outs.at(name).get<std::string>();
    };
    read_path("trajectory_csv", config.outputs.trajectory_csv);
    read_path("report_json", config.outputs.report_json);
  }

  return config;
}

inline ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, source + ": " + e.what());
  }
  return parse_config_json(root);
}

inline ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::io, "cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

// Canonical echo of the effective config (defaults applied).
inline Json config_echo(const ScenarioConfig& config) {
  Json echo;
  echo["kind"] = config.kind_name();
  echo["horizon"] = config.horizon();
  echo["num_steps"] = config.num_steps;
  echo["tolerances"] = {{"saturation", config.tolerances.saturation},
                        {"residual", config.tolerances.residual},
                        {"quadrature", config.tolerances.quadrature}};
  echo["outputs"] = {{"trajectory_csv", config.outputs.trajectory_csv},
                     {"report_json", config.outputs.report_json}};
  if (const auto* tl = std::get_if<TwoLevelScenario>(&config.scenario)) {
    echo["theta0"] = tl->params.theta0;
    echo["energy"] = tl->params.energy;
  } else if (const auto* gr = std::get_if<GroverScenario>(&config.scenario)) {
    echo["dimension"] = gr->params.dimension;
    echo["e_w"] = gr->params.e_w;
    echo["e_perp"] = gr->params.e_perp;
    echo["epsilon"] = gr->params.epsilon;
    echo["embed"] = gr->embed;
  } else {
    const auto& custom = std::get<CustomScenario>(config.scenario);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < custom.hamiltonian.dimension(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < custom.hamiltonian.dimension(); ++j) {
        const Complex& z = custom.hamiltonian.matrix()(i, j);
        row.push_back({z.real(), z.imag()});
      }
      rows.push_back(std::move(row));
    }
    echo["hamiltonian"] = std::move(rows);
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < custom.initial_state.dimension(); ++i) {
      const Complex& z = custom.initial_state.amplitudes()(i);
      amps.push_back({z.real(), z.imag()});
    }
    echo["initial_state"] = std::move(amps);
  }
  return echo;
}

struct ScenarioResult {
  Trajectory trajectory;
  std::vector<std::pair<double, double>> fidelity;  // to the scenario target
  QslReport qsl;
  SaturationCertificate certificate;
  Json report;
};

// Builds the system, propagates, evaluates the QSL diagnostics and assembles
// the report document. Pure: no files are touched.
inline ScenarioResult analyze_scenario(const ScenarioConfig& config) {
  HermitianOperator hamiltonian = [&] {
    if (const auto* tl = std::get_if<TwoLevelScenario>(&config.scenario)) {
      return two_level_system(tl->params).hamiltonian;
    }
    if (const auto* gr = std::get_if<GroverScenario>(&config.scenario)) {
      return grover_system(gr->params, gr->embed).hamiltonian;
    }
    return std::get<CustomScenario>(config.scenario).hamiltonian;
  }();
  StateVector psi0 = [&] {
    if (const auto* tl = std::get_if<TwoLevelScenario>(&config.scenario)) {
      return two_level_system(tl->params).initial_state;
    }
    if (const auto* gr = std::get_if<GroverScenario>(&config.scenario)) {
      return grover_system(gr->params, gr->embed).initial_state;
    }
    return std::get<CustomScenario>(config.scenario).initial_state;
  }();

  const TimeGrid grid(config.horizon(), config.num_steps);
  const ExactPropagator propagator(hamiltonian, psi0);
  Trajectory trajectory = propagate_exact(propagator, grid);

  // Fidelity target: ground state |1> for two_level, the marked state for
  // grover, and the lowest eigenvector for custom scenarios.
  const StateVector target = [&]() -> StateVector {
    if (std::holds_alternative<TwoLevelScenario>(config.scenario)) {
      return StateVector::basis(2, 1);
    }
    if (std::holds_alternative<GroverScenario>(config.scenario)) {
      return StateVector::basis(hamiltonian.dimension(), 0);
    }
    const SpectralDecomposition spectrum = eig(hamiltonian);
    return StateVector(Vector(spectrum.eigenvectors.col(0)));
  }();

  ScenarioResult result{std::move(trajectory), {}, QslReport{}, SaturationCertificate{},
                        Json::object()};
  result.fidelity = fidelity_to(result.trajectory, target);
  result.qsl = qsl_report(result.trajectory, config.tolerances.saturation);
  result.certificate = saturation_certificate(
      result.trajectory, HamiltonianSchedule::constant(hamiltonian));

  Json report;
  report["meta"] = {{"tool", kToolName}, {"version", kVersion}};
  report["scenario"] = config_echo(config);
  report["qsl"] = {{"theta_T", result.qsl.theta_T},
                   {"path_length", result.qsl.path_length},
                   {"avg_speed", result.qsl.avg_speed},
                   {"bound_time", result.qsl.bound_time},
                   {"actual_time", result.qsl.actual_time},
                   {"slack", result.qsl.slack},
                   {"saturated", result.qsl.saturated}};
  report["saturation"] = {
      {"checked_samples", result.certificate.checked_count},
      {"max_residual", result.certificate.max_residual},
      {"min_lambda", result.certificate.min_lambda},
      {"skipped_fraction", result.certificate.skipped_fraction()},
      {"residual_ok", result.certificate.max_residual <= config.tolerances.residual}};

  if (const auto* tl = std::get_if<TwoLevelScenario>(&config.scenario)) {
    const double closed_integral = two_level_dispersion_integral(tl->params);
    const double quad_error = std::abs(closed_integral - result.qsl.path_length);
    report["two_level"] = {
        {"closed_form_integral", closed_integral},
        {"closed_form_theta_T", two_level_theta(tl->params, tl->params.horizon)},
        {"quadrature_error", quad_error},
        {"quadrature_ok", quad_error <= config.tolerances.quadrature}};
  } else if (const auto* gr = std::get_if<GroverScenario>(&config.scenario)) {
    Json grover = {{"runtime_bound_exact", grover_runtime(gr->params)},
                   {"runtime_bound_largeN", grover_runtime_large_n(gr->params)}};
    const std::optional<double> crossing =
        tangent_crossing_time(propagator, target, gr->params.epsilon, gr->params.horizon);
    grover["crossing_reached"] = crossing.has_value();
    if (crossing) grover["measured_crossing_time"] = *crossing;
    report["grover"] = std::move(grover);
  }

  result.report = std::move(report);
  return result;
}

inline void write_trajectory_csv(const ScenarioResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write trajectory CSV '" + path + "'");
  out << "t,log_norm,theta,delta_h,fidelity_target\n";
  for (std::size_t k = 0; k < result.trajectory.samples.size(); ++k) {
    const auto& s = result.trajectory.samples[k];
    out << detail::format_double(s.t) << ',' << detail::format_double(s.log_norm) << ','
        << detail::format_double(s.theta) << ',' << detail::format_double(s.delta_h) << ','
        << detail::format_double(result.fidelity[k].second) << '\n';
  }
  if (!out.flush()) fail(ErrorKind::io, "failed writing trajectory CSV '" + path + "'");
}

inline void write_report_json(const ScenarioResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write report JSON '" + path + "'");
  out << result.report.dump(2) << '\n';
  if (!out.flush()) fail(ErrorKind::io, "failed writing report JSON '" + path + "'");
}

inline std::string resolve_under(const std::string& out_dir, const std::string& file) {
  const std::filesystem::path p(file);
  if (p.is_absolute() || out_dir.empty()) return file;
  return (std::filesystem::path(out_dir) / p).string();
}

struct RunPaths {
  std::string trajectory_csv;
  std::string report_json;
};

// Run a scenario and write both output files under out_dir.
inline std::pair<ScenarioResult, RunPaths> run_scenario(const ScenarioConfig& config,
                                                        const std::string& out_dir) {
  ScenarioResult result = analyze_scenario(config);
  RunPaths paths{resolve_under(out_dir, config.outputs.trajectory_csv),
                 resolve_under(out_dir, config.outputs.report_json)};
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create output directory '" + out_dir + "'");
  }
  write_trajectory_csv(result, paths.trajectory_csv);
  write_report_json(result, paths.report_json);
  return {std::move(result), std::move(paths)};
}

inline const std::set<std::string>& sweepable_parameters() {
  static const std::set<std::string> names = {"theta0", "energy", "dimension", "e_perp",
                                              "horizon"};
  return names;
}

// Returns a copy of `base` with one sweepable parameter replaced. Parameter
// validation reruns, so out-of-range values surface as schema errors.
inline ScenarioConfig with_parameter(const ScenarioConfig& base, const std::string& param,
                                     double value) {
  if (!sweepable_parameters().contains(param)) {
    detail::schema_error(param, "not a sweepable parameter");
  }
  ScenarioConfig next = base;
  if (const auto* tl = std::get_if<TwoLevelScenario>(&base.scenario)) {
    TwoLevelParams p = tl->params;
    if (param == "theta0") {
      next.scenario = TwoLevelScenario{TwoLevelParams(value, p.energy, p.horizon)};
    } else if (param == "energy") {
      next.scenario = TwoLevelScenario{TwoLevelParams(p.theta0, value, p.horizon)};
    } else if (param == "horizon") {
      next.scenario = TwoLevelScenario{TwoLevelParams(p.theta0, p.energy, value)};
    } else {
      detail::schema_error(param, "not sweepable for kind two_level");
    }
  } else if (const auto* gr = std::get_if<GroverScenario>(&base.scenario)) {
    GroverParams p = gr->params;
    if (param == "dimension") {
      if (value < 2.0 || value != std::floor(value)) {
        detail::schema_error(param, "dimension values must be integers >= 2");
      }
      const int dim = static_cast<int>(value);
      next.scenario =
          GroverScenario{GroverParams(dim, p.e_w, p.e_perp, p.horizon, p.epsilon),
                         grover_embeds_by_default(dim)};
    } else if (param == "e_perp") {
      GroverParams updated(p.dimension, p.e_w, value, p.horizon, p.epsilon);
      if (updated.gap() <= 0.0) {
        fail(ErrorKind::non_positive_gap, "swept e_perp must exceed e_w");
      }
      next.scenario = GroverScenario{updated, gr->embed};
    } else if (param == "horizon") {
      next.scenario =
          GroverScenario{GroverParams(p.dimension, p.e_w, p.e_perp, value, p.epsilon),
                         gr->embed};
    } else {
      detail::schema_error(param, "not sweepable for kind grover");
    }
  } else {
    const auto& custom = std::get<CustomScenario>(base.scenario);
    if (param == "horizon") {
      if (!(value > 0.0) || !std::isfinite(value)) {
        detail::schema_error(param, "horizon must be a positive finite number");
      }
      next.scenario = CustomScenario{custom.hamiltonian, custom.initial_state, value};
    } else {
      detail::schema_error(param, "not sweepable for kind custom");
    }
  }
  return next;
}

struct SweepOutcome {
  double value;
  bool ok;
  std::string error;  // empty when ok
  double theta_T = 0.0;
  double path_length = 0.0;
  double slack = 0.0;
  double bound_time = 0.0;
  std::optional<double> measured_crossing_time;
};

// One analysis per value; per-run failures are recorded and the sweep
// continues. No per-run files are written.
inline std::vector<SweepOutcome> run_sweep(const ScenarioConfig& base, const std::string& param,
                                           const std::vector<double>& values) {
  if (!sweepable_parameters().contains(param)) {
    detail::schema_error(param, "not a sweepable parameter");
  }
  std::vector<SweepOutcome> outcomes;
  outcomes.reserve(values.size());
  for (const double value : values) {
    SweepOutcome outcome;
    outcome.value = value;
    try {
      const ScenarioConfig config = with_parameter(base, param, value);
      const ScenarioResult result = analyze_scenario(config);
      outcome.ok = true;
      outcome.theta_T = result.qsl.theta_T;
      outcome.path_length = result.qsl.path_length;
      outcome.slack = result.qsl.slack;
      outcome.bound_time = result.qsl.bound_time;
      if (result.report.contains("grover") &&
          result.report["grover"].contains("measured_crossing_time")) {
        outcome.measured_crossing_time =
            result.report["grover"]["measured_crossing_time"].get<double>();
      }
    } catch (const Error& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

inline void write_sweep_csv(const std::vector<SweepOutcome>& outcomes, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write sweep CSV '" + path + "'");
  out << "value,theta_T,path_length,slack,bound_time,measured_crossing_time,error\n";
  for (const auto& o : outcomes) {
    out << detail::format_double(o.value) << ',';
    if (o.ok) {
      out << detail::format_double(o.theta_T) << ',' << detail::format_double(o.path_length)
          << ',' << detail::format_double(o.slack) << ',' << detail::format_double(o.bound_time)
          << ',';
      if (o.measured_crossing_time) out << detail::format_double(*o.measured_crossing_time);
      out << ',';
    } else {
      std::string quoted = o.error;
      for (std::size_t pos = 0; (pos = quoted.find('"', pos)) != std::string::npos; pos += 2) {
        quoted.replace(pos, 1, "\"\"");
      }
      out << ",,,,,\"" << quoted << '"';
    }
    out << '\n';
  }
  if (!out.flush()) fail(ErrorKind::io, "failed writing sweep CSV '" + path + "'");
}

}  // namespace itqsl
