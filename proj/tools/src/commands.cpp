// Copyright 2026 The cqad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cqad_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqad_cli/hash.hpp"
#include "cqad_cli/validation.hpp"

namespace cqad::cli {

namespace {

namespace fs = std::filesystem;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json monitors_json(const Monitors& m) {
  Json j;
  j["trace_drift"] = number_or_null(m.trace_drift);
  j["hermiticity_drift"] = number_or_null(m.hermiticity_drift);
  j["min_eigenvalue"] = number_or_null(m.min_eigenvalue);
  j["max_leakage"] = number_or_null(m.max_leakage);
  j["steps"] = m.steps;
  j["step_size_us"] = number_or_null(m.step_size);
  j["log_negativity_clamps"] = m.clamped;
  return j;
}

Json derived_json(const SystemParams& p) {
  Json j;
  j["delta_rad_per_us"] = half_mode_splitting(p);
  try {
    j["G_rad_per_us"] = effective_coupling(p);
    j["delta_d_star_plus_rad_per_us"] = resonant_detuning(p, QubitBranch::kPlus);
    j["delta_d_star_minus_rad_per_us"] = resonant_detuning(p, QubitBranch::kMinus);
  } catch (const SingularParameter&) {
    j["G_rad_per_us"] = nullptr;
    j["delta_d_star_plus_rad_per_us"] = nullptr;
    j["delta_d_star_minus_rad_per_us"] = nullptr;
  }
  j["n_a"] = thermal_occupation(p.omega_a, p.temperature);
  j["n_b"] = thermal_occupation(p.omega_b, p.temperature);
  j["n_q"] = thermal_occupation(p.omega_q, p.temperature);
  j["dispersive_warnings"] = dispersive_warnings(p);
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

bool prepare_dir(const std::string& dir, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: output directory '" << dir << "' is not writable\n";
    return false;
  }
  return true;
}

void dump_failure(const SolverFailure& e, std::ostream& err) {
  const auto& r = e.report();
  err << "solver failure (" << e.tag() << "): " << e.what() << "\n"
      << "  samples: " << r.samples.size() << "\n"
      << "  steps: " << r.steps << "\n"
      << "  step_size_us: " << format_number(r.step_size) << "\n"
      << "  trace_drift: " << format_number(r.trace_drift) << "\n"
      << "  hermiticity_drift: " << format_number(r.hermiticity_drift) << "\n"
      << "  max_leakage: " << format_number(r.max_leakage) << "\n"
      << "  min_eigenvalue: " << format_number(r.min_eigenvalue) << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int write_outputs(const std::string& command, const RunConfig& config,
                  const ResultTable& table, const std::string& suffix,
                  double wall, int threads, std::ostream& out, std::ostream& err) {
  const fs::path dir(config.output_dir);
  const std::string stem = config.scenario.name;
  try {
    const fs::path csv = dir / (stem + suffix);
    const fs::path manifest = dir / (stem + "_manifest.json");
    write_file(csv, table.to_csv());
    Json m = build_manifest(command, config, table, wall, threads);
    m["outputs"] = Json::array({csv.filename().string()});
    write_file(manifest, m.dump(2) + "\n");
    out << "wrote " << csv.string() << "\n" << "wrote " << manifest.string() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace

Json build_manifest(const std::string& command, const RunConfig& config,
                    const ResultTable& table, double wall_time_s, int threads) {
  const Scenario& s = config.scenario;
  const std::string canonical = config.resolved.dump(2);
  Json m;
  m["tool"] = "cqad";
  m["command"] = command;
  m["scenario"] = s.name;
  m["profile"] = to_string(s.profile);
  m["solver"] = to_string(s.solver);
  m["config_hash"] = git_blob_hash(canonical);

  Json params;
  params["omega_a_rad_per_us"] = s.params.omega_a;
  params["omega_b_rad_per_us"] = s.params.omega_b;
  params["omega_q_rad_per_us"] = s.params.omega_q;
  params["g_a_rad_per_us"] = s.params.g_a;
  params["g_b_rad_per_us"] = s.params.g_b;
  params["Omega_d_rad_per_us"] = s.params.drive_amplitude;
  params["delta_d_rad_per_us"] = s.params.drive_detuning;
  params["gamma_a_rad_per_us"] = s.params.gamma_a;
  params["gamma_b_rad_per_us"] = s.params.gamma_b;
  params["kappa_q_rad_per_us"] = s.params.kappa_q;
  params["T_K"] = s.params.temperature;
  m["resolved_params"] = params;
  m["derived"] = derived_json(s.params);
  m["monitors"] = monitors_json(table.monitors);
  Json meta = Json::object();
  for (const auto& [k, v] : table.metadata) meta[k] = v;
  m["metadata"] = meta;
  m["threads"] = threads;
  m["wall_time_s"] = wall_time_s;
  m["resolved_config"] = config.resolved;
  return m;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!prepare_dir(config.output_dir, err)) return kExitConfigError;
  const auto start = std::chrono::steady_clock::now();
  ResultTable table;
  try {
    table = run_scenario(config.scenario);
  } catch (const SolverFailure& e) {
    dump_failure(e, err);
    return kExitSolverFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs("simulate", config, table, "_timeseries.csv", wall, 1, out, err);
}

int cmd_sweep(const RunConfig& config, int threads, std::ostream& out,
              std::ostream& err) {
  if (config.scenario.axes.empty()) {
    err << "error: scenario '" << config.scenario.name << "' has no sweep axes\n";
    return kExitConfigError;
  }
  if (!prepare_dir(config.output_dir, err)) return kExitConfigError;
  const auto start = std::chrono::steady_clock::now();
  ResultTable table;
  try {
    table = run_sweep(config.scenario, threads);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs("sweep", config, table, "_grid.csv", wall, threads, out, err);
}

int cmd_validate(bool mutate_drift_sign, std::ostream& out) {
  const auto results = run_validation(mutate_drift_sign);
  out << format_report(results);
  for (const auto& r : results) {
    if (!r.pass) return kExitValidationFailed;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Driven qubit coupled to two acoustic modes: entanglement simulator"};
  app.name("cqad");
  app.require_subcommand(1);

  struct Options {
    std::string config_path;
    std::string manifest_path;
    Overrides overrides;
  };
  Options opts;
  auto add_run_options = [&opts](CLI::App* sub) {
    auto* config = sub->add_option("--config", opts.config_path, "JSON run config");
    sub->add_option("--from-manifest", opts.manifest_path,
                    "re-run the resolved config stored in a manifest")
        ->excludes(config);
    sub->add_option("--scenario", opts.overrides.scenario,
                    "fig2a..fig5b or custom");
    sub->add_option("--profile", opts.overrides.profile, "ci_fast or paper_faithful");
    sub->add_option("--solver", opts.overrides.solver,
                    "fock_full, fock_effective or gaussian_effective");
    sub->add_option("--name", opts.overrides.name, "output file stem");
    sub->add_option("--out", opts.overrides.output_dir, "output directory");
    sub->add_option("--cutoff", opts.overrides.cutoff, "Fock cutoff for both modes");
    sub->add_option("--threads", opts.overrides.threads,
                    "worker threads (overrides CQAD_THREADS)")
        ->check(CLI::PositiveNumber);
  };
  auto* simulate = app.add_subcommand("simulate", "run one scenario in time");
  add_run_options(simulate);
  auto* sweep = app.add_subcommand("sweep", "run a scenario over its sweep grid");
  add_run_options(sweep);
  auto* validate = app.add_subcommand("validate", "run the oracle suite");
  bool mutate = false;
  validate->add_flag("--mutate-drift-sign", mutate)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  if (validate->parsed()) return cmd_validate(mutate, std::cout);

  RunConfig config;
  int threads = 1;
  try {
    if (!opts.manifest_path.empty()) {
      config = load_manifest(read_file(opts.manifest_path), opts.overrides);
    } else {
      const std::string text =
          opts.config_path.empty() ? std::string() : read_file(opts.config_path);
      config = load_config(text, opts.overrides);
    }
    threads = resolve_threads(opts.overrides.threads, config.threads);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  for (const auto& w : dispersive_warnings(config.scenario.params)) {
    std::cerr << "warning: " << w << "\n";
  }
  if (simulate->parsed()) return cmd_simulate(config, std::cout, std::cerr);
  return cmd_sweep(config, threads, std::cout, std::cerr);
}

}  // namespace cqad::cli
