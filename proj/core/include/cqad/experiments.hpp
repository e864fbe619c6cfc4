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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqad/gaussian.hpp"
#include "cqad/lindblad.hpp"
#include "cqad/model.hpp"

namespace cqad {

enum class Solver { kFockFull, kFockEffective, kGaussianEffective };
enum class Profile { kCiFast, kPaperFaithful };
// kResonant re-derives delta_d from the resonance condition whenever the
// other parameters change; kFixed keeps the configured value.
enum class DetuningMode { kFixed, kResonant };

std::string to_string(Solver solver);
std::string to_string(Profile profile);
std::string to_string(DetuningMode mode);
std::string to_string(QubitBranch branch);
std::string to_string(QubitFrame frame);
std::optional<Solver> parse_solver(std::string_view text);
std::optional<Profile> parse_profile(std::string_view text);
std::optional<DetuningMode> parse_detuning_mode(std::string_view text);
std::optional<QubitBranch> parse_branch(std::string_view text);
std::optional<QubitFrame> parse_frame(std::string_view text);

// Parameter path with an explicit unit, e.g. "g_kHz", "delta_d_rad_per_us",
// "T_mK". _GHz, _MHz and _kHz denote ordinary frequencies f = omega / 2pi;
// _rad_per_us is angular. "g" and "gamma" address both modes at once.
struct ParameterKey {
  std::string base;
  std::string unit;

  std::string name() const { return base + "_" + unit; }
  friend bool operator==(const ParameterKey&, const ParameterKey&) = default;
};

std::optional<ParameterKey> parse_parameter_key(std::string_view key);
double to_internal(const ParameterKey& key, double value);
double from_internal(const ParameterKey& key, double internal);
double get_parameter(const SystemParams& params, const ParameterKey& key);

struct Assignment {
  ParameterKey key;
  double value;  // in key.unit
};

struct ResolveOptions {
  DetuningMode detuning = DetuningMode::kResonant;
  QubitBranch branch = QubitBranch::kPlus;
  bool derive_omega_q = true;  // omega_q = (omega_a + omega_b) / 2
};

// Applies the assignments in order, then re-derives omega_q and delta_d as
// requested unless they were assigned explicitly.
SystemParams resolve_params(SystemParams base,
                            const std::vector<Assignment>& assignments,
                            const ResolveOptions& options);

struct Cutoffs {
  Index a = 8;
  Index b = 8;
  friend bool operator==(const Cutoffs&, const Cutoffs&) = default;
};

struct DeskScale {
  SystemParams params;
  Cutoffs cutoffs;
  // G of this profile over G of the published parameters; rates quoted for
  // the published device (kappa_q, gamma) are multiplied by it.
  double rate_scale = 1.0;
  double leakage_bound = 1e-3;
};

// ci_fast: published delta and decay rates, g = 0.1 delta,
// Omega_d = 0.3158 delta, T = 50 mK, kappa_q = 0, cutoffs 8.
// paper_faithful: paper_parameters() with cutoffs 12.
DeskScale desk_scale_params(Profile profile);

struct SweepAxis {
  ParameterKey key;
  std::vector<double> values;  // in key.unit
};

struct Scenario {
  std::string name = "custom";
  Profile profile = Profile::kCiFast;
  SystemParams params;
  Solver solver = Solver::kFockFull;
  // fock_full only: also run the Gaussian effective model into EN_eff.
  bool compare_effective = false;
  Cutoffs cutoffs;
  double t_end = 1.0;   // us
  double dt_out = 0.1;  // us
  std::vector<SweepAxis> axes;
  std::optional<double> interaction_off_time;  // us
  ResolveOptions resolve;
  QubitFrame frame = QubitFrame::kBare;
  StepperConfig stepper;
};

inline const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig3a", "fig3b",
                                              "fig4a", "fig4b", "fig5a", "fig5b"};
  return names;
}

// Throws InvalidArgument for unknown names.
Scenario builtin_scenario(std::string_view name, Profile profile);

// Throws InvalidArgument when the scenario is inconsistent.
void validate(const Scenario& scenario);

// Parameters of one sweep point, values ordered like scenario.axes.
SystemParams point_params(const Scenario& scenario,
                          const std::vector<double>& axis_values);

struct Monitors {
  double trace_drift = 0.0;
  double hermiticity_drift = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  double max_leakage = 0.0;
  std::size_t steps = 0;
  double step_size = 0.0;
  std::size_t clamped = 0;  // log-negativity clamp hits

  void merge(const Monitors& other);
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> en_full;  // NaN when not produced
  std::vector<double> en_eff;
  std::vector<double> trace_drift;
  std::vector<double> leakage;
  Monitors monitors;
};

// Runs one parameter point of the scenario. Propagates solver errors.
TimeSeries run_time_series(const Scenario& scenario, const SystemParams& params);

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns, bool error_tags = false);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::string>& error_tags() const { return tags_; }
  bool has_error_tags() const { return error_tags_; }

  void add_row(std::vector<double> values, std::string error_tag = {});
  std::vector<double> column(std::string_view name) const;
  bool has_column(std::string_view name) const;

  // Header row, 17 significant digits, literal NaN.
  std::string to_csv() const;

  std::map<std::string, std::string> metadata;
  Monitors monitors;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::string> tags_;
  bool error_tags_ = false;
};

std::string format_number(double value);

// Time series table t_us, EN_full, EN_eff, trace_drift, leakage.
ResultTable run_scenario(const Scenario& scenario);

struct PeakEstimate {
  double t_star = 0.0;
  double en_star = 0.0;
  double t_grid = 0.0;   // raw grid argmax (earliest on ties)
  double en_grid = 0.0;
  bool refined = false;  // 3-point parabola applied
};

PeakEstimate max_entanglement(const std::vector<double>& times,
                              const std::vector<double>& values);
// Uses EN_full when it holds any number, otherwise EN_eff.
PeakEstimate max_entanglement(const ResultTable& table);

// Grid table: one column per axis (key name), then EN_at_t, EN_max,
// t_star_us, EN_max_grid, t_star_grid_us, trace_drift, leakage, error_tag.
// Rows in lexicographic order of the axis values. threads <= 0 means
// hardware concurrency.
ResultTable run_sweep(const Scenario& scenario, int threads = 0);

}  // namespace cqad
