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

#include "cqad_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <thread>

namespace cqad::cli {

namespace {

const std::set<std::string> kTopKeys{
    "scenario",  "name",    "profile",          "output_dir",
    "solver",    "compare_effective", "cutoffs", "t_end_us",
    "dt_out_us", "interaction_off_time_us", "initial_qubit", "frame",
    "detuning",  "params",  "axes",             "stepper",
    "threads"};
const std::set<std::string> kStepperKeys{
    "method",        "steps_per_period", "max_step_us",      "tolerance",
    "trace_failure", "leakage_bound",    "check_positivity", "positivity_stride"};
const std::set<std::string> kCutoffKeys{"a", "b"};
const std::set<std::string> kAxisKeys{"key", "values"};

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const int line = key.empty() ? 0 : line_of_key(text_, key);
    if (line > 0) {
      throw ConfigError("config line " + std::to_string(line) + ": " + msg);
    }
    throw ConfigError("config: " + msg);
  }

  void check_keys(const Json& obj, const std::set<std::string>& allowed,
                  const std::string& where) const {
    if (!obj.is_object()) fail(where, "'" + where + "' must be an object");
    for (const auto& item : obj.items()) {
      if (!allowed.count(item.key())) {
        fail(item.key(), "unknown key '" + item.key() + "' in " + where);
      }
    }
  }

  double number(const Json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "'" + key + "' must be a number");
    const double out = v.get<double>();
    if (!std::isfinite(out)) fail(key, "'" + key + "' must be finite");
    return out;
  }

  long long integer(const Json& v, const std::string& key) const {
    if (!v.is_number_integer()) fail(key, "'" + key + "' must be an integer");
    return v.get<long long>();
  }

  std::string string(const Json& v, const std::string& key) const {
    if (!v.is_string()) fail(key, "'" + key + "' must be a string");
    return v.get<std::string>();
  }

  bool boolean(const Json& v, const std::string& key) const {
    if (!v.is_boolean()) fail(key, "'" + key + "' must be true or false");
    return v.get<bool>();
  }

 private:
  const std::string& text_;
};

template <typename T, typename Parse>
T parse_enum(const Reader& r, const std::string& key, const std::string& text,
             Parse parse) {
  const auto value = parse(text);
  if (!value) r.fail(key, "invalid value '" + text + "' for '" + key + "'");
  return *value;
}

Scenario custom_base(Profile profile) {
  const DeskScale desk = desk_scale_params(profile);
  Scenario s;
  s.name = "custom";
  s.profile = profile;
  s.params = desk.params;
  s.cutoffs = desk.cutoffs;
  s.stepper.leakage_bound = desk.leakage_bound;
  return s;
}

void apply_stepper(const Reader& r, const Json& j, StepperConfig& c) {
  r.check_keys(j, kStepperKeys, "stepper");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const Json& v = item.value();
    if (k == "method") {
      const std::string m = r.string(v, k);
      if (m == "rk4") c.method = StepperConfig::Method::kRk4;
      else if (m == "adaptive") c.method = StepperConfig::Method::kAdaptive;
      else r.fail(k, "stepper.method must be 'rk4' or 'adaptive'");
    } else if (k == "steps_per_period") {
      const auto n = r.integer(v, k);
      if (n < 1) r.fail(k, "steps_per_period must be >= 1");
      c.steps_per_period = static_cast<int>(n);
    } else if (k == "max_step_us") {
      c.max_step = r.number(v, k);
      if (c.max_step < 0.0) r.fail(k, "max_step_us must be >= 0");
    } else if (k == "tolerance") {
      c.tolerance = r.number(v, k);
      if (!(c.tolerance > 0.0)) r.fail(k, "tolerance must be > 0");
    } else if (k == "trace_failure") {
      c.trace_failure = r.number(v, k);
      if (!(c.trace_failure > 0.0)) r.fail(k, "trace_failure must be > 0");
    } else if (k == "leakage_bound") {
      // null disables the truncation check.
      c.leakage_bound = v.is_null() ? std::numeric_limits<double>::infinity()
                                    : r.number(v, k);
      if (!(c.leakage_bound > 0.0)) r.fail(k, "leakage_bound must be > 0");
    } else if (k == "check_positivity") {
      c.check_positivity = r.boolean(v, k);
    } else if (k == "positivity_stride") {
      const auto n = r.integer(v, k);
      if (n < 1) r.fail(k, "positivity_stride must be >= 1");
      c.positivity_stride = static_cast<int>(n);
    }
  }
}

Index parse_cutoff(const Reader& r, const Json& v, const std::string& key) {
  const auto n = r.integer(v, key);
  if (n < 2 || n > 64) r.fail(key, "cutoffs must lie in [2, 64]");
  return static_cast<Index>(n);
}

}  // namespace

int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

RunConfig load_config(const std::string& text, const Overrides& o) {
  Json j = Json::object();
  if (!text.empty()) {
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const int line =
          1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
      throw ConfigError("config line " + std::to_string(line) +
                        ": malformed JSON (" + e.what() + ")");
    }
  }
  const Reader r(text);
  r.check_keys(j, kTopKeys, "config");

  const std::string profile_text =
      o.profile ? *o.profile
                : (j.contains("profile") ? r.string(j["profile"], "profile") : "ci_fast");
  const Profile profile =
      parse_enum<Profile>(r, "profile", profile_text,
                          [](std::string_view t) { return parse_profile(t); });

  const std::string name =
      o.scenario ? *o.scenario
                 : (j.contains("scenario") ? r.string(j["scenario"], "scenario")
                                           : "custom");
  Scenario s;
  if (name == "custom") {
    s = custom_base(profile);
    if (!j.contains("t_end_us") || !j.contains("dt_out_us")) {
      throw ConfigError("config: a custom scenario needs t_end_us and dt_out_us");
    }
  } else {
    try {
      s = builtin_scenario(name, profile);
    } catch (const InvalidArgument&) {
      r.fail("scenario", "unknown scenario '" + name + "'");
    }
  }

  RunConfig out;
  std::vector<Assignment> assignments;
  bool detuning_given = false;
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const Json& v = item.value();
    if (k == "name") {
      s.name = r.string(v, k);
      if (s.name.empty() || s.name.find('/') != std::string::npos) {
        r.fail(k, "name must be a non-empty file stem");
      }
    } else if (k == "output_dir") {
      out.output_dir = r.string(v, k);
    } else if (k == "solver") {
      s.solver = parse_enum<Solver>(r, k, r.string(v, k),
                                    [](std::string_view t) { return parse_solver(t); });
    } else if (k == "compare_effective") {
      s.compare_effective = r.boolean(v, k);
    } else if (k == "cutoffs") {
      r.check_keys(v, kCutoffKeys, "cutoffs");
      if (v.contains("a")) s.cutoffs.a = parse_cutoff(r, v["a"], "a");
      if (v.contains("b")) s.cutoffs.b = parse_cutoff(r, v["b"], "b");
    } else if (k == "t_end_us") {
      s.t_end = r.number(v, k);
    } else if (k == "dt_out_us") {
      s.dt_out = r.number(v, k);
    } else if (k == "interaction_off_time_us") {
      if (v.is_null()) s.interaction_off_time.reset();
      else s.interaction_off_time = r.number(v, k);
    } else if (k == "initial_qubit") {
      s.resolve.branch = parse_enum<QubitBranch>(
          r, k, r.string(v, k), [](std::string_view t) { return parse_branch(t); });
    } else if (k == "frame") {
      s.frame = parse_enum<QubitFrame>(r, k, r.string(v, k),
                                       [](std::string_view t) { return parse_frame(t); });
    } else if (k == "detuning") {
      s.resolve.detuning = parse_enum<DetuningMode>(
          r, k, r.string(v, k),
          [](std::string_view t) { return parse_detuning_mode(t); });
      detuning_given = true;
    } else if (k == "params") {
      if (!v.is_object()) r.fail(k, "'params' must be an object");
      for (const auto& p : v.items()) {
        const auto key = parse_parameter_key(p.key());
        if (!key) {
          r.fail(p.key(), "unknown parameter '" + p.key() +
                              "' (expected <name>_<unit>, e.g. g_kHz, T_mK)");
        }
        assignments.push_back({*key, r.number(p.value(), p.key())});
      }
    } else if (k == "axes") {
      if (!v.is_array()) r.fail(k, "'axes' must be an array");
      s.axes.clear();
      for (const auto& a : v) {
        r.check_keys(a, kAxisKeys, "axes");
        if (!a.contains("key") || !a.contains("values")) {
          r.fail("axes", "each axis needs 'key' and 'values'");
        }
        const std::string axis_name = r.string(a["key"], "key");
        const auto key = parse_parameter_key(axis_name);
        if (!key) r.fail(axis_name, "unknown sweep axis '" + axis_name + "'");
        if (!a["values"].is_array()) r.fail("values", "'values' must be an array");
        SweepAxis axis{*key, {}};
        for (const auto& x : a["values"]) axis.values.push_back(r.number(x, "values"));
        s.axes.push_back(std::move(axis));
      }
    } else if (k == "stepper") {
      apply_stepper(r, v, s.stepper);
    } else if (k == "threads") {
      const auto n = r.integer(v, k);
      if (n < 1) r.fail(k, "threads must be >= 1");
      out.threads = static_cast<int>(n);
    }
  }

  const bool delta_d_given =
      std::any_of(assignments.begin(), assignments.end(),
                  [](const Assignment& a) { return a.key.base == "delta_d"; });
  if (delta_d_given) {
    if (detuning_given && s.resolve.detuning == DetuningMode::kResonant) {
      r.fail("detuning", "detuning 'resonant' conflicts with an explicit delta_d");
    }
    s.resolve.detuning = DetuningMode::kFixed;
  }
  if (std::any_of(assignments.begin(), assignments.end(),
                  [](const Assignment& a) { return a.key.base == "omega_q"; })) {
    s.resolve.derive_omega_q = false;
  }

  if (o.solver) {
    s.solver = parse_enum<Solver>(r, "", *o.solver,
                                  [](std::string_view t) { return parse_solver(t); });
  }
  if (o.name) s.name = *o.name;
  if (o.cutoff) {
    if (*o.cutoff < 2 || *o.cutoff > 64) throw ConfigError("--cutoff must lie in [2, 64]");
    s.cutoffs = {*o.cutoff, *o.cutoff};
  }
  if (o.output_dir) out.output_dir = *o.output_dir;
  if (o.threads) out.threads = o.threads;

  try {
    s.params = resolve_params(s.params, assignments, s.resolve);
    validate(s);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  out.scenario = std::move(s);
  out.resolved = resolved_config(out.scenario);
  return out;
}

RunConfig load_manifest(const std::string& text, const Overrides& overrides) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("manifest: malformed JSON (") + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("resolved_config")) {
    throw ConfigError("manifest: no resolved_config entry");
  }
  return load_config(j["resolved_config"].dump(2), overrides);
}

Json resolved_config(const Scenario& s) {
  Json j;
  j["scenario"] = "custom";
  j["name"] = s.name;
  j["profile"] = to_string(s.profile);
  j["solver"] = to_string(s.solver);
  j["compare_effective"] = s.compare_effective;
  j["cutoffs"] = {{"a", s.cutoffs.a}, {"b", s.cutoffs.b}};
  j["t_end_us"] = s.t_end;
  j["dt_out_us"] = s.dt_out;
  if (s.interaction_off_time) j["interaction_off_time_us"] = *s.interaction_off_time;
  j["initial_qubit"] = to_string(s.resolve.branch);
  j["frame"] = to_string(s.frame);
  j["detuning"] = to_string(s.resolve.detuning);

  const SystemParams& p = s.params;
  Json params;
  params["omega_a_rad_per_us"] = p.omega_a;
  params["omega_b_rad_per_us"] = p.omega_b;
  if (!s.resolve.derive_omega_q) params["omega_q_rad_per_us"] = p.omega_q;
  params["g_a_rad_per_us"] = p.g_a;
  params["g_b_rad_per_us"] = p.g_b;
  params["Omega_d_rad_per_us"] = p.drive_amplitude;
  if (s.resolve.detuning == DetuningMode::kFixed) {
    params["delta_d_rad_per_us"] = p.drive_detuning;
  }
  params["gamma_a_rad_per_us"] = p.gamma_a;
  params["gamma_b_rad_per_us"] = p.gamma_b;
  params["kappa_q_rad_per_us"] = p.kappa_q;
  params["T_K"] = p.temperature;
  j["params"] = params;

  Json axes = Json::array();
  for (const auto& axis : s.axes) {
    axes.push_back({{"key", axis.key.name()}, {"values", axis.values}});
  }
  j["axes"] = axes;

  const StepperConfig& c = s.stepper;
  Json stepper;
  stepper["method"] = c.method == StepperConfig::Method::kRk4 ? "rk4" : "adaptive";
  stepper["steps_per_period"] = c.steps_per_period;
  stepper["max_step_us"] = c.max_step;
  stepper["tolerance"] = c.tolerance;
  stepper["trace_failure"] = c.trace_failure;
  if (std::isfinite(c.leakage_bound)) stepper["leakage_bound"] = c.leakage_bound;
  else stepper["leakage_bound"] = nullptr;
  stepper["check_positivity"] = c.check_positivity;
  stepper["positivity_stride"] = c.positivity_stride;
  j["stepper"] = stepper;
  return j;
}

int resolve_threads(std::optional<int> flag, std::optional<int> config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("CQAD_THREADS"); env != nullptr && *env) {
    int n = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size() || n < 1) {
      throw ConfigError("CQAD_THREADS must be a positive integer, got '" +
                        std::string(text) + "'");
    }
    return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace cqad::cli
