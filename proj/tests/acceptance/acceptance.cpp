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

// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.
// `--long` adds the paper_faithful full-vs-effective run (minutes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cqad/experiments.hpp"
#include "cqad/units.hpp"
#include "cqad_cli/validation.hpp"

namespace {

using namespace cqad;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
  bool skipped = false;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Monitors of every Fock run in the suite, for the conservation criterion.
std::vector<std::pair<std::string, Monitors>> g_runs;

void record(const std::string& label, const Monitors& m) { g_runs.emplace_back(label, m); }

Monitors from_report(const EvolutionReport& r) {
  Monitors m;
  m.trace_drift = r.trace_drift;
  m.hermiticity_drift = r.hermiticity_drift;
  m.min_eigenvalue = r.min_eigenvalue;
  m.max_leakage = r.max_leakage;
  m.steps = r.steps;
  return m;
}

Outcome squeezed_vacuum() {
  Outcome o{"squeezed-vacuum-oracle"};
  const auto start = std::chrono::steady_clock::now();
  GaussianModel model;
  model.coupling = effective_coupling(paper_parameters());
  const auto states = lyapunov_evolve(model, CovarianceState::vacuum(), 100.0, 1.0);
  const double en = log_negativity(states.back()).log_negativity;
  const double wall = seconds_since(start);
  const double expected = 2.0 * model.coupling * 100.0;
  o.pass = std::abs(en - 3.460) <= 0.003 && std::abs(en - expected) <= 1e-3 * expected &&
           wall < 1.0;
  o.detail = "E_N(100 us) = " + fmt("%.6f", en) + " (target 3.460 +- 0.003, 2Gt = " +
             fmt("%.6f", expected) + "), runtime " + fmt("%.3f", wall) + " s (< 1 s)";
  return o;
}

Outcome fock_vs_gaussian() {
  Outcome o{"fock-vs-gaussian"};
  const auto start = std::chrono::steady_clock::now();
  const SystemParams p = paper_parameters();
  const Index n = 14;
  const HilbertSpace space(n, n);
  const double h = 1.0 / std::sqrt(2.0);
  const auto rho0 = product_state(space, qubit_pure_state(h, h), fock_projector(n, 0),
                                  fock_projector(n, 0));
  StepperConfig config;
  config.output_interval = 4.0;
  config.leakage_bound = kInf;
  const auto report =
      evolve(MasterEquation::build(p, space, ModelKind::kEffective), rho0, 100.0, config);
  record("fock-vs-gaussian", from_report(report));
  const auto gauss =
      lyapunov_evolve(GaussianModel::from_params(p), CovarianceState::vacuum(), 100.0, 4.0);
  double worst = 0.0;
  double worst_t = 0.0;
  double t_covered = 0.0;
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const auto& s = report.samples[i];
    if (s.leakage >= 1e-3) continue;
    t_covered = s.time;
    const double f = log_negativity(extract_covariance(s.modes)).log_negativity;
    const double l = log_negativity(gauss[i]).log_negativity;
    // Relative error, floored at E_N = 0.05 so t = 0 is meaningful.
    const double dev = std::abs(f - l) / std::max(l, 0.05);
    if (dev > worst) {
      worst = dev;
      worst_t = s.time;
    }
  }
  const double wall = seconds_since(start);
  o.pass = worst <= 0.01 && wall < 60.0;
  o.detail = "max rel. E_N deviation " + fmt("%.4f", worst) + " at t = " +
             fmt("%.0f", worst_t) + " us (tolerance 0.01) over samples with leakage < 1e-3 " +
             "up to t = " + fmt("%.0f", t_covered) + " us, cutoff 14, runtime " +
             fmt("%.1f", wall) + " s";
  return o;
}

Outcome full_vs_effective_ci() {
  Outcome o{"full-vs-effective (ci_fast)"};
  const auto start = std::chrono::steady_clock::now();
  const Scenario s = builtin_scenario("fig2a", Profile::kCiFast);
  const auto table = run_scenario(s);
  record("full-vs-effective ci_fast", table.monitors);
  const auto t = table.column("t_us");
  const auto full = table.column("EN_full");
  const auto eff = table.column("EN_eff");
  double worst = 0.0;
  double worst_t = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(eff[i] > 0.2 || full[i] > 0.2)) continue;
    ++compared;
    const double dev = std::abs(full[i] - eff[i]) / eff[i];
    if (dev > worst) {
      worst = dev;
      worst_t = t[i];
    }
  }
  const double wall = seconds_since(start);
  const double g = effective_coupling(s.params);
  o.pass = compared > 0 && worst <= 0.15 && wall <= 90.0;
  o.detail = "max rel. |E_N full - E_N eff| / E_N eff = " + fmt("%.3f", worst) +
             " at Gt = " + fmt("%.2f", g * worst_t) + " (tolerance 0.15, " +
             std::to_string(compared) + " samples with E_N > 0.2 up to Gt = 1), " +
             "E_N full/eff at Gt = 1: " + fmt("%.3f", full.back()) + "/" +
             fmt("%.3f", eff.back()) + ", runtime " + fmt("%.1f", wall) + " s";
  return o;
}

Outcome full_vs_effective_faithful(bool run_long) {
  Outcome o{"full-vs-effective (paper_faithful, long)"};
  if (!run_long) {
    o.skipped = true;
    o.detail = "excluded from CI; run `cqad_acceptance --long`";
    return o;
  }
  const auto start = std::chrono::steady_clock::now();
  const Scenario s = builtin_scenario("fig2a", Profile::kPaperFaithful);
  const auto table = run_scenario(s);
  record("full-vs-effective paper_faithful", table.monitors);
  const auto t = table.column("t_us");
  const auto full = table.column("EN_full");
  const auto eff = table.column("EN_eff");
  double worst = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 25.0 || !(eff[i] > 0.1 || full[i] > 0.1)) continue;
    ++compared;
    worst = std::max(worst, std::abs(full[i] - eff[i]) / eff[i]);
  }
  o.pass = compared > 0 && worst <= 0.10;
  o.detail = "max rel. deviation " + fmt("%.4f", worst) + " (tolerance 0.10) over " +
             std::to_string(compared) + " samples with E_N > 0.1, t <= 25 us, cutoffs 12, " +
             "runtime " + fmt("%.0f", seconds_since(start)) + " s";
  return o;
}

Outcome resonance() {
  Outcome o{"resonance-optimum"};
  const Scenario s = builtin_scenario("fig2b", Profile::kCiFast);
  const auto table = run_sweep(s, 0);
  record("fig2b sweep", table.monitors);
  const auto dd = table.column("delta_d_rad_per_us");
  const auto en = table.column("EN_at_t");
  const double star = resonant_detuning(s.params, QubitBranch::kPlus);
  const std::size_t arg =
      static_cast<std::size_t>(std::max_element(en.begin(), en.end()) - en.begin());
  const double step = dd[1] - dd[0];
  // Width of the contiguous E_N > 0 band around the optimum.
  std::size_t lo = arg;
  std::size_t hi = arg;
  while (lo > 0 && en[lo - 1] > 0.0) --lo;
  while (hi + 1 < en.size() && en[hi + 1] > 0.0) ++hi;
  const double band = (dd[hi] - dd[lo]) / star;
  bool interior_max = arg > 0 && arg + 1 < en.size();
  const bool failed = table.metadata.at("failed_points") != "0";
  o.pass = !failed && interior_max && std::abs(dd[arg] - star) <= step * (1 + 1e-9) &&
           band >= 10.0;
  o.detail = "argmax delta_d = " + fmt("%.5f", dd[arg]) + " rad/us vs delta_d* = " +
             fmt("%.5f", star) + " (grid step " + fmt("%.5f", step) + "); E_N > 0 over " +
             fmt("%.0f", band) + " delta_d* (required >= 10, grid spans 20)";
  return o;
}

Outcome kappa_monotonicity() {
  Outcome o{"kappa_q-monotonicity"};
  const DeskScale desk = desk_scale_params(Profile::kCiFast);
  const double rs = desk.rate_scale;
  const std::vector<double> kappas{0.0, units::khz(10.0) * rs, units::khz(30.0) * rs};
  std::vector<double> peaks;
  bool decays = true;
  std::string tails;
  for (double kappa : kappas) {
    Scenario s = builtin_scenario("fig3a", Profile::kCiFast);
    s.params.kappa_q = kappa;
    const auto table = run_scenario(s);
    record("kappa_q " + fmt("%.2f", kappa), table.monitors);
    const auto en = table.column("EN_full");
    const double peak = max_entanglement(table).en_star;
    peaks.push_back(peak);
    if (kappa > 0.0) {
      decays &= en.back() < 0.1 * peak;
      tails += " final/peak(" + fmt("%.2f", kappa) + ") = " + fmt("%.3f", en.back() / peak);
    }
  }
  const bool strict = peaks[0] > peaks[1] && peaks[1] > peaks[2];
  o.pass = strict && decays;
  o.detail = "max E_N at kappa_q = {0, " + fmt("%.2f", kappas[1]) + ", " +
             fmt("%.2f", kappas[2]) + "} rad/us: " + fmt("%.3f", peaks[0]) + ", " +
             fmt("%.3f", peaks[1]) + ", " + fmt("%.3f", peaks[2]) + ";" + tails +
             " (decay criterion < 0.1), window Gt <= 1";
  return o;
}

Outcome temperature() {
  Outcome o{"temperature-robustness"};
  const auto start = std::chrono::steady_clock::now();
  Scenario s;
  s.name = "temperature";
  s.profile = Profile::kPaperFaithful;
  s.params = paper_parameters();
  s.solver = Solver::kGaussianEffective;
  s.t_end = 100.0;
  s.dt_out = 1.0;
  s.axes = {{*parse_parameter_key("T_mK"), {0, 50, 100, 150, 200, 250, 300, 350}}};
  const auto table = run_sweep(s, 0);
  const auto en = table.column("EN_max");
  bool monotone = true;
  for (std::size_t i = 1; i < en.size(); ++i) monotone &= en[i] <= en[i - 1];
  const double wall = seconds_since(start);
  const double n350 = thermal_occupation(s.params.omega_a, 0.35);
  o.pass = monotone && en.back() > 0.0 && wall < 10.0;
  o.detail = "max E_N(T = 0 .. 350 mK) = " + fmt("%.4f", en.front()) + " .. " +
             fmt("%.4f", en.back()) + (monotone ? ", non-increasing" : ", NOT monotone") +
             "; n_a(350 mK) = " + fmt("%.3f", n350) + ", runtime " + fmt("%.2f", wall) + " s";
  return o;
}

Outcome frame_equivalence() {
  Outcome o{"frame-equivalence"};
  const DeskScale desk = desk_scale_params(Profile::kCiFast);
  double worst = 0.0;
  for (double kappa : {0.0, units::khz(10.0) * desk.rate_scale}) {
    const auto r = cli::frame_equivalence(kappa, 1.0);
    if (r.monitors) record("frame " + fmt("%.2f", kappa), *r.monitors);
    worst = std::max(worst, r.deviation);
  }
  o.pass = worst <= 1e-8;
  o.detail = "max |E_N bare - E_N dressed| = " + fmt("%.3e", worst) +
             " (tolerance 1e-8), ci_fast, kappa_q in {0, 10 kHz scaled}, up to Gt = 1";
  return o;
}

Outcome conservation() {
  Outcome o{"conservation"};
  Monitors m;
  std::string worst;
  double lowest = kInf;
  for (const auto& [label, run] : g_runs) {
    m.merge(run);
    if (run.min_eigenvalue < lowest) {
      lowest = run.min_eigenvalue;
      worst = label;
    }
  }
  o.pass = m.trace_drift < 1e-8 && m.hermiticity_drift < 1e-10 && m.min_eigenvalue >= -1e-8;
  o.detail = "over all Fock runs above: trace drift " + fmt("%.2e", m.trace_drift) +
             " (< 1e-8), Hermiticity drift " + fmt("%.2e", m.hermiticity_drift) +
             " (< 1e-10), min eigenvalue " + fmt("%.2e", m.min_eigenvalue) + " (>= -1e-8, from " + worst + "), " +
             std::to_string(g_runs.size()) + " runs";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool run_long = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--long") == 0) {
      run_long = true;
    } else {
      std::fprintf(stderr, "usage: %s [--long]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"squeezed-vacuum-oracle", squeezed_vacuum},
      {"fock-vs-gaussian", fock_vs_gaussian},
      {"full-vs-effective (ci_fast)", full_vs_effective_ci},
      {"full-vs-effective (paper_faithful, long)",
       [run_long] { return full_vs_effective_faithful(run_long); }},
      {"resonance-optimum", resonance},
      {"kappa_q-monotonicity", kappa_monotonicity},
      {"temperature-robustness", temperature},
      {"frame-equivalence", frame_equivalence},
      // Last: aggregates the monitors of the runs above.
      {"conservation", conservation},
  };
  int passed = 0;
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.name = name;
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
    std::printf("%s %s: %s\n", tag, o.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (o.skipped) continue;
    (o.pass ? passed : failed) += 1;
  }
  std::printf("%d/%d criteria passed\n", passed, passed + failed);
  return failed == 0 ? 0 : 1;
}
