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

#include <optional>
#include <string>
#include <vector>

#include "cqad/experiments.hpp"

namespace cqad::cli {

struct OracleResult {
  std::string name;
  bool pass = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
  std::optional<Monitors> monitors;  // Fock runs only
};

// Lossless Lyapunov evolution from vacuum against E_N = 2 G t, published G.
OracleResult squeezed_vacuum_gaussian();

// Fock master equation with the squeezing Hamiltonian, no loss, vacuum
// start, against 2 G t while the leakage stays below 1e-4.
OracleResult squeezed_vacuum_fock();

// <n>(t) = n0 exp(-gamma t) for one damped mode at T = 0, over 5 lifetimes.
OracleResult damped_mode();

// Bare versus dressed qubit basis on the ci_fast profile with the given
// kappa_q; compares E_N(t) up to G t = r_end.
OracleResult frame_equivalence(double kappa_q, double r_end);

// Fock effective model (cutoff 14, T = 50 mK, published rates) against
// lyapunov_evolve, rel. 1% where the leakage is below 1e-3.
OracleResult lyapunov_vs_fock(bool mutate_drift_sign);

std::vector<OracleResult> run_validation(bool mutate_drift_sign);

// One line per oracle plus a summary; contains no timings.
std::string format_report(const std::vector<OracleResult>& results);

}  // namespace cqad::cli
