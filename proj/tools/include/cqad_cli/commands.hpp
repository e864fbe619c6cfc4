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

#include <iosfwd>
#include <string>

#include "cqad_cli/config.hpp"

namespace cqad::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitSolverFailure = 3,
};

Json build_manifest(const std::string& command, const RunConfig& config,
                    const ResultTable& table, double wall_time_s, int threads);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, int threads, std::ostream& out,
              std::ostream& err);
int cmd_validate(bool mutate_drift_sign, std::ostream& out);

int run_cli(int argc, char** argv);

}  // namespace cqad::cli
