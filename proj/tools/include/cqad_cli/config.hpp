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
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cqad/experiments.hpp"

namespace cqad::cli {

using Json = nlohmann::ordered_json;

// Schema or resolution error; the message carries a line number when the
// offending key can be located in the source text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> scenario;
  std::optional<std::string> profile;
  std::optional<std::string> solver;
  std::optional<std::string> name;
  std::optional<std::string> output_dir;
  std::optional<Index> cutoff;
  std::optional<int> threads;
};

struct RunConfig {
  Scenario scenario;
  std::string output_dir = ".";
  std::optional<int> threads;
  // Fully explicit config that reproduces the run: every parameter in
  // rad/us or K, every stepper option, the scenario set to "custom".
  Json resolved;
};

// `text` may be empty (built-in scenario from overrides only).
RunConfig load_config(const std::string& text, const Overrides& overrides);

// Accepts a manifest written by the tool and loads its resolved_config.
RunConfig load_manifest(const std::string& text, const Overrides& overrides);

Json resolved_config(const Scenario& scenario);

// Line (1-based) of the first occurrence of "key" in text, 0 when absent.
int line_of_key(const std::string& text, const std::string& key);

// Flag beats config beats CQAD_THREADS beats hardware concurrency.
int resolve_threads(std::optional<int> flag, std::optional<int> config);

}  // namespace cqad::cli
