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

#include <numbers>

// Internal units: angular frequencies in rad/us, time in us, temperature in K.
// Quantities quoted as ordinary frequencies (f = omega / 2pi) are converted
// once at the boundary.
namespace cqad::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 2019 SI exact values.
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;   // J / K

constexpr double ghz(double f) { return kTwoPi * 1e3 * f; }
constexpr double mhz(double f) { return kTwoPi * f; }
constexpr double khz(double f) { return kTwoPi * 1e-3 * f; }
constexpr double millikelvin(double t) { return 1e-3 * t; }

constexpr double to_ghz(double omega) { return omega / (kTwoPi * 1e3); }
constexpr double to_khz(double omega) { return omega / (kTwoPi * 1e-3); }

}  // namespace cqad::units
