// Copyright 2026 The eetsim Authors
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

// Internal storage is SI with angular frequencies (rad/s). Conversions to the
// ordinary-frequency units used at the boundary live here and nowhere else.
namespace eetsim::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018 exact or recommended values.
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kPlanck = 6.62607015e-34;         // J s
inline constexpr double kBoltzmann = 1.380649e-23;        // J / K
inline constexpr double kSpeedOfLight = 2.99792458e8;     // m / s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F / m
inline constexpr double kDebye = 3.33564095198152e-30;    // C m

constexpr double ghz(double nu) { return kTwoPi * nu * 1e9; }
constexpr double mhz(double nu) { return kTwoPi * nu * 1e6; }
constexpr double to_ghz(double omega) { return omega / kTwoPi * 1e-9; }
constexpr double to_mhz(double omega) { return omega / kTwoPi * 1e-6; }

constexpr double ns(double t) { return t * 1e-9; }
constexpr double ps(double t) { return t * 1e-12; }
constexpr double us(double t) { return t * 1e-6; }
constexpr double to_ns(double t) { return t * 1e9; }

constexpr double mk(double temperature) { return temperature * 1e-3; }

}  // namespace eetsim::units
