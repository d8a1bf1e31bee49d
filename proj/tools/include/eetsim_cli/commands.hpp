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

#include <iosfwd>
#include <optional>
#include <string>

#include "eetsim_cli/config.hpp"

namespace eetsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 2;  // physics or validation
inline constexpr int kExitIo = 3;

/// Largest lab/interaction population deviation compare-frames accepts.
inline constexpr double kFrameTolerance = 5e-4;

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  std::optional<Engine> engine;
  std::optional<Frame> frame;
  int workers = 1;
  bool resume = false;
};

int cmd_simulate(const RunConfig& config, const Overrides& flags, std::ostream& out);
int cmd_couplings(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, const Overrides& flags, std::ostream& out);
int cmd_compare_frames(const RunConfig& config, const Overrides& flags, std::ostream& out);

struct FrameComparison {
  double max_deviation = 0.0;
  double worst_time = 0.0;  // s
  std::size_t compared = 0;  // samples present in both runs
};

/// Runs the lab and interaction frames and compares P1..P4, Pa, Pb and the
/// ground population at every common sample time.
FrameComparison compare_frames(const RunConfig& config);

/// Entry point shared by main() and the integration tests. Returns the exit
/// status; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eetsim::cli
