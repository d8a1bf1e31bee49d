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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eetsim/circuit.hpp"
#include "eetsim/experiments.hpp"
#include "eetsim/lindblad.hpp"

namespace eetsim::cli {

enum class Engine { kFull, kReduced };
enum class OutputFormat { kCsv, kJsonLines };

std::string engine_name(Engine engine);
Engine engine_from_name(std::string_view name);
std::string format_name(OutputFormat format);
OutputFormat format_from_name(std::string_view name);

/// Resolved run configuration. Boundary units (GHz, MHz, us, ns, mK) are
/// converted to SI and rad/s while parsing.
struct RunConfig {
  std::optional<std::string> preset;
  Geometry geometry = Geometry::kCustom;
  CircuitParams params;

  std::optional<Engine> engine;  // unset: subcommand default
  Frame frame = Frame::kInteraction;
  int n_max = 2;
  double t_final = 250e-9;
  std::optional<double> dt;
  std::optional<int> record_stride;
  BasisState initial_state = BasisState::kQ1;

  std::optional<std::string> output;
  OutputFormat format = OutputFormat::kCsv;

  MetricsOptions metrics;  // measure_time unset: preset default

  SweepGrid grid;
  bool has_grid = false;
  std::size_t checkpoint_every = 16;
  std::optional<std::string> checkpoint;

  /// Keys exactly as they appeared, for the metadata echo.
  std::map<std::string, std::string> given;

  Engine resolved_engine(Engine fallback) const { return engine.value_or(fallback); }
  /// SimulationConfig for `engine`, filling dt and stride defaults.
  SimulationConfig simulation(Engine engine) const;
  /// Same, for a specific full-space frame.
  SimulationConfig simulation(Frame full_frame) const;
  MetricsOptions metrics_options() const;
};

/// Every key parse_config accepts.
const std::vector<std::string>& known_keys();

/// Closest known key by edit distance, if any is reasonably close.
std::optional<std::string> suggest_key(std::string_view key);

/// Parses `key = value` lines ('#' starts a comment; values may be quoted).
/// Throws ValidationError on unknown keys, missing units or violated
/// invariants, naming the offending field.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; throws IoError when it cannot be read.
RunConfig load_config(const std::string& path);

/// Canonical text of everything that determines simulation output.
std::string canonical_text(const RunConfig& config, Engine engine);
std::uint64_t config_hash(const RunConfig& config, Engine engine);
std::string hash_hex(std::uint64_t hash);

}  // namespace eetsim::cli
