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

#include <string>

#include "eetsim/experiments.hpp"
#include "eetsim/lindblad.hpp"
#include "eetsim_cli/config.hpp"

namespace eetsim::cli {

/// Scientific notation with 9 significant digits.
std::string sci(double value);

/// Trajectory table: a '#' hash comment (csv) or header object (jsonl), then
/// one row per sample with columns time_ns,P1,P2,P3,P4,Pa,Pb,trace,purity.
std::string trajectory_text(const TrajectoryRecord& record, OutputFormat format,
                            const std::string& hash);

/// Metrics summary as JSON. A missing equilibration time is "not-reached".
std::string metrics_json(const TransferMetrics& metrics, const std::string& hash);

/// Resolved configuration, detunings and coupling table as JSON.
std::string metadata_json(const RunConfig& config, Engine engine, const SimulationConfig& sim);

/// Human-readable coupling table.
std::string couplings_text(const CircuitParams& params);

/// Writes through a temporary file and renames; throws IoError.
void write_file(const std::string& path, const std::string& text);

}  // namespace eetsim::cli
