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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "eetsim/circuit.hpp"
#include "eetsim/hilbert.hpp"
#include "eetsim/lindblad.hpp"

namespace eetsim {

// --- Frenkel excitons ---------------------------------------------------------
// Exciton-side quantities stay in spectroscopic units: nm, Debye, cm^-1.

struct ExcitonSite {
  Eigen::Vector3d position_nm = Eigen::Vector3d::Zero();
  Eigen::Vector3d dipole_debye = Eigen::Vector3d::Zero();
  double energy_cm = 0.0;
};

struct ExcitonGeometry {
  std::vector<ExcitonSite> sites;
};

/// 1 D^2 / (4 pi eps0 (1 nm)^3) expressed in cm^-1.
double dipole_coupling_constant();

/// C [mu_i . mu_j - 3 (mu_i . r)(mu_j . r)] / r^3 in cm^-1. Throws on
/// coincident positions.
double dipole_coupling(const ExcitonSite& i, const ExcitonSite& j);

/// Throws unless there are at least two sites and no coincident positions.
void validate(const ExcitonGeometry& geometry);

/// N x N single-excitation Hamiltonian (cm^-1) on a one-slot layout "site".
/// A single site is accepted and gives [eps_1].
DenseOperator frenkel_hamiltonian(const ExcitonGeometry& geometry);

// --- observables --------------------------------------------------------------

/// Projectors onto |1>, |2>, |3>, |4>, |a>, |b>.
std::vector<DenseOperator> projectors(const HilbertLayout& layout);
DenseOperator ground_projector(const HilbertLayout& layout);

struct MetricsOptions {
  double spread = 0.03;
  double window = 50e-9;  // s
  /// Time at which efficiency and trapping are read; the equilibration time
  /// (or the last sample when equilibration is not reached) when unset.
  std::optional<double> measure_time;
};

/// Moderate-clustered runs are read at 250 ns; the others at equilibration.
MetricsOptions default_metrics_options(Geometry geometry);

struct TransferMetrics {
  /// Earliest t with max_m P_m - min_m P_m < spread over [t, t + window];
  /// empty means "not reached".
  std::optional<double> equilibration_time;
  double measured_at = 0.0;
  double efficiency = 0.0;  // sum_m P_m
  double trapped = 0.0;     // P_a + P_b
  double peak_p4 = 0.0;
};

std::optional<double> equilibration_time(const TrajectoryRecord& record, double spread,
                                         double window);
TransferMetrics transfer_metrics(const TrajectoryRecord& record,
                                 const MetricsOptions& options = {});

struct PresetRun {
  CircuitParams params;
  TrajectoryRecord trajectory;
  TransferMetrics metrics;
};

/// Runs `preset` on top of `base` (the reference device by default) from |1>.
PresetRun run_preset(const GeometryPreset& preset, const SimulationConfig& config,
                     const CircuitParams& base = CircuitParams::reference_device());
PresetRun run_preset(const GeometryPreset& preset, const SimulationConfig& config,
                     const CircuitParams& base, const MetricsOptions& options);

struct LinearFit {
  double slope = 0.0;      // 1/s
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through the samples with times in [begin, end].
LinearFit linear_fit(const std::vector<double>& t, const std::vector<double>& y,
                     double begin, double end);

struct TrappedPopulation {
  std::vector<double> times;
  std::vector<double> p_a;
  std::vector<double> p_b;
  double p_a_at = 0.0;
  double p_b_at = 0.0;
  LinearFit fit_a;
  LinearFit fit_b;
};

/// Resonator populations, their values at `query_time` and linear fits over
/// [fit_begin, fit_end].
TrappedPopulation trapped_population(const TrajectoryRecord& record,
                                     double query_time = 250e-9,
                                     double fit_begin = 100e-9,
                                     double fit_end = 250e-9);

// --- coupling sweep -----------------------------------------------------------

struct SweepAxis {
  double min = 0.0;   // rad/s
  double max = 0.0;
  double step = 0.0;

  std::vector<double> values() const;
};

enum class Objective { kEquilibrationTime, kEfficiencyAtTime };

std::string objective_name(Objective objective);
Objective objective_from_name(std::string_view name);

/// g1 = g4 and g2 = g3 are tied; the grid is g1 x g2 x g_ab in that order
/// with g_ab varying fastest.
struct SweepGrid {
  SweepAxis g1;
  SweepAxis g2;
  SweepAxis g_ab;
  Objective objective = Objective::kEquilibrationTime;
  double objective_time = 250e-9;  // s, for kEfficiencyAtTime

  std::size_t size() const;
  /// Single point at the given couplings.
  static SweepGrid point(double g1, double g2, double g_ab);
};

void validate(const SweepGrid& grid);

/// Largest grid the full-space engine may be asked to sweep.
inline constexpr std::size_t kFullEngineGridLimit = 1000;

enum class PointStatus { kOk, kNotReached, kFailed };
std::string point_status_name(PointStatus status);

struct SweepRecord {
  double g1 = 0.0;  // rad/s
  double g2 = 0.0;
  double g_ab = 0.0;
  double ratio = 0.0;  // J12 / J23
  /// ns for equilibration time, dimensionless for efficiency; rounded to 9
  /// significant digits so checkpointed and fresh values coincide.
  double objective_value = 0.0;
  PointStatus status = PointStatus::kOk;
  /// Absent for rows restored from a checkpoint.
  std::optional<TransferMetrics> metrics;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // grid order
  std::optional<std::size_t> best;
  std::size_t resumed = 0;  // rows taken from a checkpoint
};

struct SweepOptions {
  SimulationConfig config = SimulationConfig::reduced(400e-9);
  CircuitParams base = CircuitParams::reference_device();
  MetricsOptions metrics;
  int workers = 1;
  std::string checkpoint_path;  // empty disables checkpointing
  std::size_t checkpoint_every = 16;
  bool resume = false;
};

/// FNV-1a 64-bit hash of a canonical text.
std::uint64_t fnv1a(std::string_view text);
/// Hash of everything that determines the sweep table.
std::uint64_t sweep_hash(const SweepGrid& grid, const SweepOptions& options);

/// Evaluates one grid point.
SweepRecord evaluate_point(double g1, double g2, double g_ab, const SweepGrid& grid,
                           const SweepOptions& options);

/// Ties resolve to the smallest g1, then g2, then g_ab.
std::optional<std::size_t> select_best(const std::vector<SweepRecord>& records,
                                       Objective objective);

SweepResult sweep(const SweepGrid& grid, const SweepOptions& options);

/// Checkpoint text for the completed prefix `records`.
std::string checkpoint_text(const SweepGrid& grid, const SweepOptions& options,
                            const std::vector<SweepRecord>& records);
/// Parses and validates a checkpoint against the grid; throws CheckpointError.
std::vector<SweepRecord> read_checkpoint(const std::string& path, const SweepGrid& grid,
                                         const SweepOptions& options);

}  // namespace eetsim
