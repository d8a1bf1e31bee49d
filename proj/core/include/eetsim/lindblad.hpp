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

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eetsim/circuit.hpp"
#include "eetsim/hilbert.hpp"

namespace eetsim {

struct ThermalNumbers {
  double n_a = 0.0;
  double n_b = 0.0;
  std::array<double, kQubitCount> n_qubit{};
};

/// Resonators use the Bose-Einstein occupation; qubits follow
/// CircuitParams::qubit_occupation. T = 0 gives all zeros.
ThermalNumbers thermal_occupations(const CircuitParams& p);

struct CollapseTerm {
  std::string label;
  DenseOperator op;
  double rate = 0.0;  // 1/s, multiplies D[op]
};

struct LindbladSpec {
  std::vector<CollapseTerm> terms;
};

/// kappa_r (N_r + 1) D[r], kappa_r N_r D[r^dagger], Gamma_l (N_l + 1) D[sigma_l^-],
/// Gamma_l N_l D[sigma_l^+] and Gamma^phi_l D[sigma^z_l].
LindbladSpec build_lindblad_spec(const CircuitParams& p, const HilbertLayout& layout);

/// (2 A rho A^dagger - A^dagger A rho - rho A^dagger A) / 2.
DenseOperator dissipator(const DenseOperator& a, const DenseOperator& rho);

/// kLab and kInteraction run the full-space engine; kReduced runs the
/// single-excitation engine.
enum class Frame { kLab, kInteraction, kReduced };

/// "lab", "interaction", "effective-reduced".
std::string frame_name(Frame frame);
/// Also accepts "reduced".
Frame frame_from_name(std::string_view name);

/// H(t) = static part + sum_k (exp(i f_k t) M_k + h.c.).
class HamiltonianSource {
 public:
  HamiltonianSource(DenseOperator static_part, std::vector<PhaseTerm> terms,
                    double max_frequency);

  /// H1 in the lab frame; H_I(t) in the interaction frame.
  static HamiltonianSource for_frame(Frame frame, const CircuitParams& p,
                                     const HilbertLayout& layout);

  DenseOperator at(double t) const;
  const DenseOperator& static_part() const { return static_part_; }
  const std::vector<PhaseTerm>& terms() const { return terms_; }
  const HilbertLayout& layout() const { return static_part_.layout(); }
  /// Largest elementary angular frequency in the frame, used for step control.
  double max_frequency() const { return max_frequency_; }

 private:
  DenseOperator static_part_;
  std::vector<PhaseTerm> terms_;
  double max_frequency_;
};

/// -i[H(t), rho] + sum_k rate_k D[A_k] rho, evaluated densely. Reference
/// implementation; the integrators use MasterEquation.
DenseOperator rhs(double t, const DenseOperator& rho,
                  const HamiltonianSource& hamiltonian, const LindbladSpec& spec);

/// Right-hand side prepared for repeated evaluation. H(t) is kept as one
/// sparse pattern whose values are refreshed from the phase terms; diagonal
/// and monomial collapse operators are applied through index maps.
///
/// Optional `block_sizes` split the basis into contiguous diagonal blocks.
/// The Hamiltonian must not couple blocks and every monomial collapse
/// operator must send each block into a single block; rho is then assumed
/// block diagonal and only the diagonal blocks of the output are written.
class MasterEquation {
 public:
  MasterEquation(const HamiltonianSource& hamiltonian, const LindbladSpec& spec,
                 const std::vector<std::size_t>& block_sizes = {});
  ~MasterEquation();
  MasterEquation(MasterEquation&&) noexcept;
  MasterEquation& operator=(MasterEquation&&) noexcept;

  std::size_t dimension() const;
  /// Diagonal blocks as [begin, end) index ranges.
  const std::vector<std::pair<Eigen::Index, Eigen::Index>>& blocks() const;
  /// out = d rho / dt at time t. rho must be Hermitian.
  void derivative(double t, const Matrix& rho, Matrix& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Basis states of the single-excitation picture plus the global ground state.
enum class BasisState { kQ1, kQ2, kQ3, kQ4, kResonatorA, kResonatorB, kGround };

std::string basis_state_name(BasisState state);
/// Accepts "1".."4", "a", "b", "ground".
BasisState basis_state_from_name(std::string_view name);
std::size_t basis_index(const HilbertLayout& layout, BasisState state);
DenseOperator basis_density(const HilbertLayout& layout, BasisState state);

/// Largest value of dt * max_frequency accepted for full-space runs.
inline constexpr double kMaxPhasePerStep = 0.3;

struct SimulationConfig {
  Frame frame = Frame::kInteraction;
  int n_max = 2;
  double t_final = 0.0;  // s
  double dt = 0.0;       // s
  int record_stride = 1;
  BasisState initial_state = BasisState::kQ1;

  /// Defaults: dt = 1 ps (lab) or 2 ps (interaction), one sample per ns.
  /// Frame::kReduced gives the reduced defaults.
  static SimulationConfig full(Frame frame, double t_final);
  /// dt = 50 ps, one sample per ns.
  static SimulationConfig reduced(double t_final);

  std::size_t step_count() const;
};

void validate(const SimulationConfig& config);

struct Sample {
  double time = 0.0;  // s
  std::array<double, kQubitCount> qubit{};
  double resonator_a = 0.0;
  double resonator_b = 0.0;
  double ground = 0.0;  // global ground state (decay sink in the reduced model)
  double trace = 0.0;
  double purity = 0.0;
  bool physical = true;

  double qubit_total() const {
    return qubit[0] + qubit[1] + qubit[2] + qubit[3];
  }
};

struct TrajectoryRecord {
  std::vector<Sample> samples;
  double max_trace_error = 0.0;
  double max_hermiticity_defect = 0.0;
  /// Smallest eigenvalue of rho over evenly spaced spot checks (10 by default).
  double min_eigenvalue = 0.0;
  std::size_t steps = 0;

  const Sample& at_time(double t) const;
  const Sample& final() const { return samples.back(); }
};

/// Physicality limits enforced during integration.
inline constexpr double kTraceTolerance = 1e-6;
inline constexpr double kNegativePopulationTolerance = 1e-6;
/// Populations reported outside [-1e-8, 1 + 1e-8] mark a sample unphysical.
inline constexpr double kPopulationSlack = 1e-8;

/// Fixed-step RK4 integration of the master equation in the configured frame.
/// Frame::kReduced forwards to evolve_reduced.
TrajectoryRecord evolve(const DenseOperator& rho0, const SimulationConfig& config,
                        const CircuitParams& p);

/// Single-excitation block plus ground sink. The bridge is reduced to
/// g_ab (a^dagger b + a b^dagger); the 7x7 Liouvillian is time independent in
/// the frame rotating at omega_a, so each step is applied as exp(L dt).
/// rho0 lives on any circuit layout and must have no weight outside the block.
TrajectoryRecord evolve_reduced(const DenseOperator& rho0,
                                const SimulationConfig& config,
                                const CircuitParams& p);

/// evolve() from basis_density(config.initial_state).
TrajectoryRecord simulate(const SimulationConfig& config, const CircuitParams& p);

}  // namespace eetsim
