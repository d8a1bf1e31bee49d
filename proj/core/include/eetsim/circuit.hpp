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
#include <string>
#include <string_view>
#include <vector>

#include "eetsim/hilbert.hpp"

namespace eetsim {

inline constexpr int kQubitCount = 4;

/// How the qubit thermal occupation N_l is evaluated.
enum class QubitOccupation {
  kAsPrinted,     // N_l = exp(-hbar w_l / kB T)
  kBoseEinstein,  // N_l = 1 / (exp(hbar w_l / kB T) - 1)
};

/// Treatment of the resonator-resonator coupling g_ab (a + a^dagger)(b + b^dagger).
enum class Bridge {
  kFull,         // all four terms, including a b and a^dagger b^dagger
  kRotatingWave, // a^dagger b + a b^dagger only
};

/// Four charge qubits, two transmission-line resonators. Qubits 1,2 couple to
/// resonator a; qubits 3,4 to resonator b. Frequencies and couplings are
/// angular (rad/s), rates in 1/s, temperature in kelvin. Qubit arrays are
/// 0-based (index 0 is Q1).
struct CircuitParams {
  double omega_a = 0.0;
  double omega_b = 0.0;
  std::array<double, kQubitCount> omega{};
  std::array<double, kQubitCount> g{};
  double g_ab = 0.0;

  double kappa_a = 0.0;
  double kappa_b = 0.0;
  std::array<double, kQubitCount> gamma{};  // relaxation
  std::array<double, kQubitCount> gphi{};   // pure dephasing
  double temperature = 0.0;
  QubitOccupation qubit_occupation = QubitOccupation::kAsPrinted;
  Bridge bridge = Bridge::kFull;

  /// Frequency of the resonator qubit `q` couples to.
  double resonator_frequency(int q) const { return q < 2 ? omega_a : omega_b; }
  /// delta_q = omega_q - omega_r(q).
  double detuning(int q) const { return omega[q] - resonator_frequency(q); }

  /// Device frequencies, coherence times and 20 mK from the reference setup;
  /// all couplings zero.
  static CircuitParams reference_device();
};

/// Throws ValidationError naming the violated invariant.
void validate(const CircuitParams& p);

inline constexpr double kDispersiveWarning = 0.15;
inline constexpr double kDispersiveLimit = 0.3;

struct DispersiveCheck {
  enum class Level { kOk, kWarning, kViolation };
  double max_ratio = 0.0;  // max_j g_j / delta_j
  int worst_qubit = 0;     // 0-based
  Level level = Level::kOk;
};

DispersiveCheck check_dispersive(const CircuitParams& p);
/// Throws DispersiveError above the hard limit.
void require_dispersive(const CircuitParams& p);

enum class Geometry { kEquallySpaced, kModerateClustered, kOverClustered, kCustom };

/// Coupling assignment for one of the reference geometries (or custom values).
struct GeometryPreset {
  Geometry geometry = Geometry::kCustom;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double g4 = 0.0;
  double g_ab = 0.0;

  static GeometryPreset named(Geometry geometry);
  /// Accepts "equally-spaced", "moderate-clustered", "over-clustered".
  static GeometryPreset from_name(std::string_view name);
  static GeometryPreset custom(double g1, double g2, double g3, double g4,
                               double g_ab);

  std::string name() const;
  CircuitParams apply(CircuitParams base) const;
};

std::string geometry_name(Geometry geometry);

/// Effective qubit-qubit exchange couplings and Lamb-shifted site energies.
struct CouplingTable {
  double J12 = 0.0;
  double J34 = 0.0;
  double J23 = 0.0;
  double J13 = 0.0;
  double J24 = 0.0;
  double J14 = 0.0;
  std::array<double, kQubitCount> eps{};

  /// eps1 > eps2 > eps3 > eps4.
  bool energy_ordered() const;
  /// J12 / J23; +inf when J23 vanishes.
  double clustering_ratio() const;
  /// Coupling between 0-based qubits i != j.
  double coupling(int i, int j) const;
};

/// Requires the canonical circuit layout (Q1..Q4, Ra, Rb).
void require_circuit_layout(const HilbertLayout& layout);
int fock_cutoff(const HilbertLayout& layout);

DenseOperator build_h1(const CircuitParams& p, const HilbertLayout& layout);

struct HamiltonianSplit {
  DenseOperator free;         // H0
  DenseOperator interaction;  // H_i
};
HamiltonianSplit split_h0_hi(const CircuitParams& p, const HilbertLayout& layout);

/// One interaction-picture term: contributes exp(i*frequency*t) op + h.c.
struct PhaseTerm {
  std::string label;
  DenseOperator op;
  double frequency = 0.0;
};

/// Static term matrices of H_I(t): g_j R sigma_j^+ at +delta_j, g_ab a b at
/// -(omega_a + omega_b), g_ab a b^dagger at (omega_b - omega_a).
std::vector<PhaseTerm> interaction_terms(const CircuitParams& p,
                                         const HilbertLayout& layout);
DenseOperator interaction_hamiltonian(const CircuitParams& p,
                                      const HilbertLayout& layout, double t);
/// Sum over terms of exp(i f t) op + h.c. for a precomputed term list.
DenseOperator assemble_phase_terms(const std::vector<PhaseTerm>& terms,
                                   const HilbertLayout& layout, double t);

/// Anti-Hermitian generator S of the dispersive transformation U = exp(S).
DenseOperator fn_generator(const CircuitParams& p, const HilbertLayout& layout);

/// Form of the qubit / opposite-resonator exchange term in H3.
enum class CrossExchange {
  /// (g_ab g_j / delta_j) sigma_x^j (R' + R'^dagger): the complete second
  /// order commutator.
  kComplete,
  /// (g_ab g_j / delta_j)(R'^dagger sigma_j^- + R' sigma_j^+) only.
  kRotatingWave,
};

DenseOperator second_order_h3(const CircuitParams& p, const HilbertLayout& layout,
                              CrossExchange cross = CrossExchange::kComplete);

/// max |(U^dagger H1 U - H3)_{ij}| over basis states with every resonator
/// below its cutoff, where truncated ladder commutators are exact.
double fn_residual(const CircuitParams& p, const HilbertLayout& layout,
                   CrossExchange cross = CrossExchange::kComplete);

/// 3 (max_j g_j/delta_j)^3 max_j delta_j.
double fn_cubic_bound(const CircuitParams& p);

CouplingTable effective_couplings(const CircuitParams& p);

/// 16-dimensional effective qubit Hamiltonian on a qubit-only layout.
DenseOperator effective_hamiltonian(const CircuitParams& p,
                                    const HilbertLayout& qubit_layout);
/// Restriction of a qubit-layout operator to the states |e_1>,...,|e_4>.
Matrix single_excitation_block(const DenseOperator& qubit_operator);

/// Total excitation number sum_j sigma_j^+ sigma_j^- + a^dagger a + b^dagger b.
DenseOperator excitation_number(const HilbertLayout& layout);

}  // namespace eetsim
