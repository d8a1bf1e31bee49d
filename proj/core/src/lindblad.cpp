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

#include "eetsim/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "eetsim/errors.hpp"
#include "eetsim/units.hpp"

namespace eetsim {
namespace {

const char* const kQubitSlots[kQubitCount] = {"Q1", "Q2", "Q3", "Q4"};

double bose_einstein(double omega, double temperature) {
  if (temperature == 0.0) return 0.0;
  const double x = units::kHbar * omega / (units::kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double boltzmann(double omega, double temperature) {
  if (temperature == 0.0) return 0.0;
  return std::exp(-units::kHbar * omega / (units::kBoltzmann * temperature));
}

}  // namespace

ThermalNumbers thermal_occupations(const CircuitParams& p) {
  if (!(p.temperature >= 0.0)) {
    throw ValidationError("temperature must be non-negative");
  }
  ThermalNumbers n;
  n.n_a = bose_einstein(p.omega_a, p.temperature);
  n.n_b = bose_einstein(p.omega_b, p.temperature);
  for (int q = 0; q < kQubitCount; ++q) {
    n.n_qubit[q] = p.qubit_occupation == QubitOccupation::kAsPrinted
                       ? boltzmann(p.omega[q], p.temperature)
                       : bose_einstein(p.omega[q], p.temperature);
  }
  return n;
}

LindbladSpec build_lindblad_spec(const CircuitParams& p, const HilbertLayout& layout) {
  const int n_max = fock_cutoff(layout);
  const ThermalNumbers n = thermal_occupations(p);
  LindbladSpec spec;
  const DenseOperator a = embed(boson_annihilation(n_max), "Ra", layout);
  const DenseOperator b = embed(boson_annihilation(n_max), "Rb", layout);
  spec.terms.push_back({"kappa_a", a, p.kappa_a * (n.n_a + 1.0)});
  spec.terms.push_back({"kappa_a_heat", a.adjoint(), p.kappa_a * n.n_a});
  spec.terms.push_back({"kappa_b", b, p.kappa_b * (n.n_b + 1.0)});
  spec.terms.push_back({"kappa_b_heat", b.adjoint(), p.kappa_b * n.n_b});
  for (int q = 0; q < kQubitCount; ++q) {
    const std::string idx = std::to_string(q + 1);
    const DenseOperator sm = embed(sigma_minus(), kQubitSlots[q], layout);
    spec.terms.push_back({"gamma" + idx, sm, p.gamma[q] * (n.n_qubit[q] + 1.0)});
    spec.terms.push_back({"gamma" + idx + "_up", sm.adjoint(),
                          p.gamma[q] * n.n_qubit[q]});
    spec.terms.push_back(
        {"gphi" + idx, embed(sigma_z(), kQubitSlots[q], layout), p.gphi[q]});
  }
  for (const auto& term : spec.terms) {
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate)) {
      throw ValidationError("collapse rate '" + term.label +
                            "' must be finite and non-negative");
    }
  }
  return spec;
}

DenseOperator dissipator(const DenseOperator& a, const DenseOperator& rho) {
  if (!(a.layout() == rho.layout())) {
    throw ValidationError("dissipator: layout mismatch");
  }
  const Matrix& am = a.matrix();
  const Matrix& r = rho.matrix();
  const Matrix ada = am.adjoint() * am;
  Matrix out = am * r * am.adjoint() - 0.5 * (ada * r + r * ada);
  return DenseOperator(a.layout(), std::move(out));
}

std::string frame_name(Frame frame) {
  switch (frame) {
    case Frame::kLab:
      return "lab";
    case Frame::kInteraction:
      return "interaction";
    case Frame::kReduced:
      return "effective-reduced";
  }
  return "interaction";
}

Frame frame_from_name(std::string_view name) {
  if (name == "lab") return Frame::kLab;
  if (name == "interaction") return Frame::kInteraction;
  if (name == "effective-reduced" || name == "reduced") return Frame::kReduced;
  throw ValidationError("unknown frame '" + std::string(name) +
                        "' (expected lab, interaction or effective-reduced)");
}

// --- Hamiltonian source -----------------------------------------------------

HamiltonianSource::HamiltonianSource(DenseOperator static_part,
                                     std::vector<PhaseTerm> terms,
                                     double max_frequency)
    : static_part_(std::move(static_part)),
      terms_(std::move(terms)),
      max_frequency_(max_frequency) {
  for (const auto& term : terms_) {
    if (!(term.op.layout() == static_part_.layout())) {
      throw ValidationError("HamiltonianSource: phase term '" + term.label +
                            "' has a different layout");
    }
  }
}

HamiltonianSource HamiltonianSource::for_frame(Frame frame, const CircuitParams& p,
                                               const HilbertLayout& layout) {
  double couplings = p.g_ab;
  for (double g : p.g) couplings = std::max(couplings, g);
  if (frame == Frame::kLab) {
    double fastest = std::max({couplings, p.omega_a, p.omega_b});
    for (double w : p.omega) fastest = std::max(fastest, w);
    return HamiltonianSource(build_h1(p, layout), {}, fastest);
  }
  if (frame == Frame::kInteraction) {
    std::vector<PhaseTerm> terms = interaction_terms(p, layout);
    double fastest = couplings;
    for (const auto& term : terms) fastest = std::max(fastest, std::abs(term.frequency));
    return HamiltonianSource(DenseOperator::zero(layout), std::move(terms), fastest);
  }
  throw ValidationError("HamiltonianSource: the reduced frame has no full-space source");
}

DenseOperator HamiltonianSource::at(double t) const {
  return static_part_ + assemble_phase_terms(terms_, layout(), t);
}

DenseOperator rhs(double t, const DenseOperator& rho,
                  const HamiltonianSource& hamiltonian, const LindbladSpec& spec) {
  const DenseOperator h = hamiltonian.at(t);
  DenseOperator out = Complex(0.0, -1.0) * commutator(h, rho);
  for (const auto& term : spec.terms) {
    if (term.rate == 0.0) continue;
    out += term.rate * dissipator(term.op, rho);
  }
  return out;
}

// --- basis states -------------------------------------------------------------

std::string basis_state_name(BasisState state) {
  switch (state) {
    case BasisState::kQ1:
      return "1";
    case BasisState::kQ2:
      return "2";
    case BasisState::kQ3:
      return "3";
    case BasisState::kQ4:
      return "4";
    case BasisState::kResonatorA:
      return "a";
    case BasisState::kResonatorB:
      return "b";
    case BasisState::kGround:
      return "ground";
  }
  return "1";
}

BasisState basis_state_from_name(std::string_view name) {
  for (BasisState s : {BasisState::kQ1, BasisState::kQ2, BasisState::kQ3,
                       BasisState::kQ4, BasisState::kResonatorA,
                       BasisState::kResonatorB, BasisState::kGround}) {
    if (basis_state_name(s) == name) return s;
  }
  throw ValidationError("unknown initial state '" + std::string(name) +
                        "' (expected 1, 2, 3, 4, a, b or ground)");
}

std::size_t basis_index(const HilbertLayout& layout, BasisState state) {
  require_circuit_layout(layout);
  std::array<int, 6> digits{};
  switch (state) {
    case BasisState::kQ1:
    case BasisState::kQ2:
    case BasisState::kQ3:
    case BasisState::kQ4:
      digits[static_cast<int>(state)] = 1;
      break;
    case BasisState::kResonatorA:
      digits[4] = 1;
      break;
    case BasisState::kResonatorB:
      digits[5] = 1;
      break;
    case BasisState::kGround:
      break;
  }
  return layout.index_of(digits);
}

DenseOperator basis_density(const HilbertLayout& layout, BasisState state) {
  return DenseOperator::pure_state(layout, basis_index(layout, state));
}

// --- configuration ----------------------------------------------------------

SimulationConfig SimulationConfig::full(Frame frame, double t_final) {
  if (frame == Frame::kReduced) return reduced(t_final);
  SimulationConfig c;
  c.frame = frame;
  c.t_final = t_final;
  c.dt = frame == Frame::kLab ? units::ps(1.0) : units::ps(2.0);
  c.record_stride = frame == Frame::kLab ? 1000 : 500;
  return c;
}

SimulationConfig SimulationConfig::reduced(double t_final) {
  SimulationConfig c;
  c.frame = Frame::kReduced;
  c.t_final = t_final;
  c.dt = units::ps(50.0);
  c.record_stride = 20;
  return c;
}

std::size_t SimulationConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_final / dt));
}

void validate(const SimulationConfig& config) {
  if (config.n_max < 1 || config.n_max > 6) {
    throw ValidationError("n_max must lie in 1..6");
  }
  if (!std::isfinite(config.t_final) || config.t_final < 0.0) {
    throw ValidationError("t_final must be finite and non-negative");
  }
  if (!std::isfinite(config.dt) || config.dt <= 0.0) {
    throw ValidationError("dt must be positive");
  }
  if (config.record_stride < 1) {
    throw ValidationError("record_stride must be at least 1");
  }
  const double steps = std::round(config.t_final / config.dt);
  if (std::abs(steps * config.dt - config.t_final) > 1e-6 * config.dt) {
    throw ValidationError("t_final must be an integer multiple of dt");
  }
}

const Sample& TrajectoryRecord::at_time(double t) const {
  if (samples.empty()) throw ValidationError("trajectory has no samples");
  const auto it = std::min_element(
      samples.begin(), samples.end(), [t](const Sample& x, const Sample& y) {
        return std::abs(x.time - t) < std::abs(y.time - t);
      });
  return *it;
}

TrajectoryRecord simulate(const SimulationConfig& config, const CircuitParams& p) {
  const int n_max = config.frame == Frame::kReduced ? 1 : config.n_max;
  const HilbertLayout layout = HilbertLayout::circuit(n_max);
  return evolve(basis_density(layout, config.initial_state), config, p);
}

}  // namespace eetsim
