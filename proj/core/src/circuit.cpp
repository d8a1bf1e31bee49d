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

#include "eetsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eetsim/errors.hpp"
#include "eetsim/units.hpp"

namespace eetsim {
namespace {

const char* const kQubitSlots[kQubitCount] = {"Q1", "Q2", "Q3", "Q4"};

// Ladder and Pauli operators lifted onto a circuit layout.
struct CircuitOperators {
  explicit CircuitOperators(const HilbertLayout& layout)
      : a(embed(boson_annihilation(fock_cutoff(layout)), "Ra", layout)),
        b(embed(boson_annihilation(fock_cutoff(layout)), "Rb", layout)),
        a_dag(a.adjoint()),
        b_dag(b.adjoint()) {
    for (int q = 0; q < kQubitCount; ++q) {
      sm.push_back(embed(sigma_minus(), kQubitSlots[q], layout));
      sp.push_back(sm.back().adjoint());
      sz.push_back(embed(sigma_z(), kQubitSlots[q], layout));
    }
  }

  const DenseOperator& resonator(int q) const { return q < 2 ? a : b; }
  const DenseOperator& resonator_dag(int q) const { return q < 2 ? a_dag : b_dag; }
  const DenseOperator& other_resonator(int q) const { return q < 2 ? b : a; }
  const DenseOperator& other_resonator_dag(int q) const {
    return q < 2 ? b_dag : a_dag;
  }
  // sigma_i^- sigma_j^+ + sigma_i^+ sigma_j^-
  DenseOperator exchange(int i, int j) const {
    return sm[i] * sp[j] + sp[i] * sm[j];
  }
  DenseOperator bridge() const { return (a_dag + a) * (b_dag + b); }
  DenseOperator bridge(Bridge model) const {
    return model == Bridge::kFull ? bridge() : a_dag * b + a * b_dag;
  }

  DenseOperator a, b, a_dag, b_dag;
  std::vector<DenseOperator> sm, sp, sz;
};

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

}  // namespace

CircuitParams CircuitParams::reference_device() {
  CircuitParams p;
  p.omega_a = units::ghz(3.0);
  p.omega_b = units::ghz(3.0);
  p.omega = {units::ghz(13.115), units::ghz(13.009), units::ghz(12.991),
             units::ghz(13.078)};
  p.kappa_a = 1.0 / units::us(10.0);
  p.kappa_b = 1.0 / units::us(10.0);
  p.gamma.fill(1.0 / units::us(200.0));
  p.gphi.fill(1.0 / units::ns(70.0));
  p.temperature = units::mk(20.0);
  return p;
}

void validate(const CircuitParams& p) {
  auto positive = [](double v, const std::string& name) {
    require_finite(v, name.c_str());
    if (v <= 0.0) throw ValidationError(name + " must be positive");
  };
  auto non_negative = [](double v, const std::string& name) {
    require_finite(v, name.c_str());
    if (v < 0.0) throw ValidationError(name + " must be non-negative");
  };
  positive(p.omega_a, "omega_a");
  positive(p.omega_b, "omega_b");
  non_negative(p.g_ab, "g_ab");
  non_negative(p.kappa_a, "kappa_a");
  non_negative(p.kappa_b, "kappa_b");
  non_negative(p.temperature, "temperature");
  for (int q = 0; q < kQubitCount; ++q) {
    const std::string idx = std::to_string(q + 1);
    positive(p.omega[q], "omega" + idx);
    non_negative(p.g[q], "g" + idx);
    non_negative(p.gamma[q], "gamma" + idx);
    non_negative(p.gphi[q], "gphi" + idx);
    if (p.detuning(q) <= 0.0) {
      throw ValidationError("detuning delta" + idx +
                            " = omega" + idx + " - omega_r must be positive");
    }
  }
}

DispersiveCheck check_dispersive(const CircuitParams& p) {
  DispersiveCheck check;
  for (int q = 0; q < kQubitCount; ++q) {
    const double delta = p.detuning(q);
    const double ratio = delta > 0.0 ? p.g[q] / delta
                                     : std::numeric_limits<double>::infinity();
    if (ratio > check.max_ratio || q == 0) {
      check.max_ratio = ratio;
      check.worst_qubit = q;
    }
  }
  if (check.max_ratio >= kDispersiveLimit) {
    check.level = DispersiveCheck::Level::kViolation;
  } else if (check.max_ratio >= kDispersiveWarning) {
    check.level = DispersiveCheck::Level::kWarning;
  }
  return check;
}

void require_dispersive(const CircuitParams& p) {
  const DispersiveCheck check = check_dispersive(p);
  if (check.level == DispersiveCheck::Level::kViolation) {
    std::ostringstream msg;
    msg << "dispersive limit violated: g" << check.worst_qubit + 1 << "/delta"
        << check.worst_qubit + 1 << " = " << check.max_ratio
        << " (hard limit " << kDispersiveLimit << ")";
    throw DispersiveError(msg.str());
  }
}

// --- presets ----------------------------------------------------------------

GeometryPreset GeometryPreset::named(Geometry geometry) {
  using units::mhz;
  switch (geometry) {
    case Geometry::kEquallySpaced:
      return {geometry, mhz(100), mhz(990), mhz(990), mhz(100), mhz(980)};
    case Geometry::kModerateClustered:
      return {geometry, mhz(120), mhz(990), mhz(990), mhz(120), mhz(930)};
    case Geometry::kOverClustered:
      return {geometry, mhz(230), mhz(920), mhz(920), mhz(230), mhz(800)};
    case Geometry::kCustom:
      break;
  }
  throw ValidationError("custom geometry has no named coupling values");
}

GeometryPreset GeometryPreset::from_name(std::string_view name) {
  for (Geometry g : {Geometry::kEquallySpaced, Geometry::kModerateClustered,
                     Geometry::kOverClustered}) {
    if (geometry_name(g) == name) return named(g);
  }
  throw ValidationError("unknown preset '" + std::string(name) +
                        "' (expected equally-spaced, moderate-clustered or "
                        "over-clustered)");
}

GeometryPreset GeometryPreset::custom(double g1, double g2, double g3, double g4,
                                      double g_ab) {
  return {Geometry::kCustom, g1, g2, g3, g4, g_ab};
}

std::string GeometryPreset::name() const { return geometry_name(geometry); }

CircuitParams GeometryPreset::apply(CircuitParams base) const {
  base.g = {g1, g2, g3, g4};
  base.g_ab = g_ab;
  return base;
}

std::string geometry_name(Geometry geometry) {
  switch (geometry) {
    case Geometry::kEquallySpaced:
      return "equally-spaced";
    case Geometry::kModerateClustered:
      return "moderate-clustered";
    case Geometry::kOverClustered:
      return "over-clustered";
    case Geometry::kCustom:
      return "custom";
  }
  return "custom";
}

// --- coupling table ---------------------------------------------------------

bool CouplingTable::energy_ordered() const {
  return eps[0] > eps[1] && eps[1] > eps[2] && eps[2] > eps[3];
}

double CouplingTable::clustering_ratio() const {
  if (J23 == 0.0) return std::numeric_limits<double>::infinity();
  return J12 / J23;
}

double CouplingTable::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return J12;
  if (i == 2 && j == 3) return J34;
  if (i == 1 && j == 2) return J23;
  if (i == 0 && j == 2) return J13;
  if (i == 1 && j == 3) return J24;
  if (i == 0 && j == 3) return J14;
  throw ValidationError("coupling: qubit indices must be distinct and in 0..3");
}

CouplingTable effective_couplings(const CircuitParams& p) {
  std::array<double, kQubitCount> d{};
  for (int q = 0; q < kQubitCount; ++q) {
    d[q] = p.detuning(q);
    if (d[q] == 0.0) {
      throw ValidationError("effective_couplings: zero detuning for qubit " +
                            std::to_string(q + 1));
    }
  }
  require_dispersive(p);
  const auto& g = p.g;
  CouplingTable t;
  t.J12 = g[0] * g[1] / (2.0 * d[0] * d[1]) * (d[0] + d[1]);
  t.J34 = g[2] * g[3] / (2.0 * d[2] * d[3]) * (d[2] + d[3]);
  t.J23 = p.g_ab * g[1] * g[2] / (d[1] * d[2]);
  t.J13 = p.g_ab * g[0] * g[2] / (d[0] * d[2]);
  t.J24 = p.g_ab * g[1] * g[3] / (d[1] * d[3]);
  t.J14 = p.g_ab * g[0] * g[3] / (d[0] * d[3]);
  for (int q = 0; q < kQubitCount; ++q) {
    t.eps[q] = p.omega[q] + g[q] * g[q] / d[q];
  }
  return t;
}

// --- Hamiltonians -----------------------------------------------------------

void require_circuit_layout(const HilbertLayout& layout) {
  const auto& s = layout.subsystems();
  bool ok = s.size() == 6;
  for (int q = 0; ok && q < kQubitCount; ++q) {
    ok = s[q].label == kQubitSlots[q] && s[q].dimension == 2;
  }
  ok = ok && s[4].label == "Ra" && s[5].label == "Rb" &&
       s[4].dimension == s[5].dimension && s[4].dimension >= 2;
  if (!ok) {
    throw ValidationError(
        "layout is not the canonical circuit ordering (Q1,Q2,Q3,Q4,Ra,Rb) "
        "with n_max >= 1");
  }
}

int fock_cutoff(const HilbertLayout& layout) {
  require_circuit_layout(layout);
  return layout.subsystems()[4].dimension - 1;
}

HamiltonianSplit split_h0_hi(const CircuitParams& p, const HilbertLayout& layout) {
  require_circuit_layout(layout);
  const CircuitOperators ops(layout);
  DenseOperator h0 = p.omega_a * (ops.a_dag * ops.a) + p.omega_b * (ops.b_dag * ops.b);
  DenseOperator hi = p.g_ab * ops.bridge(p.bridge);
  for (int q = 0; q < kQubitCount; ++q) {
    h0 += (p.omega[q] / 2.0) * ops.sz[q];
    hi += p.g[q] * (ops.resonator_dag(q) * ops.sm[q] + ops.resonator(q) * ops.sp[q]);
  }
  return {std::move(h0), std::move(hi)};
}

DenseOperator build_h1(const CircuitParams& p, const HilbertLayout& layout) {
  auto [h0, hi] = split_h0_hi(p, layout);
  return h0 + hi;
}

std::vector<PhaseTerm> interaction_terms(const CircuitParams& p,
                                         const HilbertLayout& layout) {
  require_circuit_layout(layout);
  const CircuitOperators ops(layout);
  std::vector<PhaseTerm> terms;
  for (int q = 0; q < kQubitCount; ++q) {
    terms.push_back({"g" + std::to_string(q + 1),
                     p.g[q] * (ops.resonator(q) * ops.sp[q]), p.detuning(q)});
  }
  if (p.bridge == Bridge::kFull) {
    terms.push_back({"ab", p.g_ab * (ops.a * ops.b), -(p.omega_a + p.omega_b)});
  }
  terms.push_back({"ab_dag", p.g_ab * (ops.a * ops.b_dag), p.omega_b - p.omega_a});
  return terms;
}

DenseOperator assemble_phase_terms(const std::vector<PhaseTerm>& terms,
                                   const HilbertLayout& layout, double t) {
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(layout.dimension()),
                          static_cast<Eigen::Index>(layout.dimension()));
  for (const auto& term : terms) {
    const Complex phase = std::polar(1.0, term.frequency * t);
    const Matrix scaled = phase * term.op.matrix();
    h += scaled;
    h += scaled.adjoint();
  }
  return DenseOperator(layout, std::move(h));
}

DenseOperator interaction_hamiltonian(const CircuitParams& p,
                                      const HilbertLayout& layout, double t) {
  return assemble_phase_terms(interaction_terms(p, layout), layout, t);
}

DenseOperator fn_generator(const CircuitParams& p, const HilbertLayout& layout) {
  require_circuit_layout(layout);
  require_dispersive(p);
  const CircuitOperators ops(layout);
  DenseOperator s = DenseOperator::zero(layout);
  for (int q = 0; q < kQubitCount; ++q) {
    const double ratio = p.g[q] / p.detuning(q);
    s += ratio * (ops.resonator_dag(q) * ops.sm[q] - ops.resonator(q) * ops.sp[q]);
  }
  return s;
}

DenseOperator second_order_h3(const CircuitParams& p, const HilbertLayout& layout,
                              CrossExchange cross) {
  require_circuit_layout(layout);
  require_dispersive(p);
  const CircuitOperators ops(layout);
  const auto& g = p.g;
  std::array<double, kQubitCount> d{};
  for (int q = 0; q < kQubitCount; ++q) d[q] = p.detuning(q);

  const DenseOperator bridge = ops.bridge();
  DenseOperator h = p.omega_a * (ops.a_dag * ops.a) +
                    p.omega_b * (ops.b_dag * ops.b) + p.g_ab * bridge;
  for (int q = 0; q < kQubitCount; ++q) {
    const DenseOperator& r = ops.resonator(q);
    const DenseOperator& r_dag = ops.resonator_dag(q);
    // sigma_z-dressed bridge.
    h += (p.g_ab * g[q] * g[q] / (2.0 * d[q] * d[q])) * (bridge * ops.sz[q]);
    h += (p.omega[q] / 2.0) * ops.sz[q];
    // Lamb and ac-Stark shifts.
    h += (g[q] * g[q] / d[q]) * (r * r_dag * ops.sp[q] * ops.sm[q] -
                                 r_dag * r * ops.sm[q] * ops.sp[q]);
    // Exchange with the opposite resonator through the bridge.
    const DenseOperator& o = ops.other_resonator(q);
    const DenseOperator& o_dag = ops.other_resonator_dag(q);
    const double c = p.g_ab * g[q] / d[q];
    if (cross == CrossExchange::kComplete) {
      h += c * ((o_dag + o) * (ops.sm[q] + ops.sp[q]));
    } else {
      h += c * (o_dag * ops.sm[q] + o * ops.sp[q]);
    }
  }
  h += (g[0] * g[1] / (2.0 * d[0] * d[1]) * (d[0] + d[1])) * ops.exchange(0, 1);
  h += (g[2] * g[3] / (2.0 * d[2] * d[3]) * (d[2] + d[3])) * ops.exchange(2, 3);
  for (int i : {0, 1}) {
    for (int j : {2, 3}) {
      h += (p.g_ab * g[i] * g[j] / (d[i] * d[j])) * ops.exchange(i, j);
    }
  }
  return h;
}

double fn_residual(const CircuitParams& p, const HilbertLayout& layout,
                   CrossExchange cross) {
  const int n_max = fock_cutoff(layout);
  const DenseOperator u = unitary_from_generator(fn_generator(p, layout));
  const DenseOperator h2 = conjugate(build_h1(p, layout), u);
  const Matrix diff = (h2 - second_order_h3(p, layout, cross)).matrix();

  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    if (layout.digit(i, 4) < n_max && layout.digit(i, 5) < n_max) {
      keep.push_back(static_cast<Eigen::Index>(i));
    }
  }
  double worst = 0.0;
  for (Eigen::Index r : keep) {
    for (Eigen::Index c : keep) {
      worst = std::max(worst, std::abs(diff(r, c)));
    }
  }
  return worst;
}

double fn_cubic_bound(const CircuitParams& p) {
  double ratio = 0.0;
  double delta = 0.0;
  for (int q = 0; q < kQubitCount; ++q) {
    ratio = std::max(ratio, p.g[q] / p.detuning(q));
    delta = std::max(delta, p.detuning(q));
  }
  return 3.0 * ratio * ratio * ratio * delta;
}

DenseOperator effective_hamiltonian(const CircuitParams& p,
                                    const HilbertLayout& qubit_layout) {
  if (!(qubit_layout == HilbertLayout::qubits(kQubitCount))) {
    throw ValidationError("effective_hamiltonian: expected qubit layout Q1..Q4");
  }
  const CouplingTable t = effective_couplings(p);
  std::vector<DenseOperator> sm;
  for (int q = 0; q < kQubitCount; ++q) {
    sm.push_back(embed(sigma_minus(), kQubitSlots[q], qubit_layout));
  }
  DenseOperator h = DenseOperator::zero(qubit_layout);
  for (int q = 0; q < kQubitCount; ++q) {
    h += t.eps[q] * (sm[q].adjoint() * sm[q]);
  }
  for (int i = 0; i < kQubitCount; ++i) {
    for (int j = i + 1; j < kQubitCount; ++j) {
      h += t.coupling(i, j) * (sm[i] * sm[j].adjoint() + sm[i].adjoint() * sm[j]);
    }
  }
  return h;
}

Matrix single_excitation_block(const DenseOperator& qubit_operator) {
  const HilbertLayout& layout = qubit_operator.layout();
  if (!(layout == HilbertLayout::qubits(kQubitCount))) {
    throw ValidationError("single_excitation_block: expected qubit layout Q1..Q4");
  }
  std::array<Eigen::Index, kQubitCount> idx{};
  for (int q = 0; q < kQubitCount; ++q) {
    std::array<int, kQubitCount> digits{};
    digits[q] = 1;
    idx[q] = static_cast<Eigen::Index>(layout.index_of(digits));
  }
  Matrix block(kQubitCount, kQubitCount);
  for (int i = 0; i < kQubitCount; ++i) {
    for (int j = 0; j < kQubitCount; ++j) {
      block(i, j) = qubit_operator.matrix()(idx[i], idx[j]);
    }
  }
  return block;
}

DenseOperator excitation_number(const HilbertLayout& layout) {
  require_circuit_layout(layout);
  const CircuitOperators ops(layout);
  DenseOperator n = ops.a_dag * ops.a + ops.b_dag * ops.b;
  for (int q = 0; q < kQubitCount; ++q) n += ops.sp[q] * ops.sm[q];
  return n;
}

}  // namespace eetsim
