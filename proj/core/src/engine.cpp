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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "eetsim/errors.hpp"
#include "eetsim/lindblad.hpp"
#include "eetsim/units.hpp"
#include "trajectory_util.hpp"

namespace eetsim {
namespace {

using SparseRow = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using SparseCol = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
using Index = Eigen::Index;

// Entries with magnitude below this are treated as structural zeros.
constexpr double kStructuralZero = 1e-300;

// Operator with at most one nonzero per row and per column:
// A |src_k> = value_k |dst_k>.
struct Monomial {
  std::vector<Index> src;
  std::vector<Index> dst;
  std::vector<Complex> value;
  double rate = 0.0;
};

bool is_diagonal(const Matrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (r != c && std::abs(m(r, c)) > kStructuralZero) return false;
    }
  }
  return true;
}

bool to_monomial(const Matrix& m, Monomial& out) {
  std::vector<int> row_hits(static_cast<std::size_t>(m.rows()), 0);
  for (Index c = 0; c < m.cols(); ++c) {
    int hits = 0;
    for (Index r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) <= kStructuralZero) continue;
      if (++hits > 1 || ++row_hits[static_cast<std::size_t>(r)] > 1) return false;
      out.src.push_back(c);
      out.dst.push_back(r);
      out.value.push_back(m(r, c));
    }
  }
  return true;
}

}  // namespace

struct MasterEquation::Impl {
  Index dim = 0;
  // Contiguous diagonal blocks [begin, end) that rho never leaves.
  std::vector<std::pair<Index, Index>> blocks;

  // H(t) = static + sum_k (c_k forward_k + conj(c_k) backward_k), c_k = exp(i f_k t),
  // all stored on the merged pattern of `h`.
  SparseCol h;
  std::vector<Complex> static_values;
  std::vector<double> frequencies;
  std::vector<std::vector<Complex>> forward;
  std::vector<std::vector<Complex>> backward;
  bool time_dependent = false;

  // Diagonal collapse operators and the anticommutator of monomial ones.
  Eigen::MatrixXd weights;
  // Monomial jumps split by source block; entries of one group only pair
  // with each other.
  std::vector<Monomial> jumps;
  // Collapse operators outside both classes (single-block mode only).
  std::vector<std::pair<SparseRow, double>> general;
  SparseRow general_k;  // sum rate A^dagger A over `general`
  bool has_general = false;

  Matrix x;

  Index block_of(Index i) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (i >= blocks[b].first && i < blocks[b].second) return static_cast<Index>(b);
    }
    return -1;
  }

  void set_time(double t) {
    Complex* values = h.valuePtr();
    const std::size_t nnz = static_values.size();
    std::copy(static_values.begin(), static_values.end(), values);
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
      const Complex c = std::polar(1.0, frequencies[k] * t);
      const Complex cc = std::conj(c);
      const Complex* f = forward[k].data();
      const Complex* b = backward[k].data();
      for (std::size_t i = 0; i < nnz; ++i) values[i] += c * f[i] + cc * b[i];
    }
  }
};

namespace {

// Position of (row, col) in the compressed column-major pattern of `m`.
Index pattern_position(const SparseCol& m, Index row, Index col) {
  const auto* outer = m.outerIndexPtr();
  const auto* inner = m.innerIndexPtr();
  const auto* begin = inner + outer[col];
  const auto* end = inner + outer[col + 1];
  const auto* it = std::lower_bound(begin, end, static_cast<int>(row));
  if (it == end || *it != row) {
    throw Error("MasterEquation: entry missing from Hamiltonian pattern");
  }
  return static_cast<Index>(it - inner);
}

void scatter(const SparseCol& pattern, const Matrix& m, std::vector<Complex>& values) {
  values.assign(static_cast<std::size_t>(pattern.nonZeros()), Complex(0.0, 0.0));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > kStructuralZero) {
        values[static_cast<std::size_t>(pattern_position(pattern, r, c))] += m(r, c);
      }
    }
  }
}

SparseRow to_sparse(const Matrix& m) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > kStructuralZero) entries.emplace_back(r, c, m(r, c));
    }
  }
  SparseRow s(m.rows(), m.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  s.makeCompressed();
  return s;
}

}  // namespace

MasterEquation::MasterEquation(const HamiltonianSource& hamiltonian,
                               const LindbladSpec& spec,
                               const std::vector<std::size_t>& block_sizes)
    : impl_(std::make_unique<Impl>()) {
  Impl& d = *impl_;
  const HilbertLayout& layout = hamiltonian.layout();
  d.dim = static_cast<Index>(layout.dimension());

  Index begin = 0;
  for (std::size_t size : block_sizes) {
    d.blocks.emplace_back(begin, begin + static_cast<Index>(size));
    begin += static_cast<Index>(size);
  }
  if (block_sizes.empty()) d.blocks.emplace_back(0, d.dim);
  if (d.blocks.back().second != d.dim) {
    throw ValidationError("MasterEquation: block sizes must sum to the dimension");
  }

  // Merged sparsity pattern of every Hamiltonian piece.
  std::vector<Eigen::Triplet<Complex>> pattern;
  auto collect = [&](const Matrix& m) {
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        if (std::abs(m(r, c)) <= kStructuralZero) continue;
        if (d.block_of(r) != d.block_of(c)) {
          throw ValidationError("MasterEquation: Hamiltonian couples different blocks");
        }
        pattern.emplace_back(r, c, Complex(0.0));
      }
    }
  };
  collect(hamiltonian.static_part().matrix());
  for (const auto& term : hamiltonian.terms()) {
    collect(term.op.matrix());
    collect(term.op.matrix().adjoint());
  }
  for (Index i = 0; i < d.dim; ++i) pattern.emplace_back(i, i, Complex(0.0));
  d.h.resize(d.dim, d.dim);
  d.h.setFromTriplets(pattern.begin(), pattern.end());
  d.h.makeCompressed();

  scatter(d.h, hamiltonian.static_part().matrix(), d.static_values);
  for (const auto& term : hamiltonian.terms()) {
    d.frequencies.push_back(term.frequency);
    d.forward.emplace_back();
    d.backward.emplace_back();
    scatter(d.h, term.op.matrix(), d.forward.back());
    scatter(d.h, term.op.matrix().adjoint(), d.backward.back());
  }
  d.time_dependent = !d.frequencies.empty();
  d.set_time(0.0);

  d.weights = Eigen::MatrixXd::Zero(d.dim, d.dim);
  Eigen::VectorXd loss = Eigen::VectorXd::Zero(d.dim);
  Matrix general_k = Matrix::Zero(d.dim, d.dim);
  for (const auto& term : spec.terms) {
    if (!(term.op.layout() == layout)) {
      throw ValidationError("MasterEquation: collapse operator '" + term.label +
                            "' has a different layout");
    }
    if (term.rate == 0.0) continue;
    const Matrix& a = term.op.matrix();
    if (is_diagonal(a)) {
      // rate (s_i conj(s_j) - (|s_i|^2 + |s_j|^2) / 2) rho_ij
      const Eigen::VectorXcd s = a.diagonal();
      for (Index j = 0; j < d.dim; ++j) {
        for (Index i = 0; i < d.dim; ++i) {
          const double v = (s(i) * std::conj(s(j))).real() -
                           0.5 * (std::norm(s(i)) + std::norm(s(j)));
          d.weights(i, j) += term.rate * v;
        }
      }
      continue;
    }
    Monomial mono;
    if (to_monomial(a, mono)) {
      for (std::size_t k = 0; k < mono.src.size(); ++k) {
        loss(mono.src[k]) += term.rate * std::norm(mono.value[k]);
      }
      std::vector<Monomial> groups(d.blocks.size());
      std::vector<Index> target(d.blocks.size(), -1);
      for (std::size_t k = 0; k < mono.src.size(); ++k) {
        const auto b = static_cast<std::size_t>(d.block_of(mono.src[k]));
        const Index to = d.block_of(mono.dst[k]);
        if (target[b] >= 0 && target[b] != to) {
          throw ValidationError("MasterEquation: collapse operator '" + term.label +
                                "' splits a block");
        }
        target[b] = to;
        groups[b].src.push_back(mono.src[k]);
        groups[b].dst.push_back(mono.dst[k]);
        groups[b].value.push_back(mono.value[k]);
      }
      for (auto& g : groups) {
        if (g.src.empty()) continue;
        g.rate = term.rate;
        d.jumps.push_back(std::move(g));
      }
      continue;
    }
    if (d.blocks.size() > 1) {
      throw ValidationError("MasterEquation: collapse operator '" + term.label +
                            "' is neither diagonal nor monomial; blocks unsupported");
    }
    d.general.emplace_back(to_sparse(a), term.rate);
    general_k += term.rate * (a.adjoint() * a);
    d.has_general = true;
  }
  for (Index j = 0; j < d.dim; ++j) {
    for (Index i = 0; i < d.dim; ++i) d.weights(i, j) -= 0.5 * (loss(i) + loss(j));
  }
  if (d.has_general) d.general_k = to_sparse(general_k);
  d.x = Matrix::Zero(d.dim, d.dim);
}

MasterEquation::~MasterEquation() = default;
MasterEquation::MasterEquation(MasterEquation&&) noexcept = default;
MasterEquation& MasterEquation::operator=(MasterEquation&&) noexcept = default;

std::size_t MasterEquation::dimension() const {
  return static_cast<std::size_t>(impl_->dim);
}

const std::vector<std::pair<Eigen::Index, Eigen::Index>>& MasterEquation::blocks() const {
  return impl_->blocks;
}

void MasterEquation::derivative(double t, const Matrix& rho, Matrix& out) {
  Impl& d = *impl_;
  if (d.time_dependent) d.set_time(t);
  const Index n = d.x.rows();
  if (rho.rows() != n || rho.cols() != n) {
    throw ValidationError("MasterEquation::derivative: rho has the wrong dimension");
  }
  if (out.rows() != n || out.cols() != n) out.resize(n, n);
  if (d.blocks.size() > 1) out.setZero();
  // Z = rho H column by column; for Hermitian rho, H rho = Z^dagger and
  // -i[H, rho] = Y + Y^dagger with Y = i Z.
  const Complex* values = d.h.valuePtr();
  const int* rows = d.h.innerIndexPtr();
  const int* outer = d.h.outerIndexPtr();
  const Complex i_unit(0.0, 1.0);
  for (const auto& [begin, end] : d.blocks) {
    const Index len = end - begin;
    for (Index c = begin; c < end; ++c) {
      auto z = d.x.col(c).segment(begin, len);
      z.setZero();
      for (int k = outer[c]; k < outer[c + 1]; ++k) {
        z += (i_unit * values[k]) * rho.col(rows[k]).segment(begin, len);
      }
    }
    auto ob = out.block(begin, begin, len, len);
    ob = d.x.block(begin, begin, len, len) + d.x.block(begin, begin, len, len).adjoint();
    ob.array() += d.weights.block(begin, begin, len, len).array() *
                  rho.block(begin, begin, len, len).array();
  }

  for (const Monomial& m : d.jumps) {
    const std::size_t n = m.src.size();
    for (std::size_t q = 0; q < n; ++q) {
      const Complex vq = m.rate * std::conj(m.value[q]);
      const Index sq = m.src[q];
      const Index dq = m.dst[q];
      for (std::size_t p = 0; p < n; ++p) {
        out(m.dst[p], dq) += m.value[p] * vq * rho(m.src[p], sq);
      }
    }
  }
  if (d.has_general) {
    for (const auto& [a, rate] : d.general) {
      const Matrix ar = a * rho;
      out.noalias() += rate * (ar * a.adjoint());
    }
    d.x.noalias() = d.general_k * rho;
    out -= 0.5 * (d.x + d.x.adjoint());
  }
}

// --- full-space integration -----------------------------------------------------

namespace {

// Basis order with even total excitation number first. H1 and H_I(t) keep the
// parity and every collapse operator flips or keeps it uniformly, so a state
// that starts block diagonal stays block diagonal.
std::vector<Index> parity_order(const HilbertLayout& layout, std::size_t& even_count) {
  std::vector<Index> even, odd;
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    int total = 0;
    for (std::size_t s = 0; s < layout.slot_count(); ++s) total += layout.digit(i, s);
    (total % 2 == 0 ? even : odd).push_back(static_cast<Index>(i));
  }
  even_count = even.size();
  even.insert(even.end(), odd.begin(), odd.end());
  return even;
}

Matrix permute(const Matrix& m, const std::vector<Index>& order) {
  const auto n = static_cast<Index>(order.size());
  Matrix out(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) out(r, c) = m(order[r], order[c]);
  }
  return out;
}

DenseOperator permute(const DenseOperator& op, const std::vector<Index>& order) {
  return DenseOperator(op.layout(), permute(op.matrix(), order));
}

// a += s * b over the diagonal blocks only.
void axpy_blocks(Matrix& a, double s, const Matrix& b,
                 const std::vector<std::pair<Index, Index>>& blocks) {
  for (const auto& [begin, end] : blocks) {
    const Index len = end - begin;
    a.block(begin, begin, len, len) += s * b.block(begin, begin, len, len);
  }
}

void assign_blocks(Matrix& a, const Matrix& x, double s, const Matrix& b,
                   const std::vector<std::pair<Index, Index>>& blocks) {
  for (const auto& [begin, end] : blocks) {
    const Index len = end - begin;
    a.block(begin, begin, len, len) =
        x.block(begin, begin, len, len) + s * b.block(begin, begin, len, len);
  }
}

}  // namespace

TrajectoryRecord evolve(const DenseOperator& rho0, const SimulationConfig& config,
                        const CircuitParams& p) {
  if (config.frame == Frame::kReduced) return evolve_reduced(rho0, config, p);
  validate(config);
  validate(p);
  const HilbertLayout& layout = rho0.layout();
  if (fock_cutoff(layout) != config.n_max) {
    throw ValidationError("initial state layout does not match n_max");
  }
  if (!rho0.is_density()) {
    throw ValidationError("initial state must be a validated density matrix");
  }
  const HamiltonianSource source = HamiltonianSource::for_frame(config.frame, p, layout);
  const double phase = config.dt * source.max_frequency();
  if (phase >= kMaxPhasePerStep) {
    std::ostringstream msg;
    msg << "step size too large: dt * max frequency = " << phase
        << " rad (limit " << kMaxPhasePerStep << ")";
    throw ValidationError(msg.str());
  }

  // Work in the parity-sorted basis; populations and spectra are unaffected.
  std::size_t even_count = 0;
  const std::vector<Index> order = parity_order(layout, even_count);
  const auto n = static_cast<Index>(layout.dimension());
  Matrix rho = permute(rho0.matrix(), order);
  const auto even = static_cast<Index>(even_count);
  const bool split = rho.block(0, even, even, n - even).cwiseAbs().maxCoeff() == 0.0;
  std::vector<std::size_t> block_sizes;
  if (split) block_sizes = {even_count, static_cast<std::size_t>(n) - even_count};

  std::vector<PhaseTerm> terms;
  for (const auto& term : source.terms()) {
    terms.push_back({term.label, permute(term.op, order), term.frequency});
  }
  LindbladSpec spec = build_lindblad_spec(p, layout);
  for (auto& term : spec.terms) term.op = permute(term.op, order);
  MasterEquation equation(
      HamiltonianSource(permute(source.static_part(), order), std::move(terms),
                        source.max_frequency()),
      spec, block_sizes);
  const auto& blocks = equation.blocks();

  std::vector<Index> position(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    position[static_cast<std::size_t>(order[k])] = static_cast<Index>(k);
  }
  detail::ObservableIndices idx = detail::observable_indices(layout);
  for (auto& q : idx.qubit) q = position[static_cast<std::size_t>(q)];
  idx.a = position[static_cast<std::size_t>(idx.a)];
  idx.b = position[static_cast<std::size_t>(idx.b)];
  idx.ground = position[static_cast<std::size_t>(idx.ground)];

  const std::size_t steps = config.step_count();
  const std::size_t stride = static_cast<std::size_t>(config.record_stride);
  TrajectoryRecord record;
  detail::SpotChecks spot(steps / stride + 1 + (steps % stride != 0 ? 1 : 0));
  Matrix k1 = Matrix::Zero(n, n), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  const double dt = config.dt;

  detail::record_sample(record, spot, rho, idx, 0.0);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t = static_cast<double>(step - 1) * dt;
    equation.derivative(t, rho, k1);
    assign_blocks(tmp, rho, 0.5 * dt, k1, blocks);
    equation.derivative(t + 0.5 * dt, tmp, k2);
    assign_blocks(tmp, rho, 0.5 * dt, k2, blocks);
    equation.derivative(t + 0.5 * dt, tmp, k3);
    assign_blocks(tmp, rho, dt, k3, blocks);
    equation.derivative(t + dt, tmp, k4);
    axpy_blocks(rho, dt / 6.0, k1, blocks);
    axpy_blocks(rho, dt / 3.0, k2, blocks);
    axpy_blocks(rho, dt / 3.0, k3, blocks);
    axpy_blocks(rho, dt / 6.0, k4, blocks);

    const double now = static_cast<double>(step) * dt;
    detail::check_physical(rho, now);
    if (step % stride == 0 || step == steps) {
      detail::record_sample(record, spot, rho, idx, now);
    }
  }
  record.steps = steps;
  return record;
}

}  // namespace eetsim
