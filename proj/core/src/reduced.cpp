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

#include <array>
#include <cmath>

#include "eetsim/errors.hpp"
#include "eetsim/lindblad.hpp"
#include "trajectory_util.hpp"

namespace eetsim {
namespace {

constexpr Eigen::Index kBlock = 7;
constexpr Eigen::Index kSuper = kBlock * kBlock;

using Block = Eigen::Matrix<Complex, kBlock, kBlock>;
using Super = Eigen::Matrix<Complex, kSuper, kSuper>;
using SuperVector = Eigen::Matrix<Complex, kSuper, 1>;

constexpr std::array<BasisState, kBlock> kOrder = {
    BasisState::kQ1,        BasisState::kQ2,        BasisState::kQ3, BasisState::kQ4,
    BasisState::kResonatorA, BasisState::kResonatorB, BasisState::kGround};

std::array<Eigen::Index, kBlock> block_indices(const HilbertLayout& layout) {
  std::array<Eigen::Index, kBlock> idx{};
  for (Eigen::Index k = 0; k < kBlock; ++k) {
    idx[k] = static_cast<Eigen::Index>(basis_index(layout, kOrder[k]));
  }
  return idx;
}

Block project(const Matrix& m, const std::array<Eigen::Index, kBlock>& idx) {
  Block out;
  for (Eigen::Index r = 0; r < kBlock; ++r) {
    for (Eigen::Index c = 0; c < kBlock; ++c) out(r, c) = m(idx[r], idx[c]);
  }
  return out;
}

// Row-major vectorization: vec(rho)[i * 7 + j] = rho(i, j).
Eigen::Index flat(Eigen::Index i, Eigen::Index j) { return i * kBlock + j; }

Super liouvillian(const CircuitParams& p) {
  const HilbertLayout layout = HilbertLayout::circuit(1);
  const auto idx = block_indices(layout);

  CircuitParams rwa = p;
  rwa.bridge = Bridge::kRotatingWave;
  // Frame rotating at omega_a for every excitation; commutes with the RWA H1.
  Block h = project(
      (build_h1(rwa, layout) - p.omega_a * excitation_number(layout)).matrix(), idx);
  h -= h(kBlock - 1, kBlock - 1) * Block::Identity();

  Super l = Super::Zero();
  const Complex minus_i(0.0, -1.0);
  for (Eigen::Index i = 0; i < kBlock; ++i) {
    for (Eigen::Index j = 0; j < kBlock; ++j) {
      for (Eigen::Index k = 0; k < kBlock; ++k) {
        l(flat(i, j), flat(k, j)) += minus_i * h(i, k);
        l(flat(i, j), flat(i, k)) -= minus_i * h(k, j);
      }
    }
  }

  Block loss = Block::Zero();
  for (const auto& term : build_lindblad_spec(p, layout).terms) {
    if (term.rate == 0.0) continue;
    const Block a = project(term.op.matrix(), idx);
    loss += term.rate * (a.adjoint() * a);
    for (Eigen::Index i = 0; i < kBlock; ++i) {
      for (Eigen::Index j = 0; j < kBlock; ++j) {
        for (Eigen::Index k = 0; k < kBlock; ++k) {
          for (Eigen::Index m = 0; m < kBlock; ++m) {
            l(flat(i, j), flat(k, m)) += term.rate * a(i, k) * std::conj(a(j, m));
          }
        }
      }
    }
  }
  for (Eigen::Index i = 0; i < kBlock; ++i) {
    for (Eigen::Index j = 0; j < kBlock; ++j) {
      for (Eigen::Index k = 0; k < kBlock; ++k) {
        l(flat(i, j), flat(k, j)) -= 0.5 * loss(i, k);
        l(flat(i, j), flat(i, k)) -= 0.5 * loss(k, j);
      }
    }
  }
  return l;
}

Matrix unflatten(const SuperVector& v) {
  Matrix rho(kBlock, kBlock);
  for (Eigen::Index i = 0; i < kBlock; ++i) {
    for (Eigen::Index j = 0; j < kBlock; ++j) rho(i, j) = v(flat(i, j));
  }
  return rho;
}

}  // namespace

TrajectoryRecord evolve_reduced(const DenseOperator& rho0,
                                const SimulationConfig& config,
                                const CircuitParams& p) {
  validate(config);
  validate(p);
  if (!rho0.is_density()) {
    throw ValidationError("initial state must be a validated density matrix");
  }
  const auto idx = block_indices(rho0.layout());
  const Block start = project(rho0.matrix(), idx);
  if (std::abs(start.trace().real() - 1.0) > 1e-9) {
    throw ValidationError(
        "initial state has weight outside span{|1>..|4>, |a>, |b>, ground}");
  }

  const Super l = liouvillian(p);
  const Super step = matrix_exponential(Matrix(l * config.dt));

  SuperVector v;
  for (Eigen::Index i = 0; i < kBlock; ++i) {
    for (Eigen::Index j = 0; j < kBlock; ++j) v(flat(i, j)) = start(i, j);
  }

  const std::size_t steps = config.step_count();
  const std::size_t stride = static_cast<std::size_t>(config.record_stride);
  const detail::ObservableIndices obs{{0, 1, 2, 3}, 4, 5, 6};
  detail::SpotChecks spot(steps / stride + 1 + (steps % stride != 0 ? 1 : 0));

  TrajectoryRecord record;
  detail::record_sample(record, spot, unflatten(v), obs, 0.0);
  SuperVector next;
  for (std::size_t s = 1; s <= steps; ++s) {
    next.noalias() = step * v;
    v = next;
    const double now = static_cast<double>(s) * config.dt;
    if (s % stride == 0 || s == steps) {
      const Matrix rho = unflatten(v);
      detail::check_physical(rho, now);
      detail::record_sample(record, spot, rho, obs, now);
    }
  }
  record.steps = steps;
  return record;
}

}  // namespace eetsim
