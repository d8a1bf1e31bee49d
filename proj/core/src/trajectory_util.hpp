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
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eetsim/errors.hpp"
#include "eetsim/lindblad.hpp"
#include "eetsim/units.hpp"

namespace eetsim::detail {

struct ObservableIndices {
  std::array<Eigen::Index, kQubitCount> qubit{};
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Eigen::Index ground = 0;
};

inline ObservableIndices observable_indices(const HilbertLayout& layout) {
  auto at = [&](BasisState s) {
    return static_cast<Eigen::Index>(basis_index(layout, s));
  };
  return {{at(BasisState::kQ1), at(BasisState::kQ2), at(BasisState::kQ3),
           at(BasisState::kQ4)},
          at(BasisState::kResonatorA),
          at(BasisState::kResonatorB),
          at(BasisState::kGround)};
}

inline constexpr int kSpotCheckCount = 10;

// Sample ordinals at which the spectrum of rho is computed.
class SpotChecks {
 public:
  explicit SpotChecks(std::size_t expected_samples) {
    if (expected_samples == 0) return;
    const std::size_t last = expected_samples - 1;
    for (int i = 0; i < kSpotCheckCount; ++i) {
      ordinals_.insert(static_cast<std::size_t>(
          std::llround(static_cast<double>(i) * static_cast<double>(last) /
                       (kSpotCheckCount - 1))));
    }
  }
  bool contains(std::size_t ordinal) const { return ordinals_.count(ordinal) != 0; }

 private:
  std::set<std::size_t> ordinals_;
};

inline void check_physical(const Matrix& rho, double time) {
  const double trace = rho.trace().real();
  if (!(std::abs(trace - 1.0) <= kTraceTolerance)) {
    std::ostringstream msg;
    msg << "trace drifted to " << trace << " at t = " << units::to_ns(time) << " ns";
    throw PhysicalityError(msg.str(), time);
  }
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const double pop = rho(i, i).real();
    if (!(pop >= -kNegativePopulationTolerance)) {
      std::ostringstream msg;
      msg << "population of basis state " << i << " fell to " << pop
          << " at t = " << units::to_ns(time) << " ns";
      throw PhysicalityError(msg.str(), time);
    }
  }
}

inline void record_sample(TrajectoryRecord& record, const SpotChecks& spot,
                          const Matrix& rho, const ObservableIndices& idx,
                          double time) {
  if (record.samples.empty()) {
    record.min_eigenvalue = std::numeric_limits<double>::infinity();
  }
  Sample s;
  s.time = time;
  for (int q = 0; q < kQubitCount; ++q) s.qubit[q] = rho(idx.qubit[q], idx.qubit[q]).real();
  s.resonator_a = rho(idx.a, idx.a).real();
  s.resonator_b = rho(idx.b, idx.b).real();
  s.ground = rho(idx.ground, idx.ground).real();
  s.trace = rho.trace().real();
  s.purity = rho.cwiseAbs2().sum();

  const double trace_error = std::abs(s.trace - 1.0);
  s.physical = trace_error < kTraceTolerance;
  for (double pop : {s.qubit[0], s.qubit[1], s.qubit[2], s.qubit[3], s.resonator_a,
                     s.resonator_b, s.ground}) {
    if (pop < -kPopulationSlack || pop > 1.0 + kPopulationSlack) s.physical = false;
  }
  record.max_trace_error = std::max(record.max_trace_error, trace_error);
  record.max_hermiticity_defect = std::max(
      record.max_hermiticity_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
  if (spot.contains(record.samples.size())) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    record.min_eigenvalue = std::min(record.min_eigenvalue, solver.eigenvalues()(0));
  }
  record.samples.push_back(s);
}

}  // namespace eetsim::detail
