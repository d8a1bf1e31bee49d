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

#include <cmath>
#include <numbers>

#include "eetsim/errors.hpp"
#include "eetsim/experiments.hpp"
#include "eetsim/units.hpp"

namespace eetsim {

double dipole_coupling_constant() {
  constexpr double kNanometre = 1e-9;
  const double joules = units::kDebye * units::kDebye /
                        (4.0 * std::numbers::pi * units::kVacuumPermittivity *
                         kNanometre * kNanometre * kNanometre);
  // E / (h c) in m^-1, then cm^-1.
  return joules / (units::kPlanck * units::kSpeedOfLight) / 100.0;
}

double dipole_coupling(const ExcitonSite& i, const ExcitonSite& j) {
  const Eigen::Vector3d r = j.position_nm - i.position_nm;
  const double distance = r.norm();
  if (!(distance > 0.0)) {
    throw ValidationError("dipole_coupling: coincident site positions");
  }
  const Eigen::Vector3d u = r / distance;
  const double orientation = i.dipole_debye.dot(j.dipole_debye) -
                             3.0 * i.dipole_debye.dot(u) * j.dipole_debye.dot(u);
  return dipole_coupling_constant() * orientation / (distance * distance * distance);
}

void validate(const ExcitonGeometry& geometry) {
  if (geometry.sites.size() < 2) {
    throw ValidationError("exciton geometry needs at least two sites");
  }
  for (std::size_t i = 0; i < geometry.sites.size(); ++i) {
    for (std::size_t j = i + 1; j < geometry.sites.size(); ++j) {
      if ((geometry.sites[i].position_nm - geometry.sites[j].position_nm).norm() == 0.0) {
        throw ValidationError("exciton sites " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) + " coincide");
      }
    }
  }
}

DenseOperator frenkel_hamiltonian(const ExcitonGeometry& geometry) {
  const std::size_t n = geometry.sites.size();
  if (n == 0) throw ValidationError("exciton geometry has no sites");
  if (n > 1) validate(geometry);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix h = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = geometry.sites[static_cast<std::size_t>(i)].energy_cm;
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double c = dipole_coupling(geometry.sites[static_cast<std::size_t>(i)],
                                       geometry.sites[static_cast<std::size_t>(j)]);
      h(i, j) = c;
      h(j, i) = c;
    }
  }
  return DenseOperator(HilbertLayout({{"site", static_cast<int>(n)}}), std::move(h));
}

}  // namespace eetsim
