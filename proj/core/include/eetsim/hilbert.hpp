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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace eetsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct Subsystem {
  std::string label;
  int dimension = 0;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered tensor-product structure. Basis index is row-major over slots, so
/// the first slot is the most significant digit.
class HilbertLayout {
 public:
  explicit HilbertLayout(std::vector<Subsystem> subsystems);

  /// Canonical circuit ordering (Q1, Q2, Q3, Q4, Ra, Rb) with Fock cutoff
  /// `n_max` on each resonator.
  static HilbertLayout circuit(int n_max);
  /// Qubit-only layout Q1..Qcount.
  static HilbertLayout qubits(int count = 4);

  std::size_t dimension() const { return dimension_; }
  std::size_t slot_count() const { return subsystems_.size(); }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }

  std::size_t slot_index(std::string_view label) const;
  int slot_dimension(std::string_view label) const;
  bool has_slot(std::string_view label) const;

  std::size_t index_of(std::span<const int> digits) const;
  std::vector<int> digits_of(std::size_t index) const;
  int digit(std::size_t index, std::size_t slot) const;

  bool operator==(const HilbertLayout& other) const {
    return subsystems_ == other.subsystems_;
  }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

enum class OperatorRole { kGeneric, kDensity };

/// Complex square matrix tied to a layout. Immutable once built; the
/// arithmetic below returns new operators.
class DenseOperator {
 public:
  DenseOperator(HilbertLayout layout, Matrix entries);

  static DenseOperator zero(const HilbertLayout& layout);
  static DenseOperator identity(const HilbertLayout& layout);
  /// Validated density matrix: |tr - 1| < 1e-9 and Hermiticity defect < 1e-12.
  static DenseOperator density(HilbertLayout layout, Matrix entries);
  static DenseOperator pure_state(const HilbertLayout& layout,
                                  std::size_t basis_index);
  static DenseOperator projector(const HilbertLayout& layout,
                                 std::size_t basis_index);

  const HilbertLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return entries_; }
  OperatorRole role() const { return role_; }
  bool is_density() const { return role_ == OperatorRole::kDensity; }
  std::size_t dimension() const { return layout_.dimension(); }

  DenseOperator adjoint() const;
  Complex trace() const { return entries_.trace(); }
  double max_abs() const;
  double hermiticity_defect() const;
  double anti_hermiticity_defect() const;

  DenseOperator operator+(const DenseOperator& rhs) const;
  DenseOperator operator-(const DenseOperator& rhs) const;
  DenseOperator operator*(const DenseOperator& rhs) const;
  DenseOperator operator*(Complex scalar) const;
  DenseOperator operator-() const;
  DenseOperator& operator+=(const DenseOperator& rhs);

 private:
  void require_same_layout(const DenseOperator& rhs, const char* op) const;

  HilbertLayout layout_;
  Matrix entries_;
  OperatorRole role_ = OperatorRole::kGeneric;
};

inline DenseOperator operator*(Complex scalar, const DenseOperator& op) {
  return op * scalar;
}

/// Truncated lowering operator, (n_max+1)-dimensional, sqrt(n) on the first
/// superdiagonal.
Matrix boson_annihilation(int n_max);
Matrix boson_creation(int n_max);
Matrix boson_number(int n_max);

// Qubit basis order is (|g>, |e>): sigma_z = diag(-1, +1), sigma_- = |g><e|.
Matrix sigma_minus();
Matrix sigma_plus();
Matrix sigma_z();
Matrix sigma_x();
Matrix local_identity(int dimension);

/// identity (x) ... (x) local_op (x) ... (x) identity, in layout order.
DenseOperator embed(const Matrix& local_op, std::string_view slot,
                    const HilbertLayout& layout);

/// exp(A) by scaling and squaring with a [13/13] Pade approximant.
Matrix matrix_exponential(const Matrix& a);

/// exp(S) for anti-Hermitian S; checks ||S + S^dagger||_max < 1e-10 on input
/// and ||U^dagger U - I||_max < 1e-9 on output.
DenseOperator unitary_from_generator(const DenseOperator& generator);

/// U^dagger H U.
DenseOperator conjugate(const DenseOperator& h, const DenseOperator& u);

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);

/// Re tr(P rho). Throws if the imaginary residue exceeds 1e-9.
double expectation(const DenseOperator& rho, const DenseOperator& observable);

double max_abs_difference(const DenseOperator& a, const DenseOperator& b);

/// Eigenvalues of a Hermitian operator, ascending.
Eigen::VectorXd hermitian_eigenvalues(const DenseOperator& op);

}  // namespace eetsim
