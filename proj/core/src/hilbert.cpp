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

#include "eetsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eetsim/errors.hpp"

namespace eetsim {

HilbertLayout::HilbertLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) {
    throw ValidationError("HilbertLayout: at least one subsystem required");
  }
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dimension < 1) {
      throw ValidationError("HilbertLayout: subsystem '" + s.label +
                            "' has non-positive dimension");
    }
    if (!seen.insert(s.label).second) {
      throw ValidationError("HilbertLayout: duplicate label '" + s.label + "'");
    }
  }
  strides_.assign(subsystems_.size(), 1);
  dimension_ = 1;
  for (std::size_t k = subsystems_.size(); k-- > 0;) {
    strides_[k] = dimension_;
    dimension_ *= static_cast<std::size_t>(subsystems_[k].dimension);
  }
}

HilbertLayout HilbertLayout::circuit(int n_max) {
  if (n_max < 1) {
    throw ValidationError("Fock cutoff n_max must be >= 1");
  }
  return HilbertLayout({{"Q1", 2},
                        {"Q2", 2},
                        {"Q3", 2},
                        {"Q4", 2},
                        {"Ra", n_max + 1},
                        {"Rb", n_max + 1}});
}

HilbertLayout HilbertLayout::qubits(int count) {
  std::vector<Subsystem> slots;
  for (int q = 1; q <= count; ++q) {
    slots.push_back({"Q" + std::to_string(q), 2});
  }
  return HilbertLayout(std::move(slots));
}

std::size_t HilbertLayout::slot_index(std::string_view label) const {
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (subsystems_[k].label == label) return k;
  }
  throw ValidationError("unknown slot label '" + std::string(label) + "'");
}

int HilbertLayout::slot_dimension(std::string_view label) const {
  return subsystems_[slot_index(label)].dimension;
}

bool HilbertLayout::has_slot(std::string_view label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t HilbertLayout::index_of(std::span<const int> digits) const {
  if (digits.size() != subsystems_.size()) {
    throw ValidationError("index_of: digit count does not match layout");
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= subsystems_[k].dimension) {
      throw ValidationError("index_of: digit out of range for slot '" +
                            subsystems_[k].label + "'");
    }
    index += static_cast<std::size_t>(digits[k]) * strides_[k];
  }
  return index;
}

std::vector<int> HilbertLayout::digits_of(std::size_t index) const {
  std::vector<int> digits(subsystems_.size());
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    digits[k] = digit(index, k);
  }
  return digits;
}

int HilbertLayout::digit(std::size_t index, std::size_t slot) const {
  return static_cast<int>((index / strides_[slot]) %
                          static_cast<std::size_t>(subsystems_[slot].dimension));
}

// --- DenseOperator ----------------------------------------------------------

DenseOperator::DenseOperator(HilbertLayout layout, Matrix entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(layout_.dimension());
  if (entries_.rows() != d || entries_.cols() != d) {
    std::ostringstream msg;
    msg << "DenseOperator: matrix is " << entries_.rows() << "x"
        << entries_.cols() << ", layout dimension is " << d;
    throw ValidationError(msg.str());
  }
}

DenseOperator DenseOperator::zero(const HilbertLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.dimension());
  return DenseOperator(layout, Matrix::Zero(d, d));
}

DenseOperator DenseOperator::identity(const HilbertLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.dimension());
  return DenseOperator(layout, Matrix::Identity(d, d));
}

DenseOperator DenseOperator::density(HilbertLayout layout, Matrix entries) {
  DenseOperator rho(std::move(layout), std::move(entries));
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-9) {
    std::ostringstream msg;
    msg << "density matrix trace " << tr.real() << "+" << tr.imag()
        << "i deviates from 1 by more than 1e-9";
    throw ValidationError(msg.str());
  }
  const double defect = rho.hermiticity_defect();
  if (defect >= 1e-12) {
    std::ostringstream msg;
    msg << "density matrix Hermiticity defect " << defect << " >= 1e-12";
    throw ValidationError(msg.str());
  }
  rho.role_ = OperatorRole::kDensity;
  return rho;
}

DenseOperator DenseOperator::pure_state(const HilbertLayout& layout,
                                        std::size_t basis_index) {
  return density(layout, projector(layout, basis_index).matrix());
}

DenseOperator DenseOperator::projector(const HilbertLayout& layout,
                                       std::size_t basis_index) {
  if (basis_index >= layout.dimension()) {
    throw ValidationError("projector: basis index out of range");
  }
  DenseOperator p = zero(layout);
  const auto i = static_cast<Eigen::Index>(basis_index);
  p.entries_(i, i) = 1.0;
  return p;
}

DenseOperator DenseOperator::adjoint() const {
  return DenseOperator(layout_, entries_.adjoint());
}

double DenseOperator::max_abs() const {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

double DenseOperator::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DenseOperator::anti_hermiticity_defect() const {
  return (entries_ + entries_.adjoint()).cwiseAbs().maxCoeff();
}

void DenseOperator::require_same_layout(const DenseOperator& rhs,
                                        const char* op) const {
  if (!(layout_ == rhs.layout_)) {
    throw ValidationError(std::string("layout mismatch in operator ") + op);
  }
}

DenseOperator DenseOperator::operator+(const DenseOperator& rhs) const {
  require_same_layout(rhs, "+");
  return DenseOperator(layout_, entries_ + rhs.entries_);
}

DenseOperator DenseOperator::operator-(const DenseOperator& rhs) const {
  require_same_layout(rhs, "-");
  return DenseOperator(layout_, entries_ - rhs.entries_);
}

DenseOperator DenseOperator::operator*(const DenseOperator& rhs) const {
  require_same_layout(rhs, "*");
  return DenseOperator(layout_, entries_ * rhs.entries_);
}

DenseOperator DenseOperator::operator*(Complex scalar) const {
  return DenseOperator(layout_, entries_ * scalar);
}

DenseOperator DenseOperator::operator-() const {
  return DenseOperator(layout_, -entries_);
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& rhs) {
  require_same_layout(rhs, "+=");
  entries_ += rhs.entries_;
  role_ = OperatorRole::kGeneric;
  return *this;
}

// --- local operators --------------------------------------------------------

Matrix boson_annihilation(int n_max) {
  if (n_max < 1) {
    throw ValidationError("boson_annihilation: n_max must be >= 1");
  }
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Matrix boson_creation(int n_max) { return boson_annihilation(n_max).adjoint(); }

Matrix boson_number(int n_max) {
  Matrix n = Matrix::Zero(n_max + 1, n_max + 1);
  for (int k = 0; k <= n_max; ++k) n(k, k) = k;
  return n;
}

Matrix sigma_minus() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Matrix sigma_plus() { return sigma_minus().adjoint(); }

Matrix sigma_z() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

Matrix sigma_x() { return sigma_minus() + sigma_plus(); }

Matrix local_identity(int dimension) {
  return Matrix::Identity(dimension, dimension);
}

DenseOperator embed(const Matrix& local_op, std::string_view slot,
                    const HilbertLayout& layout) {
  const std::size_t k = layout.slot_index(slot);
  const int d = layout.subsystems()[k].dimension;
  if (local_op.rows() != d || local_op.cols() != d) {
    std::ostringstream msg;
    msg << "embed: local operator is " << local_op.rows() << "x"
        << local_op.cols() << " but slot '" << slot << "' has dimension " << d;
    throw ValidationError(msg.str());
  }
  const auto total = static_cast<Eigen::Index>(layout.dimension());
  Matrix out = Matrix::Zero(total, total);
  // Enumerate basis indices whose digit in slot k is zero; each is the base of
  // one copy of local_op.
  std::vector<int> digits(layout.slot_count(), 0);
  std::size_t stride = 1;
  for (std::size_t s = layout.slot_count(); s-- > k + 1;) {
    stride *= static_cast<std::size_t>(layout.subsystems()[s].dimension);
  }
  for (std::size_t base = 0; base < layout.dimension(); ++base) {
    if (layout.digit(base, k) != 0) continue;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Complex v = local_op(i, j);
        if (v == Complex(0.0, 0.0)) continue;
        out(static_cast<Eigen::Index>(base + i * stride),
            static_cast<Eigen::Index>(base + j * stride)) = v;
      }
    }
  }
  return DenseOperator(layout, std::move(out));
}

DenseOperator unitary_from_generator(const DenseOperator& generator) {
  const double defect = generator.anti_hermiticity_defect();
  if (defect >= 1e-10) {
    std::ostringstream msg;
    msg << "unitary_from_generator: generator is not anti-Hermitian (defect "
        << defect << ")";
    throw ValidationError(msg.str());
  }
  DenseOperator u(generator.layout(), matrix_exponential(generator.matrix()));
  const auto d = static_cast<Eigen::Index>(u.dimension());
  const double unitarity =
      (u.matrix().adjoint() * u.matrix() - Matrix::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  if (unitarity >= 1e-9) {
    std::ostringstream msg;
    msg << "unitary_from_generator: result not unitary (defect " << unitarity
        << ")";
    throw Error(msg.str());
  }
  return u;
}

DenseOperator conjugate(const DenseOperator& h, const DenseOperator& u) {
  if (!(h.layout() == u.layout())) {
    throw ValidationError("conjugate: layout mismatch");
  }
  return DenseOperator(h.layout(), u.matrix().adjoint() * h.matrix() * u.matrix());
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  return a * b - b * a;
}

double expectation(const DenseOperator& rho, const DenseOperator& observable) {
  if (!(rho.layout() == observable.layout())) {
    throw ValidationError("expectation: layout mismatch");
  }
  // tr(P rho) without forming the product.
  const Complex value =
      (observable.matrix().transpose().cwiseProduct(rho.matrix())).sum();
  if (std::abs(value.imag()) >= 1e-9) {
    std::ostringstream msg;
    msg << "expectation: imaginary residue " << value.imag()
        << " indicates a corrupted state";
    throw Error(msg.str());
  }
  return value.real();
}

double max_abs_difference(const DenseOperator& a, const DenseOperator& b) {
  return (a - b).max_abs();
}

Eigen::VectorXd hermitian_eigenvalues(const DenseOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian_eigenvalues: eigensolver failed");
  }
  return solver.eigenvalues();
}

}  // namespace eetsim
