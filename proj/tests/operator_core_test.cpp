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
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "eetsim/errors.hpp"
#include "eetsim/hilbert.hpp"

namespace eetsim {
namespace {

Matrix random_matrix(int n, std::uint32_t seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  }
  return m;
}

TEST(HilbertLayout, CircuitDimensions) {
  EXPECT_EQ(HilbertLayout::circuit(1).dimension(), 64u);
  EXPECT_EQ(HilbertLayout::circuit(2).dimension(), 144u);
  EXPECT_EQ(HilbertLayout::circuit(3).dimension(), 256u);
  EXPECT_EQ(HilbertLayout::qubits().dimension(), 16u);
  EXPECT_THROW(HilbertLayout::circuit(0), ValidationError);
}

TEST(HilbertLayout, FirstSlotIsMostSignificant) {
  const HilbertLayout layout = HilbertLayout::circuit(2);
  const int digits[] = {1, 0, 0, 0, 0, 0};
  EXPECT_EQ(layout.index_of(digits), 72u);
  const int ra[] = {0, 0, 0, 0, 1, 0};
  EXPECT_EQ(layout.index_of(ra), 3u);
  for (std::size_t i = 0; i < layout.dimension(); i += 7) {
    const auto d = layout.digits_of(i);
    EXPECT_EQ(layout.index_of(d), i);
  }
}

TEST(HilbertLayout, RejectsBadSlots) {
  EXPECT_THROW(HilbertLayout({}), ValidationError);
  EXPECT_THROW(HilbertLayout({{"x", 0}}), ValidationError);
  EXPECT_THROW(HilbertLayout({{"x", 2}, {"x", 2}}), ValidationError);
  EXPECT_THROW(HilbertLayout::circuit(1).slot_index("Rc"), ValidationError);
}

TEST(LocalOperators, BosonLadder) {
  const Matrix a = boson_annihilation(3);
  EXPECT_NEAR(std::abs(a(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(a(2, 3)), std::sqrt(3.0), 1e-15);
  EXPECT_LT((boson_creation(3) - a.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((a.adjoint() * a - boson_number(3)).cwiseAbs().maxCoeff(), 1e-14);
  // [a, a^dagger] = 1 except in the truncated corner.
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < 3; ++n) EXPECT_NEAR(c(n, n).real(), 1.0, 1e-14);
  EXPECT_NEAR(c(3, 3).real(), -3.0, 1e-14);
}

TEST(LocalOperators, PauliConventions) {
  // |g> = index 0, |e> = index 1.
  EXPECT_EQ(sigma_z()(0, 0), Complex(-1.0));
  EXPECT_EQ(sigma_z()(1, 1), Complex(1.0));
  EXPECT_EQ(sigma_minus()(0, 1), Complex(1.0));
  EXPECT_LT((sigma_plus() * sigma_minus() - 0.5 * (sigma_z() + local_identity(2)))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  EXPECT_LT((sigma_x() - sigma_plus() - sigma_minus()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Embed, MatchesKroneckerProduct) {
  const HilbertLayout layout({{"A", 2}, {"B", 3}, {"C", 2}});
  const Matrix a = boson_annihilation(2);
  const Matrix i2 = local_identity(2);
  Matrix expected = Eigen::kroneckerProduct(i2, Eigen::kroneckerProduct(a, i2)).eval();
  EXPECT_LT((embed(a, "B", layout).matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(embed(a, "A", layout), ValidationError);
}

TEST(DenseOperator, DensityValidation) {
  const HilbertLayout layout({{"q", 2}});
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  EXPECT_TRUE(DenseOperator::density(layout, m).is_density());
  m(1, 1) = 0.6;
  EXPECT_THROW(DenseOperator::density(layout, m), ValidationError);
  m(1, 1) = 0.5;
  m(0, 1) = 0.1;
  EXPECT_THROW(DenseOperator::density(layout, m), ValidationError);
}

TEST(DenseOperator, LayoutMismatchThrows) {
  const auto a = DenseOperator::identity(HilbertLayout({{"q", 2}}));
  const auto b = DenseOperator::identity(HilbertLayout({{"r", 2}}));
  EXPECT_THROW(a + b, ValidationError);
  EXPECT_THROW(a * b, ValidationError);
}

TEST(DenseOperator, ExpectationOfProjector) {
  const HilbertLayout layout = HilbertLayout::circuit(1);
  const auto rho = DenseOperator::pure_state(layout, 5);
  EXPECT_DOUBLE_EQ(expectation(rho, DenseOperator::projector(layout, 5)), 1.0);
  EXPECT_DOUBLE_EQ(expectation(rho, DenseOperator::projector(layout, 6)), 0.0);
}

// Independent oracle: Eigen's unsupported MatrixFunctions module.
TEST(MatrixExponential, AgreesWithEigenMatrixFunctions) {
  for (double scale : {1e-3, 0.3, 2.0, 25.0}) {
    const Matrix a = random_matrix(12, 7, scale);
    const Matrix expected = a.exp();
    const double err = (matrix_exponential(a) - expected).cwiseAbs().maxCoeff();
    EXPECT_LT(err, 1e-11 * std::max(1.0, expected.cwiseAbs().maxCoeff())) << scale;
  }
}

TEST(MatrixExponential, ClosedForms) {
  // exp of a rotation generator.
  Matrix g(2, 2);
  const double theta = 0.7;
  g << 0.0, -theta, theta, 0.0;
  const Matrix r = matrix_exponential(g);
  EXPECT_NEAR(r(0, 0).real(), std::cos(theta), 1e-15);
  EXPECT_NEAR(r(1, 0).real(), std::sin(theta), 1e-15);
  // Nilpotent: exp(N) = I + N.
  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  const Matrix e = matrix_exponential(n);
  EXPECT_NEAR(e(0, 2).real(), 3.0, 1e-14);
  EXPECT_EQ(matrix_exponential(Matrix::Zero(4, 4)), Matrix::Identity(4, 4));
}

TEST(UnitaryFromGenerator, RejectsNonAntiHermitian) {
  const HilbertLayout layout({{"q", 2}});
  Matrix s = random_matrix(2, 3);
  EXPECT_THROW(unitary_from_generator(DenseOperator(layout, s)), ValidationError);
  const Matrix anti = s - s.adjoint();
  const auto u = unitary_from_generator(DenseOperator(layout, anti));
  EXPECT_LT((u.matrix().adjoint() * u.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(),
            1e-13);
}

TEST(Commutator, AnnihilationAndNumber) {
  const HilbertLayout layout({{"r", 5}});
  const auto a = embed(boson_annihilation(4), "r", layout);
  const auto n = embed(boson_number(4), "r", layout);
  EXPECT_LT(max_abs_difference(commutator(a, n), a), 1e-14);
}

TEST(HermitianEigenvalues, Ascending) {
  const HilbertLayout layout({{"q", 2}});
  const auto z = DenseOperator(layout, sigma_z());
  const Eigen::VectorXd ev = hermitian_eigenvalues(z);
  EXPECT_DOUBLE_EQ(ev(0), -1.0);
  EXPECT_DOUBLE_EQ(ev(1), 1.0);
}

}  // namespace
}  // namespace eetsim
