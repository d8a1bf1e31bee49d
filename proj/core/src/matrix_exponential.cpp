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

// Scaling and squaring with diagonal Pade approximants of degree 3..13,
// following Higham, SIAM J. Matrix Anal. Appl. 26 (2005) 1179.

#include <array>
#include <cmath>

#include <Eigen/LU>

#include "eetsim/errors.hpp"
#include "eetsim/hilbert.hpp"

namespace eetsim {
namespace {

// Largest 1-norm for which the degree-m approximant reaches unit roundoff.
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2,
                                          2.539398330063230e-1,
                                          9.504178996162932e-1,
                                          2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kB3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kB5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kB7 = {17297280., 8648640., 1995840., 277200.,
                                       25200.,    1512.,    56.,      1.};
constexpr std::array<double, 10> kB9 = {
    17643225600., 8821612800., 2075673600., 302702400., 30270240.,
    2162160.,     110880.,     3960.,       90.,        1.};
constexpr std::array<double, 14> kB13 = {
    64764752532480000., 32382376266240000., 7771770303897600.,
    1187353796428800.,  129060195264000.,   10559470521600.,
    670442572800.,      33522128640.,       1323241920.,
    40840800.,          960960.,            16380.,
    182.,               1.};

double one_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix u_inner = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < N; j += 2) {
    v += b[j] * power;
    if (j + 1 < N) u_inner += b[j + 1] * power;
    power = power * a2;
  }
  const Matrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const auto& b = kB13;
  const Matrix u_inner =
      a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
      b[3] * a2 + b[1] * ident;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Matrix matrix_exponential(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ValidationError("matrix_exponential: matrix must be square");
  }
  const auto n = a.rows();
  if (n == 0) return a;
  const double norm = one_norm(a);
  if (!std::isfinite(norm)) {
    throw ValidationError("matrix_exponential: non-finite entries");
  }
  if (norm <= kTheta[0]) return pade_low(a, kB3);
  if (norm <= kTheta[1]) return pade_low(a, kB5);
  if (norm <= kTheta[2]) return pade_low(a, kB7);
  if (norm <= kTheta[3]) return pade_low(a, kB9);

  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  Matrix result = pade13(a / std::ldexp(1.0, squarings));
  for (int k = 0; k < squarings; ++k) {
    result = result * result;
  }
  return result;
}

}  // namespace eetsim
