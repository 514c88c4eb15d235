// Copyright 2026 The nambu-dyn Authors
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

#include "nambu/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace nambu {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) / std::numbers::sqrt2;
}

namespace {
Matrix ginibre(Rng& rng, Index d) {
  Matrix g(d, d);
  // Row-major fill order so the sample is independent of storage layout.
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
  return g;
}
}  // namespace

Matrix random_hermitian(Rng& rng, Index d, double scale) {
  const Matrix g = ginibre(rng, d);
  return scale * hermitize(g);
}

Matrix random_unitary(Rng& rng, Index d) {
  const Matrix g = ginibre(rng, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Matrix random_mixed_state(Rng& rng, Index d) {
  const Matrix g = ginibre(rng, d);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitize(rho);
}

Vector random_state_vector(Rng& rng, Index d) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

}  // namespace nambu
