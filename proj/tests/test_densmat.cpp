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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nambu/densmat.hpp"
#include "nambu/error.hpp"
#include "nambu/matrix_io.hpp"
#include "nambu/random.hpp"

namespace nambu {
namespace {

// Partial trace by explicit multi-index loops.
Matrix partial_trace_oracle(const Matrix& m, const std::vector<Index>& dims, std::size_t keep) {
  const std::size_t n = dims.size();
  const Index total = total_dim(dims);
  Matrix out = Matrix::Zero(dims[keep], dims[keep]);
  auto digits = [&](Index flat) {
    std::vector<Index> d(n);
    for (std::size_t s = n; s-- > 0;) {
      d[s] = flat % dims[s];
      flat /= dims[s];
    }
    return d;
  };
  for (Index i = 0; i < total; ++i) {
    for (Index j = 0; j < total; ++j) {
      const auto a = digits(i);
      const auto b = digits(j);
      bool same = true;
      for (std::size_t s = 0; s < n; ++s)
        if (s != keep && a[s] != b[s]) same = false;
      if (same) out(a[keep], b[keep]) += m(i, j);
    }
  }
  return out;
}

Matrix random_matrix(Rng& rng, Index r, Index c) {
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
  return m;
}

TEST(PartialTrace, MatchesIndexLoops) {
  Rng rng(1);
  const std::vector<std::vector<Index>> shapes{{2, 3}, {3, 2}, {2, 2, 2}, {3, 2, 2}, {2, 3, 2}};
  for (const auto& dims : shapes) {
    const Matrix m = random_matrix(rng, total_dim(dims), total_dim(dims));
    for (std::size_t k = 0; k < dims.size(); ++k) {
      EXPECT_LT(max_abs(partial_trace(m, dims, k) - partial_trace_oracle(m, dims, k)), 1e-13);
    }
  }
}

TEST(PartialTrace, ProductStateFactorizes) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix a(random_mixed_state(rng, 2));
    const DensityMatrix b(random_mixed_state(rng, 3));
    const DensityMatrix ab = tensor_product(a, b);
    const std::vector<Index> dims{2, 3};
    EXPECT_LT(max_abs(partial_trace(ab, dims, 0).matrix() - a.matrix()), 1e-14);
    EXPECT_LT(max_abs(partial_trace(ab, dims, 1).matrix() - b.matrix()), 1e-14);
  }
}

TEST(PartialTrace, RejectsBadShapes) {
  const Matrix m = Matrix::Identity(6, 6);
  const std::vector<Index> dims{2, 2};
  EXPECT_THROW(partial_trace(m, dims, 0), Error);
  const std::vector<Index> ok{2, 3};
  EXPECT_THROW(partial_trace(m, ok, 2), Error);
}

TEST(Kron, MostSignificantFirst) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const Matrix b = Matrix::Identity(2, 2);
  const Matrix k = kron(a, b);
  EXPECT_EQ(k(0, 2), cplx(2.0));
  EXPECT_EQ(k(1, 3), cplx(2.0));
  EXPECT_EQ(k(2, 0), cplx(3.0));
  EXPECT_EQ(k(0, 1), cplx(0.0));
}

TEST(Lift, ApplyMatchesDenseProduct) {
  Rng rng(3);
  const std::vector<Index> dims{2, 3, 4};
  const Index n = total_dim(dims);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const Matrix op = random_matrix(rng, dims[k], dims[k]);
    const Matrix m = random_matrix(rng, n, n);
    const Matrix l = lift(op, dims, k);
    EXPECT_LT(max_abs(apply_lifted_left(op, dims, k, m) - l * m), 1e-12);
    EXPECT_LT(max_abs(apply_lifted_right(m, op, dims, k) - m * l), 1e-12);
  }
}

TEST(Lift, EqualsExplicitKron) {
  Rng rng(4);
  const Matrix op = random_matrix(rng, 3, 3);
  const std::vector<Index> dims{2, 3, 2};
  const Matrix expected = kron(kron(Matrix::Identity(2, 2), op), Matrix::Identity(2, 2));
  EXPECT_LT(max_abs(lift(op, dims, 1) - expected), 1e-15);
}

TEST(Casimir, EqualsEigenvaluePowerSums) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho(random_mixed_state(rng, 4));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    for (int k = 1; k <= 6; ++k) {
      const double expected = es.eigenvalues().array().pow(k).sum();
      EXPECT_NEAR(casimir(rho, k), expected, 1e-14);
    }
  }
}

TEST(Casimir, PureStatesHaveUnitCasimirs) {
  Rng rng(6);
  const DensityMatrix rho = DensityMatrix::pure(random_state_vector(rng, 5));
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(casimir(rho, k), 1.0, 1e-13);
}

TEST(DensityMatrix, RejectsNonHermitian) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = 1.0;
  try {
    DensityMatrix rho(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonHermitianInput);
  }
}

TEST(DensityMatrix, MaximallyMixed) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
  EXPECT_NEAR(rho.min_eigenvalue(), 0.25, 1e-15);
}

TEST(Spectrum, SortedDescending) {
  Rng rng(7);
  const DensityMatrix rho(random_mixed_state(rng, 6));
  const RealVector e = spectrum(rho).eigenvalues;
  for (Index i = 1; i < e.size(); ++i) EXPECT_GE(e(i - 1), e(i));
  EXPECT_NEAR(e.sum(), 1.0, 1e-13);
}

TEST(Random, SameSeedSameDraws) {
  Rng a(42);
  Rng b(42);
  EXPECT_EQ(random_hermitian(a, 3), random_hermitian(b, 3));
  EXPECT_EQ(random_mixed_state(a, 3), random_mixed_state(b, 3));
}

TEST(Random, UniformFollowsDocumentedFormula) {
  std::mt19937_64 engine(9);
  Rng rng(9);
  for (int i = 0; i < 5; ++i) {
    const double expected = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    EXPECT_EQ(rng.uniform(), expected);
  }
}

TEST(Random, SamplesSatisfyInvariants) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix u = random_unitary(rng, 4);
    EXPECT_LT(max_abs(u.adjoint() * u - Matrix::Identity(4, 4)), 1e-13);
    const Matrix rho = random_mixed_state(rng, 4);
    EXPECT_LT(hermiticity_defect(rho), 1e-15);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_GT(DensityMatrix(rho).min_eigenvalue(), 0.0);
    EXPECT_NEAR(random_state_vector(rng, 4).norm(), 1.0, 1e-14);
  }
}

TEST(Pauli, Algebra) {
  const Matrix xy = pauli::x() * pauli::y();
  EXPECT_LT(max_abs(xy - kI * pauli::z()), 1e-15);
  EXPECT_LT(max_abs(pauli::x() * pauli::x() - pauli::identity()), 1e-15);
}

TEST(MatrixIo, AcceptsAllEntryForms) {
  const nlohmann::json j = nlohmann::json::parse(R"([[1, [0, -1]], [{"re": 0, "im": 1}, {"re": 2}]])");
  const Matrix m = matrix_from_json(j);
  EXPECT_EQ(m(0, 1), cplx(0, -1));
  EXPECT_EQ(m(1, 0), cplx(0, 1));
  EXPECT_EQ(m(1, 1), cplx(2, 0));
}

TEST(MatrixIo, RoundTrip) {
  Rng rng(11);
  const Matrix m = random_matrix(rng, 3, 3);
  EXPECT_EQ(matrix_from_json(to_json(m)), m);
}

TEST(MatrixIo, ErrorsNameThePath) {
  const auto bad = nlohmann::json::parse(R"([[1, 2], [3]])");
  try {
    matrix_from_json(bad, "state.matrix");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Validation);
    EXPECT_NE(std::string(e.what()).find("state.matrix"), std::string::npos);
  }
}

}  // namespace
}  // namespace nambu
