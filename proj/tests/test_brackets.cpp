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

#include <algorithm>
#include <numbers>
#include <numeric>
#include <vector>

#include "nambu/brackets.hpp"
#include "nambu/error.hpp"
#include "nambu/random.hpp"

namespace nambu {
namespace {

int inversion_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

// Antisymmetrized product with signs from inversion counts.
Matrix antisym_oracle(const std::vector<Matrix>& ops) {
  std::vector<int> p(ops.size());
  std::iota(p.begin(), p.end(), 0);
  Matrix sum = Matrix::Zero(ops[0].rows(), ops[0].cols());
  do {
    Matrix prod = Matrix::Identity(ops[0].rows(), ops[0].cols());
    for (int i : p) prod = prod * ops[static_cast<std::size_t>(i)];
    sum += static_cast<double>(inversion_sign(p)) * prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Validation;
}

// Finite-difference gradient of S(rho) along a Hermitian basis.
Matrix fd_gradient(const Generator& g, const Matrix& rho, double h = 1e-6) {
  const Index d = rho.rows();
  Matrix grad = Matrix::Zero(d, d);
  for (const Matrix& e : hermitian_basis(d)) {
    const cplx ds = (g.value(rho + h * e) - g.value(rho - h * e)) / (2.0 * h);
    grad += ds * e;
  }
  return grad;
}

TEST(Antisym, TwoIsCommutator) {
  Rng rng(1);
  const Matrix a = random_hermitian(rng, 3);
  const Matrix b = random_hermitian(rng, 3);
  const std::vector<Matrix> ops{a, b};
  EXPECT_LT(max_abs(antisym_product(ops) - (a * b - b * a)), 1e-14);
}

TEST(Antisym, MatchesInversionSignOracle) {
  Rng rng(2);
  for (int k : {2, 4, 6}) {
    std::vector<Matrix> ops;
    for (int i = 0; i < k; ++i) ops.push_back(random_hermitian(rng, 3));
    EXPECT_LT(max_abs(antisym_product(ops) - antisym_oracle(ops)), 1e-10 * std::max(1.0, max_abs(antisym_oracle(ops))));
  }
}

TEST(Antisym, OddCountRejected) {
  const std::vector<Matrix> ops(3, Matrix::Identity(2, 2));
  EXPECT_EQ(code_of([&] { antisym_product(ops); }), ErrorCode::OddCount);
}

TEST(Antisym, RepeatedArgumentVanishes) {
  Rng rng(3);
  const Matrix a = random_hermitian(rng, 3);
  const Matrix b = random_hermitian(rng, 3);
  const Matrix c = random_hermitian(rng, 3);
  const std::vector<Matrix> ops{a, b, a, c};
  EXPECT_LT(max_abs(antisym_product(ops)), 1e-12);
}

TEST(BracketSpec, ArityValidation) {
  const std::vector<Generator> g2{Generator::casimir(2, 0.5), Generator::casimir(2, 0.5)};
  EXPECT_EQ(code_of([&] { BracketSpec(4, g2); }), ErrorCode::InvalidBracket);
  EXPECT_EQ(code_of([&] { BracketSpec(1, {}); }), ErrorCode::InvalidBracket);
  EXPECT_EQ(code_of([&] { BracketSpec(3, {g2[0]}); }), ErrorCode::InvalidBracket);
  try {
    BracketSpec::validate_arity(4);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("even arity"), std::string::npos);
  }
}

TEST(BracketSpec, DefaultZByArity) {
  EXPECT_EQ(BracketSpec::default_z(3), cplx(0, -1));
  EXPECT_EQ(BracketSpec::default_z(5), cplx(1, 0));
  EXPECT_EQ(BracketSpec::default_z(7), cplx(0, -1));
  EXPECT_EQ(BracketSpec::default_z(9), cplx(1, 0));
}

TEST(BracketSpec, RejectsWrongPhase) {
  const std::vector<Generator> g{Generator::casimir(2, 0.5), Generator::casimir(3, 1.0)};
  EXPECT_EQ(code_of([&] { BracketSpec(3, g, cplx(1.0, 0.0)); }), ErrorCode::InvalidBracket);
}

TEST(EomRhs, ThreeBracketIsLiouvilleVonNeumann) {
  Rng rng(4);
  const Matrix h = random_hermitian(rng, 4);
  const Matrix rho = random_mixed_state(rng, 4);
  const BracketSpec spec = BracketSpec::three(Operator(h), Generator::casimir(2, 0.5));
  EXPECT_LT(max_abs(eom_rhs(spec, rho) - (-kI) * (h * rho - rho * h)), 1e-14);
}

TEST(EomRhs, HigherCasimirGivesPowerCommutator) {
  Rng rng(5);
  const Matrix h = random_hermitian(rng, 3);
  const Matrix rho = random_mixed_state(rng, 3);
  const Matrix r3 = rho * rho * rho;
  const BracketSpec spec = BracketSpec::three(Operator(h), Generator::casimir(4, 0.25));
  EXPECT_LT(max_abs(eom_rhs(spec, rho) - (-kI) * (h * r3 - r3 * h)), 1e-14);
}

TEST(EomRhs, HermitianForHermitianInput) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const BracketSpec spec = BracketSpec::five(Operator(random_hermitian(rng, 4)), Operator(random_hermitian(rng, 4)),
                                               Generator::casimir(2, 0.5), Generator::casimir(3, 1.0 / 3.0));
    EXPECT_LT(hermiticity_defect(eom_rhs(spec, random_mixed_state(rng, 4))), 1e-13);
  }
}

TEST(EomRhs, TracelessAndRankPreservingDirection) {
  Rng rng(7);
  const BracketSpec spec = BracketSpec::three(Operator(random_hermitian(rng, 4)), Generator::casimir(3, 1.0));
  const Matrix r = eom_rhs(spec, random_mixed_state(rng, 4));
  EXPECT_LT(std::abs(r.trace()), 1e-14);
}

TEST(ScalarBracket, FullAndReducedAgree) {
  Rng rng(8);
  for (int n : {3, 5}) {
    std::vector<Generator> g;
    for (int i = 0; i < n - 1; ++i) g.push_back(Generator::linear(Operator(random_hermitian(rng, 3))));
    g.push_back(Generator::casimir(3, 1.0 / 3.0));
    const Matrix rho = random_mixed_state(rng, 3);
    EXPECT_LT(std::abs(scalar_bracket(g, rho, BracketFormula::Full) - scalar_bracket(g, rho, BracketFormula::Reduced)),
              1e-13);
  }
}

TEST(ScalarBracket, ConsistentWithEquationOfMotion) {
  // dF/dt = Tr(grad F * rhs) = z {F, X_1, ..., X_{n-1}}.
  Rng rng(9);
  const Generator f = Generator::linear(Operator(random_hermitian(rng, 4)));
  const Operator h(random_hermitian(rng, 4));
  const BracketSpec spec = BracketSpec::three(h, Generator::casimir(3, 1.0 / 3.0));
  const Matrix rho = random_mixed_state(rng, 4);
  std::vector<Generator> gens{f};
  for (const Generator& g : spec.generators()) gens.push_back(g);
  const cplx lhs = (f.gradient(rho) * eom_rhs(spec, rho)).trace();
  EXPECT_LT(std::abs(lhs - spec.z() * scalar_bracket(gens, rho)), 1e-13);
}

TEST(ScalarBracket, TotallyAntisymmetric) {
  Rng rng(10);
  std::vector<Generator> g{Generator::linear(Operator(random_hermitian(rng, 3))),
                           Generator::linear(Operator(random_hermitian(rng, 3))), Generator::casimir(3, 1.0)};
  const Matrix rho = random_mixed_state(rng, 3);
  const cplx v = scalar_bracket(g, rho);
  std::swap(g[0], g[2]);
  EXPECT_LT(std::abs(scalar_bracket(g, rho) + v), 1e-13);
}

TEST(Generator, GradientMatchesFiniteDifference) {
  Rng rng(11);
  CasimirPolynomial p;
  p.add_term({0, 1, 1}, 0.7);
  p.add_term({0, 0, 0, 2}, -0.3);
  const Generator g = Generator::polynomial(p) + Generator::linear(Operator(random_hermitian(rng, 3)));
  const Matrix rho = random_mixed_state(rng, 3);
  EXPECT_LT(max_abs(g.gradient(rho) - fd_gradient(g, rho)), 1e-8);
}

TEST(CasimirSaturation, CasimirHeavyBracketsVanish) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 ? 5 : 3;
    const Index d = 2 + trial % 4;
    const int q = (n + 1) / 2;
    std::vector<int> orders;
    for (int i = 0; i < q; ++i) orders.push_back(1 + static_cast<int>(rng.uniform() * 5));
    std::vector<Generator> fillers;
    for (int i = 0; i < n - q; ++i) fillers.push_back(Generator::linear(Operator(random_hermitian(rng, d))));
    EXPECT_LT(casimir_saturation_check(n, orders, DensityMatrix(random_mixed_state(rng, d)), fillers), 1e-10);
  }
}

TEST(Jacobi, HoldsForQuadraticEntropy) {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Generator a = Generator::linear(Operator(random_hermitian(rng, 3)));
    const Generator b = Generator::linear(Operator(random_hermitian(rng, 3)));
    const Generator c = Generator::linear(Operator(random_hermitian(rng, 3)));
    const DensityMatrix rho(random_mixed_state(rng, 3));
    EXPECT_LT(std::abs(jacobi_defect(Generator::casimir(2, 0.5), a, b, c, rho)), 1e-7);
  }
}

TEST(Jacobi, FailsForCubicEntropy) {
  Rng rng(3);
  const Generator a = Generator::linear(Operator(random_hermitian(rng, 3)));
  const Generator b = Generator::linear(Operator(random_hermitian(rng, 3)));
  const Generator c = Generator::linear(Operator(random_hermitian(rng, 3)));
  const DensityMatrix rho(random_mixed_state(rng, 3));
  EXPECT_GT(std::abs(jacobi_defect(Generator::casimir(3, 1.0 / 3.0), a, b, c, rho)), 1e-6);
}

TEST(HermitianBasis, Orthonormal) {
  const auto basis = hermitian_basis(3);
  ASSERT_EQ(basis.size(), 9u);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      EXPECT_NEAR(std::abs((basis[i] * basis[j]).trace()), i == j ? 1.0 : 0.0, 1e-14);
}

TEST(Duality, RotationInvariant) {
  Rng rng(14);
  const Generator f = Generator::linear(Operator(random_hermitian(rng, 3)));
  const Generator h = Generator::linear(Operator(random_hermitian(rng, 3)));
  const Generator s = Generator::casimir(3, 1.0 / 3.0);
  const DensityMatrix rho(random_mixed_state(rng, 3));
  const std::vector<Generator> base{f, h, s};
  const cplx v0 = scalar_bracket(base, rho);
  for (double alpha : {0.3, 1.1, std::numbers::pi, 5.0}) {
    const auto [hr, sr] = duality_rotate(h, s, alpha);
    const std::vector<Generator> g{f, hr, sr};
    EXPECT_LT(std::abs(scalar_bracket(g, rho) - v0), 1e-12);
  }
}

}  // namespace
}  // namespace nambu
