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

#include "nambu/error.hpp"
#include "nambu/multiparticle.hpp"
#include "nambu/random.hpp"

namespace nambu {
namespace {

IntegratorConfig config(double dt, double t_end) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

Matrix hadamard() {
  Matrix u(2, 2);
  u << 1.0, 1.0, 1.0, -1.0;
  return u / std::sqrt(2.0);
}

// dC_2(Tr_2 rho)/dt from the literal right-hand side -i[H_1 x I, rho^2].
double rate_oracle(const Matrix& rho, const Matrix& h1) {
  const std::vector<Index> dims{2, 2};
  const Matrix htot = kron(h1, Matrix::Identity(2, 2));
  const Matrix r2 = rho * rho;
  const Matrix rdot = -kI * (htot * r2 - r2 * htot);
  return 2.0 * (partial_trace(rho, dims, 0) * partial_trace(rdot, dims, 0)).trace().real();
}

TEST(Extension, MatchesDenseCommutator) {
  Rng rng(1);
  const std::vector<Index> dims{2, 3};
  const Matrix h1 = random_hermitian(rng, 2);
  const Matrix h2 = random_hermitian(rng, 3);
  const CompositeSystem sys{dims, {HamiltonianMap::anticommutator(Operator(h1)), HamiltonianMap::constant(Operator(h2))}};
  const Matrix rho = random_mixed_state(rng, 6);
  const Matrix r1 = partial_trace(rho, dims, 0);
  const Matrix htot = kron(h1 * r1 + r1 * h1, Matrix::Identity(3, 3)) + kron(Matrix::Identity(2, 2), h2);
  EXPECT_LT(max_abs(extend_rhs(sys, rho) - (-kI) * (htot * rho - rho * htot)), 1e-13);
}

TEST(Extension, ValidatesShapes) {
  const CompositeSystem one{{2}, {HamiltonianMap::constant(Operator(pauli::z()))}};
  EXPECT_THROW(one.validate(), Error);
  const CompositeSystem sys{{2, 2},
                            {HamiltonianMap::constant(Operator(pauli::z())), HamiltonianMap::constant(Operator(pauli::x()))}};
  EXPECT_THROW(extend_rhs(sys, Matrix::Identity(3, 3)), Error);
}

TEST(Separability, NonlinearSubsystemsOnEntangledState) {
  Rng rng(2);
  const std::vector<Index> dims{2, 3};
  const CompositeSystem sys{dims,
                            {HamiltonianMap::anticommutator(Operator(random_hermitian(rng, 2))),
                             HamiltonianMap::anticommutator(Operator(random_hermitian(rng, 3)))}};
  const DensityMatrix rho = DensityMatrix::pure(random_state_vector(rng, 6));
  for (std::size_t k : {0u, 1u}) EXPECT_LT(separability_defect(sys, rho, k, config(1e-2, 0.5)), 1e-12);
}

TEST(Separability, ThreeSubsystems) {
  Rng rng(3);
  const std::vector<Index> dims{2, 2, 2};
  std::vector<HamiltonianMap> maps;
  for (int i = 0; i < 3; ++i) maps.push_back(HamiltonianMap::anticommutator(Operator(random_hermitian(rng, 2))));
  const CompositeSystem sys{dims, maps};
  const DensityMatrix rho(random_mixed_state(rng, 8));
  EXPECT_LT(separability_defect(sys, rho, 1, config(1e-2, 0.3)), 1e-12);
}

TEST(BigBrother, RateMatchesOracles) {
  Rng rng(4);
  const std::vector<Index> dims{2, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h1 = random_hermitian(rng, 2);
    const DensityMatrix rho(random_mixed_state(rng, 4));
    const BigBrotherResult r = big_brother_rate(rho, dims, Operator(h1));
    EXPECT_NEAR(r.rate, rate_oracle(rho.matrix(), h1), 1e-13);
    EXPECT_LT(r.rel_error, 1e-5);
    ASSERT_TRUE(r.fitted_constant.has_value());
    EXPECT_LT(std::abs(*r.fitted_constant - cplx(0.0, -2.0)), 1e-5);
  }
}

TEST(BigBrother, SecondHamiltonianDoesNotChangeRate) {
  Rng rng(5);
  const std::vector<Index> dims{2, 2};
  const Operator h1(random_hermitian(rng, 2));
  const Operator h2(random_hermitian(rng, 2));
  const DensityMatrix rho(random_mixed_state(rng, 4));
  EXPECT_NEAR(big_brother_rate(rho, dims, h1).rate, big_brother_rate(rho, dims, h1, h2).rate, 1e-14);
}

TEST(BigBrother, VanishesOnProductAndSinglet) {
  Rng rng(6);
  const std::vector<Index> dims{2, 2};
  const Operator h1(random_hermitian(rng, 2));
  const DensityMatrix product =
      tensor_product(DensityMatrix(random_mixed_state(rng, 2)), DensityMatrix(random_mixed_state(rng, 2)));
  EXPECT_LT(std::abs(big_brother_rate(product, dims, h1).rate), 1e-12);
  EXPECT_LT(std::abs(big_brother_rate(singlet_state(), dims, h1).rate), 1e-12);
}

TEST(BigBrother, CorrelatedStateWithMixedMarginalHasZeroRate) {
  // Tr_2 of this state is I/2, so the commutator in the rate vanishes.
  Rng rng(7);
  const BigBrotherResult r = big_brother_rate(bb_correlated_state(), std::vector<Index>{2, 2},
                                              Operator(random_hermitian(rng, 2)));
  EXPECT_LT(std::abs(r.rate), 1e-14);
  EXPECT_LT(max_abs(partial_trace(bb_correlated_state().matrix(), std::vector<Index>{2, 2}, 0) -
                    0.5 * Matrix::Identity(2, 2)),
            1e-15);
}

TEST(States, NamedStatesAreValid) {
  for (const DensityMatrix& rho : {bb_correlated_state(), singlet_state(), bell_phi_plus()}) {
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
    EXPECT_GT(rho.min_eigenvalue(), -1e-15);
  }
  EXPECT_NEAR(casimir(singlet_state(), 2), 1.0, 1e-15);
}

TEST(Gisin, BlockExtensionOfLinearFlowIsBasisIndependent) {
  Rng rng(8);
  const std::vector<Index> dims{2, 2};
  const Matrix h = random_hermitian(rng, 2);
  const Rhs linear = [h](const Matrix& a) -> Matrix { return -kI * (h * a - a * h); };
  const Matrix rho = random_mixed_state(rng, 4);
  const Matrix a = gisin_extension(linear, rho, dims, Matrix::Identity(2, 2), 0.2, 1e-3);
  const Matrix b = gisin_extension(linear, rho, dims, hadamard(), 0.2, 1e-3);
  EXPECT_LT(frobenius_distance(a, b), 1e-12);
}

TEST(Gisin, NonlinearBlockExtensionDependsOnBasis) {
  Rng rng(11);
  const std::vector<Index> dims{2, 2};
  const Matrix rho = DensityMatrix::pure(random_state_vector(rng, 4)).matrix();
  const Matrix h = random_hermitian(rng, 2);
  const Rhs flow = [h](const Matrix& a) -> Matrix {
    const Matrix a2 = a * a;
    return -kI * (h * a2 - a2 * h);
  };
  const Matrix a = gisin_extension(flow, rho, dims, Matrix::Identity(2, 2), 0.1, 1e-3);
  const Matrix b = gisin_extension(flow, rho, dims, hadamard(), 0.1, 1e-3);
  EXPECT_GT(frobenius_distance(a, b), 1e-3);
}

TEST(Gisin, LiePoissonExtensionIsBasisIndependent) {
  Rng rng(9);
  const std::vector<Index> dims{2, 2};
  const CompositeSystem sys{dims, {HamiltonianMap::anticommutator(Operator(random_hermitian(rng, 2))),
                                   HamiltonianMap::constant(Operator::zero(2))}};
  const Matrix rho = random_mixed_state(rng, 4);
  const Matrix a = rotated_composite_evolution(sys, rho, Matrix::Identity(2, 2), 0.1, 1e-3);
  const Matrix b = rotated_composite_evolution(sys, rho, random_unitary(rng, 2), 0.1, 1e-3);
  EXPECT_LT(frobenius_distance(a, b), 1e-12);
}

TEST(DualScheme, ConservesSubsystemEnergiesAndGlobalCasimirs) {
  Rng rng(10);
  const std::vector<Index> dims{2, 2};
  const DualSchemeReport r =
      dual_scheme_run(Operator(random_hermitian(rng, 2)), Operator(random_hermitian(rng, 2)),
                      Generator::casimir(3, 1.0 / 3.0), DensityMatrix(random_mixed_state(rng, 4)), dims, config(1e-3, 1.0));
  EXPECT_LT(r.energy_drift_1, 1e-10);
  EXPECT_LT(r.energy_drift_2, 1e-10);
  EXPECT_LT(r.c1_sub_drift, 1e-12);
  EXPECT_LT(r.global_casimir_drift, 1e-10);
  EXPECT_GT(r.c2_sub_variation, 1e-6);
}

}  // namespace
}  // namespace nambu
