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

#include <vector>

#include "nambu/error.hpp"
#include "nambu/random.hpp"
#include "nambu/tensor_identity.hpp"

namespace nambu {
namespace {

Matrix product(const std::vector<Matrix>& ops) {
  Matrix p = Matrix::Identity(ops[0].rows(), ops[0].cols());
  for (const Matrix& a : ops) p = p * a;
  return p;
}

std::vector<Matrix> random_ops(Rng& rng, Index d, int n) {
  std::vector<Matrix> ops;
  for (int i = 0; i < n; ++i) {
    Matrix m(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) m(r, c) = rng.complex_normal();
    ops.push_back(m);
  }
  return ops;
}

TEST(TraceTensor, LowerGContractsToTrace) {
  Rng rng(1);
  for (Index d : {2, 3}) {
    for (int n = 1; n <= 4; ++n) {
      const auto ops = random_ops(rng, d, n);
      const cplx v = TraceTensor::lower_g(d, n).contract_operators(ops);
      EXPECT_LT(std::abs(v - product(ops).trace()), 1e-12);
    }
  }
}

TEST(TraceTensor, LowerGStarReversesOrder) {
  Rng rng(2);
  const auto ops = random_ops(rng, 3, 3);
  const std::vector<Matrix> rev{ops[2], ops[1], ops[0]};
  EXPECT_LT(std::abs(TraceTensor::lower_gstar(3, 3).contract_operators(ops) - product(rev).trace()), 1e-12);
}

TEST(TraceTensor, RaisingAllSlotsOfLowerGGivesUpperG) {
  for (Index d : {2, 3}) {
    TraceTensor t = TraceTensor::lower_g(d, 3);
    for (int s = 0; s < 3; ++s) t = t.swap_pair(s);
    EXPECT_EQ(t.max_abs_diff(TraceTensor::upper_g(d, 3)), 0.0);
    EXPECT_EQ(TraceTensor::upper_g(d, 3).max_abs_diff(TraceTensor::lower_gstar(d, 3)), 0.0);
  }
}

TEST(TraceTensor, CyclicPermutationInvariant) {
  const TraceTensor g = TraceTensor::lower_g(3, 4);
  EXPECT_EQ(g.max_abs_diff(g.permuted({1, 2, 3, 0})), 0.0);
  EXPECT_GT(g.max_abs_diff(g.permuted({1, 0, 2, 3})), 0.5);
}

TEST(TraceTensor, GluingTwoChainsMerges) {
  // g_{a1 a2 x} g^{x}_{b1 b2} summed over x equals g_{a1 a2 b1 b2}.
  const Index d = 2;
  const TraceTensor left = TraceTensor::lower_g(d, 3);
  const TraceTensor right = TraceTensor::lower_g(d, 3).swap_pair(0);
  const TraceTensor glued = left.contract(2, right, 0);
  EXPECT_LT(glued.max_abs_diff(TraceTensor::lower_g(d, 4)), 1e-14);
}

TEST(TraceTensor, EvenAntisymmetrizationVanishes) {
  for (Index d : {2, 3}) {
    EXPECT_LT(TraceTensor::lower_g(d, 2).antisymmetrized({0, 1}).max_abs(), 1e-14);
    EXPECT_LT(TraceTensor::lower_g(d, 4).antisymmetrized({0, 1, 2, 3}).max_abs(), 1e-14);
  }
}

TEST(TraceTensor, OddAntisymmetrizationSurvives) {
  EXPECT_GT(TraceTensor::lower_g(2, 3).antisymmetrized({0, 1, 2}).max_abs(), 0.1);
}

TEST(Harness, AllIdentitiesAtSmallDims) {
  for (TensorIdentity id : kAllTensorIdentities) {
    for (Index d : {2, 3}) {
      for (std::uint64_t seed : {1u, 2u}) {
        EXPECT_LE(verify_tensor_identity({id, d, seed}), 1e-10) << to_string(id) << " d=" << d;
      }
    }
  }
}

TEST(Harness, CyclicityExample) { EXPECT_LE(verify_tensor_identity({TensorIdentity::Cyclicity, 3, 7}), 1e-12); }

TEST(Harness, NamesRoundTrip) {
  for (TensorIdentity id : kAllTensorIdentities) {
    const auto back = tensor_identity_from_string(to_string(id));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, id);
  }
  EXPECT_FALSE(tensor_identity_from_string("jacobi").has_value());
}

TEST(Harness, RejectsDimensionOutOfRange) {
  EXPECT_THROW(verify_tensor_identity({TensorIdentity::Cyclicity, 1, 0}), Error);
  EXPECT_THROW(verify_tensor_identity({TensorIdentity::Cyclicity, 9, 0}), Error);
}

}  // namespace
}  // namespace nambu
