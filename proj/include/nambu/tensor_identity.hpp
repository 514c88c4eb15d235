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

// Numerical harness for the trace-tensor identities behind the brackets.
//
// A composite index a = (alpha, alpha') runs over d*d values, flattened as
// alpha * d + alpha'. With identity kernels (omega = I = delta):
//
//   g_{a1..an}  = prod_i delta(alpha_i, alpha'_{i+1})          (cyclic)
//   g^{a1..an}  = prod_i delta(alpha_i, alpha'_{i-1})          (cyclic)
//   g*_{a1..an} = g_{an..a1},  g*^{a1..an} = g^{an..a1}
//
// An operator A enters an upper slot as A^a = A(alpha', alpha). Raising or
// lowering a slot swaps the pair (alpha, alpha'); an upper slot contracts a
// lower one by summing over equal composite values. Under these rules
// g_{a1..an} A_1^{a1} ... A_n^{an} = Tr(A_1 ... A_n).

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nambu/densmat.hpp"

namespace nambu {

/// Dense tensor over composite indices (each slot has extent d*d).
class TraceTensor {
 public:
  TraceTensor(Index d, int rank);

  static TraceTensor lower_g(Index d, int rank);
  static TraceTensor upper_g(Index d, int rank);
  static TraceTensor lower_gstar(Index d, int rank);
  static TraceTensor upper_gstar(Index d, int rank);

  Index d() const { return d_; }
  int rank() const { return rank_; }
  const std::vector<cplx>& data() const { return data_; }

  /// Swap (alpha, alpha') in one slot: raise or lower that index.
  TraceTensor swap_pair(int slot) const;
  /// Result slot i takes this tensor's slot order[i].
  TraceTensor permuted(const std::vector<int>& order) const;
  /// Total antisymmetrization (with 1/k!) over the listed slots.
  TraceTensor antisymmetrized(const std::vector<int>& slots) const;
  /// Sum over a shared composite index; remaining slots of *this come first.
  TraceTensor contract(int slot, const TraceTensor& other, int other_slot) const;
  /// Contract one slot with a vector of length d*d.
  TraceTensor contract_vector(int slot, const std::vector<cplx>& v) const;
  /// Fully contract all slots in order with operators in upper position.
  cplx contract_operators(const std::vector<Matrix>& ops) const;

  double max_abs_diff(const TraceTensor& other) const;
  double max_abs() const;

  static std::vector<cplx> upper_vector(const Matrix& op);
  /// omega^a and I_a: the identity kernel as a composite vector.
  static std::vector<cplx> identity_vector(Index d);

 private:
  static TraceTensor delta_chain(Index d, int rank, bool forward);

  Index d_;
  int rank_;
  std::vector<cplx> data_;
};

enum class TensorIdentity {
  Cyclicity,
  CutAndGlue,
  Annihilation,
  DragAndDrop,
  EvenVanish,   // antisymmetrized even-rank trace tensor vanishes
  Pullout,      // antisymmetrizing 2m+1 slots equals fixing the first
  OmegaKill,    // omega contracted into any slot of Omega vanishes
};

inline constexpr TensorIdentity kAllTensorIdentities[] = {
    TensorIdentity::Cyclicity,  TensorIdentity::CutAndGlue, TensorIdentity::Annihilation,
    TensorIdentity::DragAndDrop, TensorIdentity::EvenVanish, TensorIdentity::Pullout,
    TensorIdentity::OmegaKill};

std::string_view to_string(TensorIdentity id);
std::optional<TensorIdentity> tensor_identity_from_string(std::string_view name);

struct TensorIdentityCase {
  TensorIdentity identity;
  Index dim;
  std::uint64_t seed;
};

/// Instantiates the identity at the given dimension, compares both sides as
/// tensors and after contraction with seeded random operators, and returns
/// the max absolute difference. dim must lie in [2, 8].
double verify_tensor_identity(const TensorIdentityCase& c);

}  // namespace nambu
