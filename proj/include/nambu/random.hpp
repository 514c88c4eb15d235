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

// Portable seeded sampling.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than taken from
// <random> (whose distribution algorithms are implementation-defined):
//   uniform()  = (u >> 11) * 2^-53                    in [0, 1)
//   normal()   = Box-Muller, one draw per call:
//                sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
// so every seeded example reproduces bit-for-bit across toolchains.

#pragma once

#include <cstdint>
#include <random>

#include "nambu/densmat.hpp"

namespace nambu {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  /// (normal() + i normal()) / sqrt(2).
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
};

/// (G + G^dagger)/2 with G complex Ginibre, times `scale`.
Matrix random_hermitian(Rng& rng, Index d, double scale = 1.0);
/// Q factor of a Ginibre matrix with phases fixed (Haar distributed).
Matrix random_unitary(Rng& rng, Index d);
/// G G^dagger / Tr(G G^dagger): full-rank mixed state.
Matrix random_mixed_state(Rng& rng, Index d);
/// Unit-norm complex Gaussian vector.
Vector random_state_vector(Rng& rng, Index d);

}  // namespace nambu
