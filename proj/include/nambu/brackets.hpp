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

// Generalized Lie-Nambu (2m+1)-brackets at finite dimension.
//
// With orthonormal-basis (identity) kernels the structure constants reduce
// to antisymmetrized trace tensors, so for gradients G_i = dA_i/drho
//
//   {A_1, ..., A_n}(rho) = (1/n) sum_{s in S_n} sgn(s) Tr(G_s(1) ... G_s(n))
//                        = sum_{s in S_{n-1}} sgn(s) Tr(G_1 G_s(2) ... G_s(n))
//
// and the equation of motion for the generator list (X_1, ..., X_{n-1}) is
//
//   d rho/dt = z * sum_{s in S_{n-1}} sgn(s) X_s(1) ... X_s(n-1),
//
// normalized so that n = 3 with (Tr(H rho), C_2/2) and z = -i is exactly
// -i [H, rho].

#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "nambu/densmat.hpp"
#include "nambu/generator.hpp"

namespace nambu {

inline constexpr int kMaxArity = 9;

/// Arity n = 2m+1, the n-1 generators filling the slots after rho, and the
/// multiplier z. z must be purely imaginary for n = 4m+3 and purely real for
/// n = 4m+1.
class BracketSpec {
 public:
  BracketSpec(int arity, std::vector<Generator> generators, cplx z);
  /// z defaulted by arity: -i for n = 4m+3, 1 for n = 4m+1.
  BracketSpec(int arity, std::vector<Generator> generators);

  /// Convenience for n = 3: generators (Tr(H rho), S), z = -i.
  static BracketSpec three(const Operator& h, Generator entropy);
  /// Convenience for n = 5: generators (H1, H2, S1, S2), z = 1.
  static BracketSpec five(const Operator& h1, const Operator& h2, Generator s1, Generator s2);

  int arity() const { return arity_; }
  const std::vector<Generator>& generators() const { return generators_; }
  cplx z() const { return z_; }

  static cplx default_z(int arity);
  /// Throws InvalidBracket for even, too small, or too large arities.
  static void validate_arity(int arity);

 private:
  int arity_;
  std::vector<Generator> generators_;
  cplx z_;
};

/// sum_{s in S_k} sgn(s) X_s(1) ... X_s(k) for an even count k.
/// Permutations are enumerated in lexicographic order (deterministic).
Matrix antisym_product(std::span<const Matrix> ops);
Operator antisym_product(std::span<const Operator> ops);

enum class BracketFormula { Full, Reduced };

/// Scalar bracket {A_1, ..., A_n} at rho. Debug builds cross-check the two
/// formulas.
cplx scalar_bracket(std::span<const Generator> gens, const Matrix& rho,
                    BracketFormula formula = BracketFormula::Reduced);
cplx scalar_bracket(std::span<const Generator> gens, const DensityMatrix& rho,
                    BracketFormula formula = BracketFormula::Reduced);
/// Same bracket from precomputed gradients.
cplx scalar_bracket_from_gradients(std::span<const Matrix> grads, BracketFormula formula);

/// z * antisym_product(gradients) for any square matrix argument.
Matrix eom_rhs(const BracketSpec& spec, const Matrix& rho);
Operator eom_rhs(const BracketSpec& spec, const DensityMatrix& rho);

struct JacobiOptions {
  double step = 1e-5;  // central-difference step along Hermitian basis directions
};

/// {{A,B}_X,C}_X + {{C,A}_X,B}_X + {{B,C}_X,A}_X with {A,B}_X = {A,B,X}.
/// Outer brackets differentiate the inner scalar bracket numerically.
cplx jacobi_defect(const Generator& x, const Generator& a, const Generator& b, const Generator& c,
                   const DensityMatrix& rho, JacobiOptions opts = {});

/// Orthonormal Hermitian basis of d x d matrices under (A, B) -> Tr(A B).
std::vector<Matrix> hermitian_basis(Index d);

/// (H cos a - S sin a, H sin a + S cos a).
std::pair<Generator, Generator> duality_rotate(const Generator& h, const Generator& s, double alpha);

/// |{C_k1, ..., C_kq, F_1, ..., F_r}| with q = (n+1)/2 Casimirs C_k and
/// r = (n-1)/2 fillers.
double casimir_saturation_check(int arity, std::span<const int> casimir_orders, const DensityMatrix& rho,
                      std::span<const Generator> fillers);

}  // namespace nambu
