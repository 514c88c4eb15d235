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

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nambu/densmat.hpp"

namespace nambu {

/// Polynomial S(C_1, C_2, ...) in the Casimir invariants.
///
/// Each term is keyed by its exponent vector: exponents[j] is the power of
/// C_{j+1}. Keys are canonical (no trailing zeros), zero coefficients are
/// dropped.
class CasimirPolynomial {
 public:
  using Exponents = std::vector<int>;

  CasimirPolynomial() = default;

  /// scale * C_k.
  static CasimirPolynomial casimir(int k, double scale);

  void add_term(Exponents exponents, double coefficient);

  const std::map<Exponents, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Highest k for which C_k appears (0 for a constant or empty polynomial).
  int max_order() const;

  /// casimirs[j] holds C_{j+1}; must cover max_order().
  cplx value(std::span<const cplx> casimirs) const;
  /// dS/dC_k at the given Casimir values.
  cplx partial(int k, std::span<const cplx> casimirs) const;

  CasimirPolynomial scaled(double factor) const;
  friend CasimirPolynomial operator+(const CasimirPolynomial& a, const CasimirPolynomial& b);

  std::string to_string() const;

 private:
  std::map<Exponents, double> terms_;
};

/// A functional of rho with an evaluable gradient operator.
///
/// Holds an optional linear part Tr(H rho) plus a Casimir polynomial. The
/// pure kinds of the model are Linear, Casimir and CasimirPolynomial; formal
/// linear combinations (as produced by the duality rotation) report Mixed.
class Generator {
 public:
  enum class Kind { Linear, Casimir, CasimirPolynomial, Mixed };

  Generator() = default;

  static Generator linear(Operator h);
  static Generator casimir(int k, double scale);
  static Generator polynomial(CasimirPolynomial p);

  Kind kind() const;
  const std::optional<Operator>& linear_part() const { return linear_; }
  const CasimirPolynomial& polynomial_part() const { return poly_; }

  /// G(rho) with dS = Tr(G d rho). Works for any square matrix argument.
  Matrix gradient(const Matrix& rho) const;
  /// S(rho) = Tr(H rho) + P(C_1(rho), C_2(rho), ...).
  cplx value(const Matrix& rho) const;

  Generator scaled(double factor) const;
  /// Formal sum. Throws UnsupportedCombination when both carry linear parts
  /// of different dimension.
  friend Generator operator+(const Generator& a, const Generator& b);

  std::string describe() const;

 private:
  std::optional<Operator> linear_;
  CasimirPolynomial poly_;
};

/// Gradient at a validated state. Throws DimensionMismatch when a linear
/// part does not match rho.
Operator gradient(const Generator& gen, const DensityMatrix& rho);

}  // namespace nambu
