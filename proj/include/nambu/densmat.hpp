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

// Dense complex-matrix foundation: Hermitian states, operators, tensor
// products, partial traces, spectra and Casimir invariants C_k = Tr(rho^k).
//
// Composite-index convention: for a system with subsystem dimensions
// (d_0, d_1, ..., d_{N-1}) the basis index is row-major with subsystem 0
// the slowest (most significant) digit, i.e. the Kronecker product
// A (x) B has entries (A (x) B)[i*d_B + k][j*d_B + l] = A[i][j] B[k][l].
// Subsystem indices are zero-based throughout.

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nambu/error.hpp"

namespace nambu {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultHermTol = 1e-10;
inline constexpr cplx kI{0.0, 1.0};

/// max |M - M^dagger| over entries.
double hermiticity_defect(const Matrix& m);
/// (M + M^dagger) / 2.
Matrix hermitize(const Matrix& m);
double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);

/// A d x d complex kernel. No invariants beyond shape.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix entries);

  static Operator identity(Index d);
  static Operator zero(Index d);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  bool is_hermitian(double tol = kDefaultHermTol) const;

 private:
  Matrix entries_;
};

/// The state rho: a Hermitian (within tolerance) d x d matrix with real
/// trace. Positivity is reported by min_eigenvalue(), never enforced.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries, double herm_tol = kDefaultHermTol,
                         std::optional<std::string> label = std::nullopt);

  /// psi psi^dagger / |psi|^2.
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(Index d);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  const std::optional<std::string>& label() const { return label_; }
  double trace() const { return entries_.trace().real(); }
  double min_eigenvalue() const;

 private:
  Matrix entries_;
  std::optional<std::string> label_;
};

struct SpectrumRecord {
  RealVector eigenvalues;  // sorted descending
  double t = 0.0;
};

/// Re Tr(rho^k). Throws NonHermitianInput if the imaginary part of the trace
/// exceeds herm_tol (scaled by max(1, |Re|)).
double casimir(const DensityMatrix& rho, int k, double herm_tol = kDefaultHermTol);
/// Tr(m^k) for an arbitrary square matrix.
cplx casimir_value(const Matrix& m, int k);

Operator tensor_product(const Operator& a, const Operator& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Reduced matrix of subsystem `keep` (zero-based): trace over all others.
Matrix partial_trace(const Matrix& m, std::span<const Index> dims, std::size_t keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::size_t keep);

/// I (x) ... (x) op (x) ... (x) I with op at slot k.
Matrix lift(const Matrix& op, std::span<const Index> dims, std::size_t k);
/// (I (x) op (x) I) * m without forming the lifted matrix.
Matrix apply_lifted_left(const Matrix& op, std::span<const Index> dims, std::size_t k,
                         const Matrix& m);
/// m * (I (x) op (x) I) without forming the lifted matrix.
Matrix apply_lifted_right(const Matrix& m, const Matrix& op, std::span<const Index> dims,
                          std::size_t k);

/// Eigenvalues of the Hermitized input, sorted descending.
SpectrumRecord spectrum(const DensityMatrix& rho, double t = 0.0);
RealVector sorted_eigenvalues(const Matrix& m, double herm_tol = kDefaultHermTol);

Index total_dim(std::span<const Index> dims);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

}  // namespace nambu
