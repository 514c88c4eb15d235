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

#include "nambu/densmat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace nambu {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + " must be a non-empty square matrix, got " +
             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

struct SlotSplit {
  Index before = 1;
  Index local = 1;
  Index after = 1;
};

SlotSplit split_dims(std::span<const Index> dims, std::size_t k, Index expected) {
  if (k >= dims.size()) {
    fail(ErrorCode::DimensionMismatch, "subsystem index " + std::to_string(k) +
                                           " out of range for " +
                                           std::to_string(dims.size()) + " subsystems");
  }
  SlotSplit s;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (dims[j] <= 0) fail(ErrorCode::DimensionMismatch, "subsystem dimensions must be positive");
    if (j < k) s.before *= dims[j];
    if (j > k) s.after *= dims[j];
  }
  s.local = dims[k];
  if (s.before * s.local * s.after != expected) {
    fail(ErrorCode::DimensionMismatch,
         "product of subsystem dimensions " + std::to_string(s.before * s.local * s.after) +
             " does not match matrix dimension " + std::to_string(expected));
  }
  return s;
}

}  // namespace

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "operator");
}

Operator Operator::identity(Index d) { return Operator(Matrix::Identity(d, d)); }

Operator Operator::zero(Index d) { return Operator(Matrix::Zero(d, d)); }

bool Operator::is_hermitian(double tol) const { return hermiticity_defect(entries_) <= tol; }

DensityMatrix::DensityMatrix(Matrix entries, double herm_tol, std::optional<std::string> label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  require_square(entries_, "density matrix");
  if (!all_finite(entries_)) fail(ErrorCode::NonFiniteState, "density matrix has non-finite entries");
  const double defect = hermiticity_defect(entries_);
  if (defect > herm_tol) {
    fail(ErrorCode::NonHermitianInput,
         "max |rho - rho^dagger| = " + std::to_string(defect) + " exceeds " + std::to_string(herm_tol));
  }
  const double im_trace = std::abs(entries_.trace().imag());
  if (im_trace > herm_tol * static_cast<double>(std::max<Index>(1, dim()))) {
    fail(ErrorCode::NonHermitianInput, "trace has imaginary part " + std::to_string(im_trace));
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || !(norm > 0.0)) fail(ErrorCode::InvalidArgument, "pure state needs a nonzero vector");
  const Vector u = psi / norm;
  return DensityMatrix(hermitize(u * u.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::min_eigenvalue() const {
  return sorted_eigenvalues(entries_, std::numeric_limits<double>::infinity()).minCoeff();
}

cplx casimir_value(const Matrix& m, int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "Casimir order must be >= 1, got " + std::to_string(k));
  require_square(m, "casimir argument");
  Matrix p = m;
  for (int j = 1; j < k; ++j) p = p * m;
  return p.trace();
}

double casimir(const DensityMatrix& rho, int k, double herm_tol) {
  const cplx c = casimir_value(rho.matrix(), k);
  if (std::abs(c.imag()) > herm_tol * std::max(1.0, std::abs(c.real()))) {
    fail(ErrorCode::NonHermitianInput,
         "Tr(rho^" + std::to_string(k) + ") has imaginary part " + std::to_string(c.imag()));
  }
  return c.real();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator tensor_product(const Operator& a, const Operator& b) {
  return Operator(kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::numeric_limits<double>::infinity());
}

Index total_dim(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

Matrix partial_trace(const Matrix& m, std::span<const Index> dims, std::size_t keep) {
  require_square(m, "partial_trace argument");
  const SlotSplit s = split_dims(dims, keep, m.rows());
  Matrix out = Matrix::Zero(s.local, s.local);
  for (Index j = 0; j < s.local; ++j)
    for (Index i = 0; i < s.local; ++i) {
      cplx acc = 0.0;
      for (Index b = 0; b < s.before; ++b)
        for (Index a = 0; a < s.after; ++a)
          acc += m((b * s.local + i) * s.after + a, (b * s.local + j) * s.after + a);
      out(i, j) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims, std::size_t keep) {
  return DensityMatrix(partial_trace(rho.matrix(), dims, keep), std::numeric_limits<double>::infinity());
}

Matrix lift(const Matrix& op, std::span<const Index> dims, std::size_t k) {
  require_square(op, "lifted operator");
  const SlotSplit s = split_dims(dims, k, total_dim(dims));
  if (op.rows() != s.local) {
    fail(ErrorCode::DimensionMismatch, "operator dimension " + std::to_string(op.rows()) +
                                           " does not match subsystem dimension " +
                                           std::to_string(s.local));
  }
  return kron(kron(Matrix::Identity(s.before, s.before), op), Matrix::Identity(s.after, s.after));
}

Matrix apply_lifted_left(const Matrix& op, std::span<const Index> dims, std::size_t k, const Matrix& m) {
  const SlotSplit s = split_dims(dims, k, m.rows());
  if (op.rows() != s.local || op.cols() != s.local) {
    fail(ErrorCode::DimensionMismatch, "operator does not match subsystem dimension");
  }
  // For fixed outer index b and inner index a, the rows (b, i, a) are a
  // strided local x cols slice on which op acts from the left.
  using Strided = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
  Matrix out(m.rows(), m.cols());
  const Index slab = s.local * s.after;
  const Strided stride(m.rows(), s.after);
  for (Index b = 0; b < s.before; ++b)
    for (Index a = 0; a < s.after; ++a) {
      const Index offset = b * slab + a;
      Eigen::Map<const Matrix, 0, Strided> in(m.data() + offset, s.local, m.cols(), stride);
      Eigen::Map<Matrix, 0, Strided> dst(out.data() + offset, s.local, m.cols(), stride);
      dst.noalias() = op * in;
    }
  return out;
}

Matrix apply_lifted_right(const Matrix& m, const Matrix& op, std::span<const Index> dims, std::size_t k) {
  const SlotSplit s = split_dims(dims, k, m.cols());
  if (op.rows() != s.local || op.cols() != s.local) {
    fail(ErrorCode::DimensionMismatch, "operator does not match subsystem dimension");
  }
  // Columns (b, i, a) for fixed b and a form a rows x local strided slice.
  using Strided = Eigen::OuterStride<Eigen::Dynamic>;
  Matrix out(m.rows(), m.cols());
  const Index slab = s.local * s.after;
  const Strided stride(m.rows() * s.after);
  for (Index b = 0; b < s.before; ++b)
    for (Index a = 0; a < s.after; ++a) {
      const Index offset = (b * slab + a) * m.rows();
      Eigen::Map<const Matrix, 0, Strided> in(m.data() + offset, m.rows(), s.local, stride);
      Eigen::Map<Matrix, 0, Strided> dst(out.data() + offset, m.rows(), s.local, stride);
      dst.noalias() = in * op;
    }
  return out;
}

RealVector sorted_eigenvalues(const Matrix& m, double herm_tol) {
  require_square(m, "spectrum argument");
  const double defect = hermiticity_defect(m);
  if (defect > herm_tol) {
    fail(ErrorCode::NonHermitianInput, "spectrum of non-Hermitian input (defect " + std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
  RealVector ev = solver.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev;
}

SpectrumRecord spectrum(const DensityMatrix& rho, double t) {
  return SpectrumRecord{sorted_eigenvalues(rho.matrix(), std::numeric_limits<double>::infinity()), t};
}

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }
Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix y() {
  Matrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

}  // namespace nambu
