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

#include "nambu/brackets.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace nambu {

namespace {

void require_same_dim(std::span<const Matrix> ops) {
  for (const Matrix& m : ops) {
    if (m.rows() != m.cols() || m.rows() != ops.front().rows()) {
      fail(ErrorCode::DimensionMismatch, "bracket arguments must share one square dimension");
    }
  }
}

// Depth-first lexicographic walk over permutations; `prefix` holds the
// ordered product of the operators placed so far. Picking the r-th smallest
// remaining index contributes (-1)^r to the sign.
void accumulate_permutations(std::span<const Matrix> ops, std::vector<bool>& used, const Matrix& prefix,
                             int sign, std::size_t depth, Matrix& acc) {
  const std::size_t k = ops.size();
  int rank = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (used[i]) continue;
    const int s = (rank % 2 == 0) ? sign : -sign;
    ++rank;
    if (depth + 1 == k) {
      if (s > 0) acc.noalias() += prefix * ops[i];
      else acc.noalias() -= prefix * ops[i];
      continue;
    }
    used[i] = true;
    const Matrix next = prefix * ops[i];
    accumulate_permutations(ops, used, next, s, depth + 1, acc);
    used[i] = false;
  }
}

Matrix signed_permutation_sum(std::span<const Matrix> ops) {
  const Index d = ops.front().rows();
  Matrix acc = Matrix::Zero(d, d);
  std::vector<bool> used(ops.size(), false);
  accumulate_permutations(ops, used, Matrix::Identity(d, d), 1, 0, acc);
  return acc;
}

}  // namespace

BracketSpec::BracketSpec(int arity, std::vector<Generator> generators, cplx z)
    : arity_(arity), generators_(std::move(generators)), z_(z) {
  validate_arity(arity_);
  if (static_cast<int>(generators_.size()) != arity_ - 1) {
    fail(ErrorCode::InvalidBracket, "arity " + std::to_string(arity_) + " needs " +
                                        std::to_string(arity_ - 1) + " generators, got " +
                                        std::to_string(generators_.size()));
  }
  const double scale = std::max(1.0, std::abs(z_));
  if (arity_ % 4 == 3 && std::abs(z_.real()) > 1e-14 * scale) {
    fail(ErrorCode::InvalidBracket, "z must be purely imaginary for arity " + std::to_string(arity_));
  }
  if (arity_ % 4 == 1 && std::abs(z_.imag()) > 1e-14 * scale) {
    fail(ErrorCode::InvalidBracket, "z must be purely real for arity " + std::to_string(arity_));
  }
}

BracketSpec::BracketSpec(int arity, std::vector<Generator> generators)
    : BracketSpec(arity, std::move(generators), default_z(arity)) {}

BracketSpec BracketSpec::three(const Operator& h, Generator entropy) {
  return BracketSpec(3, {Generator::linear(h), std::move(entropy)});
}

BracketSpec BracketSpec::five(const Operator& h1, const Operator& h2, Generator s1, Generator s2) {
  return BracketSpec(5, {Generator::linear(h1), Generator::linear(h2), std::move(s1), std::move(s2)});
}

cplx BracketSpec::default_z(int arity) {
  validate_arity(arity);
  return arity % 4 == 3 ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
}

void BracketSpec::validate_arity(int arity) {
  if (arity % 2 == 0) {
    fail(ErrorCode::InvalidBracket,
         "even arity " + std::to_string(arity) + " rejected: antisymmetrized trace tensors of even rank vanish");
  }
  if (arity < 3 || arity > kMaxArity) {
    fail(ErrorCode::InvalidBracket, "arity " + std::to_string(arity) + " outside supported range [3, " +
                                        std::to_string(kMaxArity) + "]");
  }
}

Matrix antisym_product(std::span<const Matrix> ops) {
  if (ops.empty() || ops.size() % 2 != 0) {
    fail(ErrorCode::OddCount, "antisymmetrized product needs an even, nonzero number of operators, got " +
                                  std::to_string(ops.size()));
  }
  require_same_dim(ops);
  return signed_permutation_sum(ops);
}

Operator antisym_product(std::span<const Operator> ops) {
  std::vector<Matrix> m;
  m.reserve(ops.size());
  for (const Operator& op : ops) m.push_back(op.matrix());
  return Operator(antisym_product(std::span<const Matrix>(m)));
}

cplx scalar_bracket_from_gradients(std::span<const Matrix> grads, BracketFormula formula) {
  if (grads.size() < 3 || grads.size() % 2 == 0) {
    fail(ErrorCode::InvalidBracket, "scalar bracket needs an odd number >= 3 of arguments, got " +
                                        std::to_string(grads.size()));
  }
  require_same_dim(grads);
  if (formula == BracketFormula::Full) {
    return signed_permutation_sum(grads).trace() / static_cast<double>(grads.size());
  }
  return (grads.front() * signed_permutation_sum(grads.subspan(1))).trace();
}

cplx scalar_bracket(std::span<const Generator> gens, const Matrix& rho, BracketFormula formula) {
  std::vector<Matrix> grads;
  grads.reserve(gens.size());
  for (const Generator& g : gens) grads.push_back(g.gradient(rho));
  const cplx value = scalar_bracket_from_gradients(grads, formula);
#ifndef NDEBUG
  const cplx other = scalar_bracket_from_gradients(
      grads, formula == BracketFormula::Full ? BracketFormula::Reduced : BracketFormula::Full);
  assert(std::abs(value - other) <= 1e-9 * (1.0 + std::abs(value)));
#endif
  return value;
}

cplx scalar_bracket(std::span<const Generator> gens, const DensityMatrix& rho, BracketFormula formula) {
  return scalar_bracket(gens, rho.matrix(), formula);
}

Matrix eom_rhs(const BracketSpec& spec, const Matrix& rho) {
  std::vector<Matrix> grads;
  grads.reserve(spec.generators().size());
  for (const Generator& g : spec.generators()) grads.push_back(g.gradient(rho));
  return spec.z() * antisym_product(std::span<const Matrix>(grads));
}

Operator eom_rhs(const BracketSpec& spec, const DensityMatrix& rho) {
  return Operator(eom_rhs(spec, rho.matrix()));
}

std::vector<Matrix> hermitian_basis(Index d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  const double r = 1.0 / std::numbers::sqrt2;
  for (Index i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      Matrix s = Matrix::Zero(d, d);
      s(i, j) = r;
      s(j, i) = r;
      basis.push_back(std::move(s));
      Matrix a = Matrix::Zero(d, d);
      a(i, j) = cplx(0.0, r);
      a(j, i) = cplx(0.0, -r);
      basis.push_back(std::move(a));
    }
  return basis;
}

namespace {

// {P, Q}_X evaluated at an arbitrary matrix point.
cplx x_bracket(const Generator& p, const Generator& q, const Generator& x, const Matrix& rho) {
  const Matrix grads[3] = {p.gradient(rho), q.gradient(rho), x.gradient(rho)};
  return scalar_bracket_from_gradients(grads, BracketFormula::Reduced);
}

// Gradient of rho -> {P, Q}_X(rho) by central differences. The functional is
// a holomorphic polynomial in the entries, so the Hermitian directions
// determine the full complex gradient.
Matrix inner_gradient(const Generator& p, const Generator& q, const Generator& x, const Matrix& rho,
                      const std::vector<Matrix>& basis, double h) {
  Matrix g = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& e : basis) {
    const cplx plus = x_bracket(p, q, x, rho + h * e);
    const cplx minus = x_bracket(p, q, x, rho - h * e);
    g += ((plus - minus) / (2.0 * h)) * e;
  }
  return g;
}

// {F, R}_X where F is known only through its gradient.
cplx outer_bracket(const Matrix& grad_f, const Generator& r, const Generator& x, const Matrix& rho) {
  const Matrix gr = r.gradient(rho);
  const Matrix gx = x.gradient(rho);
  return (grad_f * (gr * gx - gx * gr)).trace();
}

}  // namespace

cplx jacobi_defect(const Generator& x, const Generator& a, const Generator& b, const Generator& c,
                   const DensityMatrix& rho, JacobiOptions opts) {
  const Matrix& m = rho.matrix();
  const std::vector<Matrix> basis = hermitian_basis(m.rows());
  const Matrix g_ab = inner_gradient(a, b, x, m, basis, opts.step);
  const Matrix g_ca = inner_gradient(c, a, x, m, basis, opts.step);
  const Matrix g_bc = inner_gradient(b, c, x, m, basis, opts.step);
  return outer_bracket(g_ab, c, x, m) + outer_bracket(g_ca, b, x, m) + outer_bracket(g_bc, a, x, m);
}

std::pair<Generator, Generator> duality_rotate(const Generator& h, const Generator& s, double alpha) {
  const double c = std::cos(alpha);
  const double sn = std::sin(alpha);
  return {h.scaled(c) + s.scaled(-sn), h.scaled(sn) + s.scaled(c)};
}

double casimir_saturation_check(int arity, std::span<const int> casimir_orders, const DensityMatrix& rho,
                      std::span<const Generator> fillers) {
  BracketSpec::validate_arity(arity);
  const std::size_t q = static_cast<std::size_t>((arity + 1) / 2);
  if (casimir_orders.size() != q || fillers.size() != static_cast<std::size_t>(arity) - q) {
    fail(ErrorCode::InvalidArgument, "arity " + std::to_string(arity) + " needs " + std::to_string(q) +
                                         " Casimir arguments and " + std::to_string(arity - q) + " fillers");
  }
  std::vector<Generator> gens;
  gens.reserve(static_cast<std::size_t>(arity));
  for (int k : casimir_orders) gens.push_back(Generator::casimir(k, 1.0));
  for (const Generator& f : fillers) gens.push_back(f);
  return std::abs(scalar_bracket(gens, rho));
}

}  // namespace nambu
