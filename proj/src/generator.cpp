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

#include "nambu/generator.hpp"

#include <sstream>

namespace nambu {

namespace {

CasimirPolynomial::Exponents canonical(CasimirPolynomial::Exponents e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
  return e;
}

cplx ipow(cplx base, int exp) {
  cplx r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// casimirs[j] = C_{j+1}(m) for j < order.
std::vector<cplx> casimir_values(const Matrix& m, int order) {
  std::vector<cplx> c;
  c.reserve(order);
  Matrix p = m;
  for (int k = 1; k <= order; ++k) {
    if (k > 1) p = p * m;
    c.push_back(p.trace());
  }
  return c;
}

}  // namespace

CasimirPolynomial CasimirPolynomial::casimir(int k, double scale) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "Casimir order must be >= 1, got " + std::to_string(k));
  CasimirPolynomial p;
  Exponents e(k, 0);
  e[k - 1] = 1;
  p.add_term(std::move(e), scale);
  return p;
}

void CasimirPolynomial::add_term(Exponents exponents, double coefficient) {
  for (int v : exponents)
    if (v < 0) fail(ErrorCode::InvalidArgument, "negative exponent in Casimir polynomial");
  auto key = canonical(std::move(exponents));
  auto [it, inserted] = terms_.try_emplace(key, coefficient);
  if (!inserted) it->second += coefficient;
  if (it->second == 0.0) terms_.erase(it);
}

int CasimirPolynomial::max_order() const {
  int m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, static_cast<int>(e.size()));
  return m;
}

cplx CasimirPolynomial::value(std::span<const cplx> casimirs) const {
  cplx total = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx term = c;
    for (std::size_t j = 0; j < e.size(); ++j) term *= ipow(casimirs[j], e[j]);
    total += term;
  }
  return total;
}

cplx CasimirPolynomial::partial(int k, std::span<const cplx> casimirs) const {
  cplx total = 0.0;
  const std::size_t slot = static_cast<std::size_t>(k - 1);
  for (const auto& [e, c] : terms_) {
    if (slot >= e.size() || e[slot] == 0) continue;
    cplx term = c * static_cast<double>(e[slot]);
    for (std::size_t j = 0; j < e.size(); ++j)
      term *= ipow(casimirs[j], j == slot ? e[j] - 1 : e[j]);
    total += term;
  }
  return total;
}

CasimirPolynomial CasimirPolynomial::scaled(double factor) const {
  CasimirPolynomial out;
  for (const auto& [e, c] : terms_) out.add_term(e, c * factor);
  return out;
}

CasimirPolynomial operator+(const CasimirPolynomial& a, const CasimirPolynomial& b) {
  CasimirPolynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

std::string CasimirPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      os << "*C" << (j + 1);
      if (e[j] > 1) os << "^" << e[j];
    }
  }
  return os.str();
}

Generator Generator::linear(Operator h) {
  Generator g;
  g.linear_ = std::move(h);
  return g;
}

Generator Generator::casimir(int k, double scale) {
  return polynomial(CasimirPolynomial::casimir(k, scale));
}

Generator Generator::polynomial(CasimirPolynomial p) {
  Generator g;
  g.poly_ = std::move(p);
  return g;
}

Generator::Kind Generator::kind() const {
  if (linear_ && !poly_.empty()) return Kind::Mixed;
  if (linear_) return Kind::Linear;
  if (poly_.terms().size() == 1) {
    const auto& e = poly_.terms().begin()->first;
    int total = 0;
    for (int v : e) total += v;
    if (total == 1) return Kind::Casimir;
  }
  return Kind::CasimirPolynomial;
}

Matrix Generator::gradient(const Matrix& rho) const {
  const Index d = rho.rows();
  Matrix g = Matrix::Zero(d, d);
  if (linear_) {
    if (linear_->dim() != d) {
      fail(ErrorCode::DimensionMismatch, "linear generator of dimension " + std::to_string(linear_->dim()) +
                                             " applied to state of dimension " + std::to_string(d));
    }
    g += linear_->matrix();
  }
  const int order = poly_.max_order();
  if (order == 0) return g;
  const std::vector<cplx> c = casimir_values(rho, order);
  // sum_k (dS/dC_k) k rho^{k-1}
  Matrix power = Matrix::Identity(d, d);
  for (int k = 1; k <= order; ++k) {
    if (k > 1) power = power * rho;
    const cplx w = poly_.partial(k, c);
    if (w != 0.0) g += (w * static_cast<double>(k)) * power;
  }
  return g;
}

cplx Generator::value(const Matrix& rho) const {
  cplx v = 0.0;
  if (linear_) v += (linear_->matrix() * rho).trace();
  const int order = poly_.max_order();
  if (!poly_.empty()) v += poly_.value(casimir_values(rho, order));
  return v;
}

Generator Generator::scaled(double factor) const {
  Generator g;
  if (linear_) g.linear_ = Operator(linear_->matrix() * factor);
  g.poly_ = poly_.scaled(factor);
  return g;
}

Generator operator+(const Generator& a, const Generator& b) {
  Generator g;
  if (a.linear_ && b.linear_) {
    if (a.linear_->dim() != b.linear_->dim()) {
      fail(ErrorCode::UnsupportedCombination, "cannot combine linear generators of dimension " +
                                                  std::to_string(a.linear_->dim()) + " and " +
                                                  std::to_string(b.linear_->dim()));
    }
    g.linear_ = Operator(a.linear_->matrix() + b.linear_->matrix());
  } else if (a.linear_) {
    g.linear_ = a.linear_;
  } else if (b.linear_) {
    g.linear_ = b.linear_;
  }
  g.poly_ = a.poly_ + b.poly_;
  return g;
}

std::string Generator::describe() const {
  std::string s;
  if (linear_) s += "Tr(H rho)[d=" + std::to_string(linear_->dim()) + "]";
  if (!poly_.empty()) {
    if (!s.empty()) s += " + ";
    s += poly_.to_string();
  }
  return s.empty() ? "0" : s;
}

Operator gradient(const Generator& gen, const DensityMatrix& rho) {
  return Operator(gen.gradient(rho.matrix()));
}

}  // namespace nambu
