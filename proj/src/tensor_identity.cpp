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

#include "nambu/tensor_identity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "nambu/brackets.hpp"
#include "nambu/random.hpp"

namespace nambu {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Mixed-radix digits of a flat tensor index; slot 0 is most significant.
void unflatten(std::size_t flat, std::size_t extent, std::vector<std::size_t>& digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = flat % extent;
    flat /= extent;
  }
}

std::size_t flatten(const std::vector<std::size_t>& digits, std::size_t extent) {
  std::size_t flat = 0;
  for (std::size_t v : digits) flat = flat * extent + v;
  return flat;
}

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace

TraceTensor::TraceTensor(Index d, int rank)
    : d_(d), rank_(rank), data_(ipow(static_cast<std::size_t>(d * d), rank), cplx(0.0)) {
  if (d < 1 || rank < 0) fail(ErrorCode::InvalidArgument, "invalid tensor shape");
}

// forward: alpha_i == alpha'_{i+1}; backward: alpha_i == alpha'_{i-1}.
TraceTensor TraceTensor::delta_chain(Index d, int rank, bool forward) {
  TraceTensor t(d, rank);
  const std::size_t ext = static_cast<std::size_t>(d * d);
  const std::size_t ud = static_cast<std::size_t>(d);
  std::vector<std::size_t> digits(static_cast<std::size_t>(rank));
  for (std::size_t flat = 0; flat < t.data_.size(); ++flat) {
    unflatten(flat, ext, digits);
    bool ok = true;
    for (int i = 0; i < rank && ok; ++i) {
      const int j = forward ? (i + 1) % rank : (i + rank - 1) % rank;
      ok = digits[static_cast<std::size_t>(i)] / ud == digits[static_cast<std::size_t>(j)] % ud;
    }
    t.data_[flat] = ok ? 1.0 : 0.0;
  }
  return t;
}

TraceTensor TraceTensor::lower_g(Index d, int rank) { return delta_chain(d, rank, true); }
TraceTensor TraceTensor::upper_g(Index d, int rank) { return delta_chain(d, rank, false); }
TraceTensor TraceTensor::lower_gstar(Index d, int rank) { return delta_chain(d, rank, false); }
TraceTensor TraceTensor::upper_gstar(Index d, int rank) { return delta_chain(d, rank, true); }

TraceTensor TraceTensor::swap_pair(int slot) const {
  TraceTensor out(d_, rank_);
  const std::size_t ext = static_cast<std::size_t>(d_ * d_);
  const std::size_t ud = static_cast<std::size_t>(d_);
  std::vector<std::size_t> digits(static_cast<std::size_t>(rank_));
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    unflatten(flat, ext, digits);
    const std::size_t c = digits[static_cast<std::size_t>(slot)];
    digits[static_cast<std::size_t>(slot)] = (c % ud) * ud + c / ud;
    out.data_[flatten(digits, ext)] = data_[flat];
  }
  return out;
}

TraceTensor TraceTensor::permuted(const std::vector<int>& order) const {
  TraceTensor out(d_, rank_);
  const std::size_t ext = static_cast<std::size_t>(d_ * d_);
  std::vector<std::size_t> digits(static_cast<std::size_t>(rank_));
  std::vector<std::size_t> src(static_cast<std::size_t>(rank_));
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    unflatten(flat, ext, digits);
    for (std::size_t i = 0; i < digits.size(); ++i) src[static_cast<std::size_t>(order[i])] = digits[i];
    out.data_[flat] = data_[flatten(src, ext)];
  }
  return out;
}

TraceTensor TraceTensor::antisymmetrized(const std::vector<int>& slots) const {
  TraceTensor out(d_, rank_);
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0.0;
  do {
    std::vector<int> order(static_cast<std::size_t>(rank_));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < slots.size(); ++i) order[static_cast<std::size_t>(slots[i])] = slots[static_cast<std::size_t>(perm[i])];
    const TraceTensor p = permuted(order);
    const double s = permutation_sign(perm);
    for (std::size_t f = 0; f < data_.size(); ++f) out.data_[f] += s * p.data_[f];
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (cplx& v : out.data_) v /= count;
  return out;
}

TraceTensor TraceTensor::contract(int slot, const TraceTensor& other, int other_slot) const {
  if (other.d_ != d_) fail(ErrorCode::DimensionMismatch, "tensor contraction across dimensions");
  const int r1 = rank_ - 1;
  const int r2 = other.rank_ - 1;
  TraceTensor out(d_, r1 + r2);
  const std::size_t ext = static_cast<std::size_t>(d_ * d_);
  std::vector<std::size_t> digits(static_cast<std::size_t>(r1 + r2));
  std::vector<std::size_t> a(static_cast<std::size_t>(rank_));
  std::vector<std::size_t> b(static_cast<std::size_t>(other.rank_));
  for (std::size_t flat = 0; flat < out.data_.size(); ++flat) {
    unflatten(flat, ext, digits);
    for (int i = 0, k = 0; i < rank_; ++i)
      if (i != slot) a[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(k++)];
    for (int i = 0, k = r1; i < other.rank_; ++i)
      if (i != other_slot) b[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(k++)];
    cplx acc = 0.0;
    for (std::size_t x = 0; x < ext; ++x) {
      a[static_cast<std::size_t>(slot)] = x;
      b[static_cast<std::size_t>(other_slot)] = x;
      acc += data_[flatten(a, ext)] * other.data_[flatten(b, ext)];
    }
    out.data_[flat] = acc;
  }
  return out;
}

TraceTensor TraceTensor::contract_vector(int slot, const std::vector<cplx>& v) const {
  TraceTensor vec(d_, 1);
  vec.data_ = v;
  return contract(slot, vec, 0);
}

cplx TraceTensor::contract_operators(const std::vector<Matrix>& ops) const {
  if (static_cast<int>(ops.size()) != rank_) fail(ErrorCode::InvalidArgument, "operator count must equal rank");
  TraceTensor t = *this;
  for (const Matrix& op : ops) t = t.contract_vector(0, upper_vector(op));
  return t.data_.front();
}

double TraceTensor::max_abs_diff(const TraceTensor& other) const {
  if (other.rank_ != rank_ || other.d_ != d_) fail(ErrorCode::DimensionMismatch, "tensor shapes differ");
  double m = 0.0;
  for (std::size_t f = 0; f < data_.size(); ++f) m = std::max(m, std::abs(data_[f] - other.data_[f]));
  return m;
}

double TraceTensor::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<cplx> TraceTensor::upper_vector(const Matrix& op) {
  const Index d = op.rows();
  std::vector<cplx> v(static_cast<std::size_t>(d * d));
  for (Index alpha = 0; alpha < d; ++alpha)
    for (Index alpha_p = 0; alpha_p < d; ++alpha_p)
      v[static_cast<std::size_t>(alpha * d + alpha_p)] = op(alpha_p, alpha);
  return v;
}

std::vector<cplx> TraceTensor::identity_vector(Index d) {
  return upper_vector(Matrix::Identity(d, d));
}

std::string_view to_string(TensorIdentity id) {
  switch (id) {
    case TensorIdentity::Cyclicity: return "cyclicity";
    case TensorIdentity::CutAndGlue: return "cut_and_glue";
    case TensorIdentity::Annihilation: return "annihilation";
    case TensorIdentity::DragAndDrop: return "drag_and_drop";
    case TensorIdentity::EvenVanish: return "even_vanish";
    case TensorIdentity::Pullout: return "pullout";
    case TensorIdentity::OmegaKill: return "omega_kill";
  }
  return "unknown";
}

std::optional<TensorIdentity> tensor_identity_from_string(std::string_view name) {
  for (TensorIdentity id : kAllTensorIdentities)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

namespace {

// Largest tensor rank with (d^2)^rank entries at most about half a million.
int rank_budget(Index d) {
  const double ext = static_cast<double>(d * d);
  int r = 1;
  while (std::pow(ext, r + 1) <= 5.5e5) ++r;
  return r;
}

std::vector<Matrix> random_ops(Rng& rng, Index d, int count) {
  std::vector<Matrix> ops;
  for (int i = 0; i < count; ++i) {
    Matrix m(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) m(r, c) = rng.complex_normal();
    ops.push_back(std::move(m));
  }
  return ops;
}

Matrix product(const std::vector<Matrix>& ops, Index d) {
  Matrix p = Matrix::Identity(d, d);
  for (const Matrix& m : ops) p = p * m;
  return p;
}

std::vector<Matrix> concat(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  std::vector<Matrix> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<int> iota_vec(int n, int start = 0) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), start);
  return v;
}

// Contract a lower tensor in slots other than `open` with operators; leaves
// a rank-1 tensor (the composite vector of the open slot).
TraceTensor contract_all_but(const TraceTensor& t, int open, const std::vector<Matrix>& ops) {
  TraceTensor out = t;
  int slot = 0;
  for (const Matrix& op : ops) {
    if (slot == open) ++slot;
    out = out.contract_vector(open < slot ? 1 : 0, TraceTensor::upper_vector(op));
    ++slot;
  }
  return out;
}

// Slot counts per identity, chosen from the rank budget.
struct Shape {
  int cyc_n, cyc_m;
  int cut_n, cut_m;
  int ann_r;
  int dnd_l, dnd_big;
  int even_max;
  int odd_max;
};

Shape shape_for(Index d) {
  const int budget = rank_budget(d);
  Shape s{};
  const int cyc = std::min(budget, 4);
  s.cyc_n = (cyc + 1) / 2;
  s.cyc_m = cyc - s.cyc_n;
  const int cut = std::max(2, std::min(budget, 5) - 1);
  s.cut_n = (cut + 1) / 2;
  s.cut_m = cut - s.cut_n;
  s.ann_r = std::min(budget, 4) - 1;
  const int dnd = std::min(budget, 4);
  s.dnd_l = dnd >= 4 ? 2 : 1;
  s.dnd_big = dnd - s.dnd_l;
  s.even_max = std::min(budget, d == 2 ? 6 : 4);
  s.odd_max = std::min(budget, 5);
  return s;
}

// ---- tensor-level checks (seed independent) ----

double tensor_cyclicity(Index d, const Shape& s) {
  const int total = s.cyc_n + s.cyc_m;
  std::vector<int> rot;
  for (int i = 0; i < s.cyc_m; ++i) rot.push_back(s.cyc_n + i);
  for (int i = 0; i < s.cyc_n; ++i) rot.push_back(i);
  double defect = 0.0;
  for (const TraceTensor& t : {TraceTensor::lower_g(d, total), TraceTensor::lower_gstar(d, total),
                               TraceTensor::upper_g(d, total)})
    defect = std::max(defect, t.max_abs_diff(t.permuted(rot)));
  return defect;
}

// g*_{a_1..a_n x} g*^x_{a_{n+1}..} = g*_{a_1..a_{n+m}}, and the same for g^.
double tensor_cut_and_glue(Index d, const Shape& s) {
  const int n = s.cut_n;
  const int m = s.cut_m;
  const TraceTensor star = TraceTensor::lower_gstar(d, n + 1)
                               .contract(n, TraceTensor::lower_gstar(d, m + 1).swap_pair(0), 0);
  const TraceTensor up = TraceTensor::upper_g(d, n + 1)
                             .contract(n, TraceTensor::upper_g(d, m + 1).swap_pair(0), 0);
  return std::max(star.max_abs_diff(TraceTensor::lower_gstar(d, n + m)),
                  up.max_abs_diff(TraceTensor::upper_g(d, n + m)));
}

double tensor_annihilation(Index d, const Shape& s) {
  const int r = s.ann_r;
  const std::vector<cplx> unit = TraceTensor::identity_vector(d);
  const TraceTensor lower = TraceTensor::lower_g(d, r + 1);
  const TraceTensor upper = TraceTensor::upper_g(d, r + 1);
  const TraceTensor lower_ref = TraceTensor::lower_g(d, r);
  const TraceTensor upper_ref = TraceTensor::upper_g(d, r);
  double defect = 0.0;
  for (int k = 0; k <= r; ++k) {
    defect = std::max(defect, lower.contract_vector(k, unit).max_abs_diff(lower_ref));
    defect = std::max(defect, upper.contract_vector(k, unit).max_abs_diff(upper_ref));
  }
  return defect;
}

// Dropping g^{b_1..b_l}_x into slot k of g^{a_1..x..} splices the b's in.
double tensor_drag_and_drop(Index d, const Shape& s) {
  const int l = s.dnd_l;
  const int big = s.dnd_big;
  const int total = l + big;
  double defect = 0.0;
  for (int k = 0; k <= big; ++k) {
    std::vector<int> order;
    for (int i = 0; i < k; ++i) order.push_back(l + i);
    for (int i = 0; i < l; ++i) order.push_back(i);
    for (int i = k; i < big; ++i) order.push_back(l + i);
    const TraceTensor up = TraceTensor::upper_g(d, l + 1)
                               .swap_pair(l)
                               .contract(l, TraceTensor::upper_g(d, big + 1), k)
                               .permuted(order);
    defect = std::max(defect, up.max_abs_diff(TraceTensor::upper_g(d, total)));
    const TraceTensor lo = TraceTensor::lower_g(d, l + 1)
                               .swap_pair(l)
                               .contract(l, TraceTensor::lower_g(d, big + 1), k)
                               .permuted(order);
    defect = std::max(defect, lo.max_abs_diff(TraceTensor::lower_g(d, total)));
  }
  return defect;
}

double tensor_even_vanish(Index d, const Shape& s) {
  double defect = 0.0;
  for (int rank = 2; rank <= s.even_max; rank += 2)
    defect = std::max(defect, TraceTensor::lower_g(d, rank).antisymmetrized(iota_vec(rank)).max_abs());
  return defect;
}

double tensor_pullout(Index d, const Shape& s) {
  double defect = 0.0;
  for (int rank = 3; rank <= s.odd_max; rank += 2) {
    const TraceTensor g = TraceTensor::lower_g(d, rank);
    defect = std::max(defect, g.antisymmetrized(iota_vec(rank))
                                  .max_abs_diff(g.antisymmetrized(iota_vec(rank - 1, 1))));
  }
  return defect;
}

// Omega = (n-1)! g_[a_1..a_n]; omega^x in any slot kills it.
double tensor_omega_kill(Index d, const Shape& s) {
  double defect = 0.0;
  const std::vector<cplx> unit = TraceTensor::identity_vector(d);
  for (int rank = 3; rank <= s.odd_max; rank += 2) {
    double fact = 1.0;
    for (int i = 2; i < rank; ++i) fact *= i;
    const TraceTensor omega = TraceTensor::lower_g(d, rank).antisymmetrized(iota_vec(rank));
    for (int p = 0; p < rank; ++p) defect = std::max(defect, fact * omega.contract_vector(p, unit).max_abs());
  }
  return defect;
}

double tensor_level(TensorIdentity id, Index d) {
  const Shape s = shape_for(d);
  switch (id) {
    case TensorIdentity::Cyclicity: return tensor_cyclicity(d, s);
    case TensorIdentity::CutAndGlue: return tensor_cut_and_glue(d, s);
    case TensorIdentity::Annihilation: return tensor_annihilation(d, s);
    case TensorIdentity::DragAndDrop: return tensor_drag_and_drop(d, s);
    case TensorIdentity::EvenVanish: return tensor_even_vanish(d, s);
    case TensorIdentity::Pullout: return tensor_pullout(d, s);
    case TensorIdentity::OmegaKill: return tensor_omega_kill(d, s);
  }
  return 0.0;
}

double cached_tensor_level(TensorIdentity id, Index d) {
  static std::mutex mu;
  static std::map<std::pair<int, Index>, double> cache;
  const auto key = std::make_pair(static_cast<int>(id), d);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double v = tensor_level(id, d);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, v);
  return v;
}

// ---- operator-level checks (seeded) ----

double ops_cyclicity(Index d, const Shape& s, Rng& rng) {
  const auto a = random_ops(rng, d, s.cyc_n);
  const auto b = random_ops(rng, d, s.cyc_m);
  const cplx lhs = TraceTensor::lower_g(d, s.cyc_n + s.cyc_m).contract_operators(concat(a, b));
  return std::abs(lhs - product(concat(b, a), d).trace());
}

double ops_cut_and_glue(Index d, const Shape& s, Rng& rng) {
  const int n = s.cut_n;
  const int m = s.cut_m;
  const auto a = random_ops(rng, d, n);
  const auto b = random_ops(rng, d, m);
  // Left piece leaves a lower slot; right piece is read through its raised slot.
  const TraceTensor left = contract_all_but(TraceTensor::lower_gstar(d, n + 1), n, a);
  const TraceTensor right = contract_all_but(TraceTensor::lower_gstar(d, m + 1).swap_pair(0), 0, b);
  const cplx glued = left.contract(0, right, 0).data().front();
  std::vector<Matrix> all = concat(a, b);
  std::reverse(all.begin(), all.end());
  return std::abs(glued - product(all, d).trace());
}

double ops_annihilation(Index d, const Shape& s, Rng& rng) {
  const int r = s.ann_r;
  const auto ops = random_ops(rng, d, r);
  const TraceTensor lower = TraceTensor::lower_g(d, r + 1);
  const cplx ref = product(ops, d).trace();
  double defect = 0.0;
  for (int k = 0; k <= r; ++k) {
    std::vector<Matrix> with_unit = ops;
    with_unit.insert(with_unit.begin() + k, Matrix::Identity(d, d));
    defect = std::max(defect, std::abs(lower.contract_operators(with_unit) - ref));
  }
  return defect;
}

double ops_drag_and_drop(Index d, const Shape& s, Rng& rng) {
  const int l = s.dnd_l;
  const int big = s.dnd_big;
  const auto b = random_ops(rng, d, l);
  const auto a = random_ops(rng, d, big);
  // g_{b_1..b_l x} B^b.. is the composite vector of B_1..B_l in a lower slot.
  const TraceTensor piece = contract_all_but(TraceTensor::lower_g(d, l + 1), l, b).swap_pair(0);
  double defect = 0.0;
  for (int k = 0; k <= big; ++k) {
    const TraceTensor host = TraceTensor::lower_g(d, big + 1);
    const TraceTensor spliced = host.contract(k, piece, 0);
    std::vector<Matrix> expected(a.begin(), a.begin() + k);
    expected.insert(expected.end(), b.begin(), b.end());
    expected.insert(expected.end(), a.begin() + k, a.end());
    defect = std::max(defect, std::abs(spliced.contract_operators(a) - product(expected, d).trace()));
  }
  return defect;
}

double ops_even_vanish(Index d, const Shape& s, Rng& rng) {
  double defect = 0.0;
  for (int rank = 2; rank <= std::max(4, s.even_max); rank += 2) {
    const auto ops = random_ops(rng, d, rank);
    defect = std::max(defect, std::abs(antisym_product(std::span<const Matrix>(ops)).trace()));
  }
  return defect;
}

double ops_pullout(Index d, const Shape& s, Rng& rng) {
  double defect = 0.0;
  for (int rank = 3; rank <= std::max(5, s.odd_max); rank += 2) {
    const auto ops = random_ops(rng, d, rank);
    const cplx full = scalar_bracket_from_gradients(ops, BracketFormula::Full);
    const cplx reduced = scalar_bracket_from_gradients(ops, BracketFormula::Reduced);
    defect = std::max(defect, std::abs(full - reduced));
  }
  return defect;
}

double ops_omega_kill(Index d, const Shape& s, Rng& rng) {
  double defect = 0.0;
  for (int rank = 3; rank <= std::max(5, s.odd_max); rank += 2) {
    const auto ops = random_ops(rng, d, rank - 1);
    for (int p = 0; p < rank; ++p) {
      std::vector<Matrix> with_unit = ops;
      with_unit.insert(with_unit.begin() + p, Matrix::Identity(d, d));
      defect = std::max(defect, std::abs(scalar_bracket_from_gradients(with_unit, BracketFormula::Full)));
    }
  }
  return defect;
}

double operator_level(TensorIdentity id, Index d, Rng& rng) {
  const Shape s = shape_for(d);
  switch (id) {
    case TensorIdentity::Cyclicity: return ops_cyclicity(d, s, rng);
    case TensorIdentity::CutAndGlue: return ops_cut_and_glue(d, s, rng);
    case TensorIdentity::Annihilation: return ops_annihilation(d, s, rng);
    case TensorIdentity::DragAndDrop: return ops_drag_and_drop(d, s, rng);
    case TensorIdentity::EvenVanish: return ops_even_vanish(d, s, rng);
    case TensorIdentity::Pullout: return ops_pullout(d, s, rng);
    case TensorIdentity::OmegaKill: return ops_omega_kill(d, s, rng);
  }
  return 0.0;
}

}  // namespace

double verify_tensor_identity(const TensorIdentityCase& c) {
  if (c.dim < 2 || c.dim > 8) {
    fail(ErrorCode::InvalidArgument, "tensor identity harness supports dims 2..8, got " + std::to_string(c.dim));
  }
  Rng rng(c.seed);
  return std::max(cached_tensor_level(c.identity, c.dim), operator_level(c.identity, c.dim, rng));
}

}  // namespace nambu
