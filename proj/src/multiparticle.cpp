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

#include "nambu/multiparticle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nambu/brackets.hpp"

namespace nambu {

HamiltonianMap HamiltonianMap::constant(const Operator& h, std::string label) {
  const Matrix m = h.matrix();
  return {[m](const Matrix&) { return m; }, std::move(label), true};
}

HamiltonianMap HamiltonianMap::anticommutator(const Operator& h, std::string label) {
  const Matrix m = h.matrix();
  return {[m](const Matrix& rho) -> Matrix { return m * rho + rho * m; }, std::move(label), false};
}

void CompositeSystem::validate() const {
  if (dims.size() < 2) fail(ErrorCode::InvalidArgument, "a composite system needs at least two subsystems");
  if (dims.size() != hamiltonians.size()) {
    fail(ErrorCode::InvalidArgument, "one Hamiltonian map per subsystem is required");
  }
  for (Index d : dims)
    if (d < 1) fail(ErrorCode::InvalidArgument, "subsystem dimensions must be positive");
  for (const HamiltonianMap& h : hamiltonians)
    if (!h.evaluator) fail(ErrorCode::InvalidArgument, "Hamiltonian map '" + h.label + "' has no evaluator");
}

Rhs subsystem_rhs(const HamiltonianMap& map) {
  return [map](const Matrix& rho) -> Matrix {
    const Matrix h = map.evaluator(rho);
    return -kI * (h * rho - rho * h);
  };
}

Matrix extend_rhs(const CompositeSystem& sys, const Matrix& rho_n) {
  sys.validate();
  if (rho_n.rows() != sys.dim() || rho_n.cols() != sys.dim()) {
    fail(ErrorCode::DimensionMismatch, "composite state has dim " + std::to_string(rho_n.rows()) +
                                           ", subsystems multiply to " + std::to_string(sys.dim()));
  }
  Matrix acc = Matrix::Zero(rho_n.rows(), rho_n.cols());
  for (std::size_t k = 0; k < sys.dims.size(); ++k) {
    const Matrix reduced = partial_trace(rho_n, sys.dims, k);
    const Matrix h = sys.hamiltonians[k].evaluator(reduced);
    if (h.rows() != sys.dims[k] || h.cols() != sys.dims[k]) {
      fail(ErrorCode::DimensionMismatch, "map '" + sys.hamiltonians[k].label + "' returned a wrong-sized operator");
    }
    acc += apply_lifted_left(h, sys.dims, k, rho_n);
    acc -= apply_lifted_right(rho_n, h, sys.dims, k);
  }
  return -kI * acc;
}

Operator extend_rhs(const CompositeSystem& sys, const DensityMatrix& rho_n) {
  return Operator(extend_rhs(sys, rho_n.matrix()));
}

Rhs composite_rhs(const CompositeSystem& sys) {
  sys.validate();
  return [sys](const Matrix& rho) { return extend_rhs(sys, rho); };
}

double separability_defect(const CompositeSystem& sys, const DensityMatrix& rho_n0, std::size_t k,
                           const IntegratorConfig& cfg) {
  sys.validate();
  if (k >= sys.dims.size()) fail(ErrorCode::InvalidArgument, "subsystem index out of range");
  if (rho_n0.dim() != sys.dim()) fail(ErrorCode::DimensionMismatch, "initial state does not match subsystem dims");
  IntegratorConfig fixed = cfg;
  fixed.method = Method::RK4;
  fixed.track_spectrum = false;
  fixed.track_casimirs = false;
  const Trajectory full = integrate(composite_rhs(sys), rho_n0, fixed);
  const Trajectory sub = integrate(subsystem_rhs(sys.hamiltonians[k]), partial_trace(rho_n0, sys.dims, k), fixed);
  double defect = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const Matrix reduced = partial_trace(full.states[i].matrix(), sys.dims, k);
    defect = std::max(defect, max_abs(reduced - sub.states[i].matrix()));
  }
  return defect;
}

namespace {

Matrix total_hamiltonian(std::span<const Index> dims, const Operator& h1, const std::optional<Operator>& h2) {
  Matrix h = lift(h1.matrix(), dims, 0);
  if (h2) h += lift(h2->matrix(), dims, 1);
  return h;
}

double sub_c2(const Matrix& rho, std::span<const Index> dims) {
  const Matrix r = partial_trace(rho, dims, 0);
  return (r * r).trace().real();
}

}  // namespace

BigBrotherResult big_brother_rate(const DensityMatrix& rho2, std::span<const Index> dims, const Operator& h1,
                                  const std::optional<Operator>& h2) {
  if (dims.size() != 2) fail(ErrorCode::InvalidArgument, "big brother rate needs exactly two subsystems");
  if (total_dim(dims) != rho2.dim()) fail(ErrorCode::DimensionMismatch, "state does not match subsystem dims");
  if (h1.dim() != dims[0]) fail(ErrorCode::DimensionMismatch, "H_1 does not act on subsystem 0");
  if (h2 && h2->dim() != dims[1]) fail(ErrorCode::DimensionMismatch, "H_2 does not act on subsystem 1");
  if (!h1.is_hermitian()) fail(ErrorCode::NonHermitianInput, "H_1 is not Hermitian");

  const Matrix& rho = rho2.matrix();
  const Matrix r1 = partial_trace(rho, dims, 0);
  const Matrix r1_sq = partial_trace(Matrix(rho * rho), dims, 0);
  BigBrotherResult out;
  out.commutator_trace = ((r1_sq * r1 - r1 * r1_sq) * h1.matrix()).trace();
  out.rate = (-2.0 * kI * out.commutator_trace).real();

  const Matrix h = total_hamiltonian(dims, h1, h2);
  const Rhs f = [&h](const Matrix& m) -> Matrix {
    const Matrix sq = m * m;
    return -kI * (h * sq - sq * h);
  };
  auto central = [&](double step) {
    return (sub_c2(rk4_step(f, rho, step), dims) - sub_c2(rk4_step(f, rho, -step), dims)) / (2.0 * step);
  };
  out.fd_rate = central(1e-4);
  out.fd_rate_fine = central(1e-5);
  const double diff = std::abs(out.rate - out.fd_rate);
  out.rel_error = std::abs(out.fd_rate) < 1e-12 ? diff : diff / std::abs(out.fd_rate);
  if (std::abs(out.commutator_trace) > 1e-12) out.fitted_constant = out.fd_rate / out.commutator_trace;
  return out;
}

DualSchemeReport dual_scheme_run(const Operator& h1, const Operator& h2, const Generator& entropy,
                                 const DensityMatrix& rho2, std::span<const Index> dims,
                                 const IntegratorConfig& cfg) {
  if (dims.size() != 2) fail(ErrorCode::InvalidArgument, "dual-scheme run needs exactly two subsystems");
  const std::vector<Index> dv(dims.begin(), dims.end());
  const Operator htot(total_hamiltonian(dims, h1, h2));
  const BracketSpec spec(3, {Generator::linear(htot), entropy}, cplx(0.0, -1.0));

  const Matrix e1 = h1.matrix();
  const Matrix e2 = h2.matrix();
  const std::vector<NamedObservable> obs{
      {"energy_sub1", [e1, dv](const DensityMatrix& s) { return (e1 * partial_trace(s.matrix(), dv, 0)).trace().real(); }},
      {"energy_sub2", [e2, dv](const DensityMatrix& s) { return (e2 * partial_trace(s.matrix(), dv, 1)).trace().real(); }},
      {"C1_sub1", [dv](const DensityMatrix& s) { return partial_trace(s.matrix(), dv, 0).trace().real(); }},
      {"C2_sub1", [dv](const DensityMatrix& s) { return sub_c2(s.matrix(), dv); }},
  };
  IntegratorConfig c = cfg;
  c.track_casimirs = true;
  const Trajectory traj = integrate(spec, rho2, c, obs);

  DualSchemeReport rep;
  for (const auto& row : traj.observables) {
    const auto& first = traj.observables.front();
    rep.energy_drift_1 = std::max(rep.energy_drift_1, std::abs(row[0] - first[0]));
    rep.energy_drift_2 = std::max(rep.energy_drift_2, std::abs(row[1] - first[1]));
    rep.c1_sub_drift = std::max(rep.c1_sub_drift, std::abs(row[2] - first[2]));
    rep.c2_sub_variation = std::max(rep.c2_sub_variation, std::abs(row[3] - first[3]));
  }
  for (double d : traj.diagnostics.max_casimir_drift) rep.global_casimir_drift = std::max(rep.global_casimir_drift, d);

  const CompositeSystem alp{dv, {HamiltonianMap::anticommutator(h1), HamiltonianMap::anticommutator(h2)}};
  IntegratorConfig lp = cfg;
  lp.track_spectrum = false;
  lp.track_casimirs = false;
  const Trajectory lp_traj = integrate(composite_rhs(alp), rho2, lp, {obs[3]});
  for (const auto& row : lp_traj.observables) {
    rep.lie_poisson_c2_sub_variation =
        std::max(rep.lie_poisson_c2_sub_variation, std::abs(row[0] - lp_traj.observables.front()[0]));
  }
  return rep;
}

double subsystem_energy_drift(const Operator& h1, const Operator& h2, const Generator& entropy,
                              const DensityMatrix& rho2, std::span<const Index> dims, const IntegratorConfig& cfg) {
  return dual_scheme_run(h1, h2, entropy, rho2, dims, cfg).energy_drift_1;
}

Matrix gisin_extension(const Rhs& block_rhs, const Matrix& rho2, std::span<const Index> dims,
                       const Matrix& ancilla_basis, double t, double dt) {
  if (dims.size() != 2) fail(ErrorCode::InvalidArgument, "the block extension needs exactly two subsystems");
  if (total_dim(dims) != rho2.rows()) fail(ErrorCode::DimensionMismatch, "state does not match subsystem dims");
  const Index d1 = dims[0];
  const Index d2 = dims[1];
  if (ancilla_basis.rows() != d2 || ancilla_basis.cols() != d2) {
    fail(ErrorCode::DimensionMismatch, "ancilla basis must be a d2 x d2 unitary");
  }
  if (max_abs(ancilla_basis.adjoint() * ancilla_basis - Matrix::Identity(d2, d2)) > 1e-10) {
    fail(ErrorCode::InvalidArgument, "ancilla basis is not unitary");
  }
  // rho in the rotated basis: (I x U)^dagger rho (I x U); its (s, s') blocks are a_{ss'}.
  const Matrix rot = kron(Matrix::Identity(d1, d1), ancilla_basis);
  const Matrix local = rot.adjoint() * rho2 * rot;
  Matrix evolved = Matrix::Zero(local.rows(), local.cols());
  for (Index s = 0; s < d2; ++s)
    for (Index sp = 0; sp < d2; ++sp) {
      Matrix block(d1, d1);
      for (Index a = 0; a < d1; ++a)
        for (Index b = 0; b < d1; ++b) block(a, b) = local(a * d2 + s, b * d2 + sp);
      const Matrix out = propagate(block_rhs, block, t, dt);
      for (Index a = 0; a < d1; ++a)
        for (Index b = 0; b < d1; ++b) evolved(a * d2 + s, b * d2 + sp) = out(a, b);
    }
  return rot * evolved * rot.adjoint();
}

Matrix rotated_composite_evolution(const CompositeSystem& sys, const Matrix& rho2, const Matrix& ancilla_basis,
                                   double t, double dt) {
  sys.validate();
  if (sys.dims.size() != 2) fail(ErrorCode::InvalidArgument, "rotation applies to two subsystems");
  const Matrix rot = kron(Matrix::Identity(sys.dims[0], sys.dims[0]), ancilla_basis);
  // The rotated state evolves under the rotated ancilla map.
  CompositeSystem rotated = sys;
  const HamiltonianMap anc = sys.hamiltonians[1];
  rotated.hamiltonians[1] = {[anc, ancilla_basis](const Matrix& r) -> Matrix {
                               const Matrix h = anc.evaluator(ancilla_basis * r * ancilla_basis.adjoint());
                               return ancilla_basis.adjoint() * h * ancilla_basis;
                             },
                             anc.label, anc.linear};
  const Matrix evolved = propagate(composite_rhs(rotated), Matrix(rot.adjoint() * rho2 * rot), t, dt);
  return rot * evolved * rot.adjoint();
}

double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

DensityMatrix bell_phi_plus() {
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  psi(3) = 1.0;
  return DensityMatrix::pure(psi);
}

DensityMatrix singlet_state() {
  Vector psi = Vector::Zero(4);
  psi(1) = 1.0;
  psi(2) = -1.0;
  return DensityMatrix::pure(psi);
}

DensityMatrix bb_correlated_state() {
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  const Matrix mixed = kron(Matrix::Identity(2, 2) / 2.0, diag);
  return DensityMatrix(0.5 * bell_phi_plus().matrix() + 0.5 * mixed, kDefaultHermTol, "bb_correlated");
}

}  // namespace nambu
