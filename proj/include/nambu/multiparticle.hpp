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

// Noninteracting N-particle extensions of almost-Lie-Poisson flows
//
//   d rho_N/dt = -i sum_k [ lift_k(H_k(rho_(k))), rho_N ],
//
// where rho_(k) is the reduced state of subsystem k (zero-based) and lift_k
// places an operator at slot k with identities elsewhere. Subsystem 0 is the
// most significant Kronecker index.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nambu/densmat.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/generator.hpp"

namespace nambu {

/// State-dependent subsystem Hamiltonian H(rho).
struct HamiltonianMap {
  std::function<Matrix(const Matrix&)> evaluator;
  std::string label;
  bool linear = false;  // true when H does not depend on rho

  static HamiltonianMap constant(const Operator& h, std::string label = "linear");
  /// H(rho) = H rho + rho H, so that [H(rho), rho] = [H, rho^2].
  static HamiltonianMap anticommutator(const Operator& h, std::string label = "anticommutator");
};

struct CompositeSystem {
  std::vector<Index> dims;
  std::vector<HamiltonianMap> hamiltonians;

  /// Throws InvalidArgument unless there are at least two subsystems, one
  /// map per subsystem and positive dims.
  void validate() const;
  Index dim() const { return total_dim(dims); }
};

/// -i [H(rho), rho] for a single subsystem.
Rhs subsystem_rhs(const HamiltonianMap& map);

Matrix extend_rhs(const CompositeSystem& sys, const Matrix& rho_n);
Operator extend_rhs(const CompositeSystem& sys, const DensityMatrix& rho_n);
Rhs composite_rhs(const CompositeSystem& sys);

/// Integrates the composite flow and the standalone flow of subsystem k
/// from the reduced initial state, both with fixed-step RK4 at cfg.dt, and
/// returns max over recorded times of |Tr_{others} rho_N(t) - rho_(k)(t)|_max.
double separability_defect(const CompositeSystem& sys, const DensityMatrix& rho_n0, std::size_t k,
                           const IntegratorConfig& cfg);

struct BigBrotherResult {
  double rate = 0.0;       // dC_2(rho_(1))/dt from the closed formula
  double fd_rate = 0.0;    // central difference with step 1e-4
  double fd_rate_fine = 0.0;  // central difference with step 1e-5
  double rel_error = 0.0;  // |rate - fd_rate| / |fd_rate| (absolute when |fd_rate| < 1e-12)
  cplx commutator_trace{};  // Tr([Tr_2 rho^2, Tr_2 rho] H_1)
  std::optional<cplx> fitted_constant;  // fd_rate / commutator_trace, expected -2i
};

/// Rate of the first subsystem's C_2 under d rho/dt = -i[H_1 x I + I x H_2, rho^2]
/// (two subsystems). The closed form is i dC_2/dt = 2 Tr([Tr_2 rho^2, Tr_2 rho] H_1);
/// the result carries a finite-difference cross-check of it. H_2 defaults to
/// zero and does not affect the rate.
BigBrotherResult big_brother_rate(const DensityMatrix& rho2, std::span<const Index> dims, const Operator& h1,
                                  const std::optional<Operator>& h2 = std::nullopt);

struct DualSchemeReport {
  double energy_drift_1 = 0.0;     // max |Tr(H_1 rho_(1)(t)) - Tr(H_1 rho_(1)(0))|
  double energy_drift_2 = 0.0;
  double c1_sub_drift = 0.0;       // max |C_1(rho_(1)(t)) - C_1(rho_(1)(0))|
  double c2_sub_variation = 0.0;   // max |C_2(rho_(1)(t)) - C_2(rho_(1)(0))|
  double global_casimir_drift = 0.0;  // max over k <= 5 of the global C_k drift
  double lie_poisson_c2_sub_variation = 0.0;  // same C_2 measure for the a-LP extension
};

/// d rho/dt = -i[H_1 x I + I x H_2, G_S(rho)] on two subsystems, compared
/// with the almost-Lie-Poisson extension built from H_k rho + rho H_k.
DualSchemeReport dual_scheme_run(const Operator& h1, const Operator& h2, const Generator& entropy,
                                 const DensityMatrix& rho2, std::span<const Index> dims,
                                 const IntegratorConfig& cfg);

/// energy_drift_1 of dual_scheme_run.
double subsystem_energy_drift(const Operator& h1, const Operator& h2, const Generator& entropy,
                              const DensityMatrix& rho2, std::span<const Index> dims, const IntegratorConfig& cfg);

/// Block-wise extension of a one-particle flow to subsystem 0 of a two-part
/// system. With u_s the columns of `ancilla_basis`, the blocks are
/// a_{ss'} = (I x u_s^dagger) rho (I x u_s'); each block is propagated for
/// time t by the literal right-hand side `block_rhs` (no symmetrization) and
/// the result is sum_{ss'} phi_t(a_{ss'}) x u_s u_s'^dagger.
Matrix gisin_extension(const Rhs& block_rhs, const Matrix& rho2, std::span<const Index> dims,
                       const Matrix& ancilla_basis, double t, double dt);

/// Evolves (I x U)^dagger rho (I x U) with the composite flow and rotates
/// back; equals the unrotated evolution when the ancilla map vanishes.
Matrix rotated_composite_evolution(const CompositeSystem& sys, const Matrix& rho2, const Matrix& ancilla_basis,
                                   double t, double dt);

double frobenius_distance(const Matrix& a, const Matrix& b);

/// 0.5 |Phi+><Phi+| + 0.5 (I/2 x diag(0.7, 0.3)).
DensityMatrix bb_correlated_state();
/// (|01> - |10>)(<01| - <10|) / 2.
DensityMatrix singlet_state();
/// (|00> + |11>) / sqrt 2 as a projector.
DensityMatrix bell_phi_plus();

}  // namespace nambu
