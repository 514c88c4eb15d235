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

// Grid-discretized nonlinear Hamiltonians H(rho; x) on a periodic 1D grid.
//
// Density convention: the kernel is K(x, y) = rho_xy / h with h the grid
// spacing, so h * sum_x K(x, x) = Tr rho. A grid wave function psi with
// h * sum |psi|^2 = 1 corresponds to rho = h psi psi^dagger, i.e. K = psi psi-bar.
//
// Stencils (periodic): D = central first derivative (psi_{x+1} - psi_{x-1}) / 2h,
// L = 3-point Laplacian (psi_{x+1} - 2 psi_x + psi_{x-1}) / h^2. Derivatives of
// K in its first argument are (D K)(x, y); in its second argument (K D^T)(x, y).
// With w(x) = (D K)(x, x), u(x) = (K D^T)(x, x), n(x) = K(x, x) and
// j(x) = (w - u) / 2i the nonlinear parts are diagonal:
//
//   abs2           n
//   log            ln(n / n_ref),  n_ref = 1 / (N h)
//   haag_bannier   A(x) j / n
//   dg_r1          ((L K)(x,x) - (K L^T)(x,x)) / (2i n)
//   dg_r2          (L n) / n
//   dg_r3          j^2 / n^2
//   dg_r4          j (D n) / n^2
//   dg_r5          (D n)^2 / n^2
//   twarock        (P - conj P) / (n u - conj(n u)),  P = (L K)(x,x) u
//   homog_n        F(w) / n^m with F(w) = |w|^2 or (Re w)^2 / |w|^2
//
// each multiplied by the term's real coefficient.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nambu/densmat.hpp"
#include "nambu/multiparticle.hpp"

namespace nambu {

struct Grid1D {
  Index n_points = 16;
  double spacing = 1.0;
  // Only periodic boundaries are supported.

  /// Throws InvalidArgument unless n_points >= 8 and spacing > 0.
  void validate() const;
  /// Periodic grid covering [0, length).
  static Grid1D periodic(Index n_points, double length);
  double x(Index i) const { return spacing * static_cast<double>(i); }
};

enum class CatalogKind { AbsSquared, Logarithmic, HaagBannier, DoebnerGoldin, Twarock, Homogeneous };
enum class HomogeneousForm { AbsSquared, ReSquaredOverAbsSquared };

struct CatalogTerm {
  CatalogKind kind = CatalogKind::AbsSquared;
  double coefficient = 1.0;
  double floor = 1e-12;                 // lower bound for n(x) and |denominators|
  std::vector<double> vector_potential;  // haag_bannier: A(x) per grid point
  int dg_which = 1;                      // doebner-goldin R_1..R_5
  int homog_n = 1;                       // power of n(x) in the homogeneous form
  HomogeneousForm form = HomogeneousForm::AbsSquared;

  /// abs2, log, haag_bannier, dg_r1..dg_r5, twarock, homog_n.
  static std::optional<CatalogTerm> from_name(std::string_view name);
  std::string name() const;
  /// Throws InvalidArgument for out-of-range fields.
  void validate(const Grid1D& grid) const;
};

/// Names accepted by CatalogTerm::from_name, in catalog order.
const std::vector<std::string>& catalog_names();

Matrix first_derivative_stencil(const Grid1D& grid);
Matrix laplacian_stencil(const Grid1D& grid);
/// -L / (2 mass).
Operator kinetic_operator(const Grid1D& grid, double mass = 1.0);

/// Diagonal nonlinear part as a real vector over the grid. Works on any
/// square matrix of the grid size; throws NonPositiveDensity when n(x) or a
/// denominator falls below the floor.
RealVector nonlinear_diagonal(const CatalogTerm& term, const Grid1D& grid, const Matrix& rho);
/// Same quantity from a grid wave function psi (K = psi psi-bar).
RealVector nonlinear_diagonal_psi(const CatalogTerm& term, const Grid1D& grid, const Vector& psi);

/// linear_part + diag(nonlinear_diagonal(rho)).
Operator build_hamiltonian(const CatalogTerm& term, const Grid1D& grid, const DensityMatrix& rho,
                           const Operator& linear_part);
Operator build_hamiltonian_psi(const CatalogTerm& term, const Grid1D& grid, const Vector& psi,
                               const Operator& linear_part);

/// Hamiltonian map rho -> linear_part + nonlinear part, for flows and
/// composite systems.
HamiltonianMap catalog_map(const CatalogTerm& term, const Grid1D& grid, const Operator& linear_part);

/// rho = h psi psi^dagger after normalizing psi to h sum |psi|^2 = 1.
DensityMatrix grid_pure_state(const Grid1D& grid, const Vector& psi);

/// psi(x) = (1 + modulation cos(q)) exp(i momentum q), q = 2 pi x / length.
Vector grid_plane_wave(const Grid1D& grid, double momentum = 1.0, double modulation = 0.3);
/// Two-particle wave function on grid x grid (first particle most significant):
/// (1 + modulation cos(q1 - q2) + 0.1 sin(2 q1)) exp(i momentum (q1 + q2)),
/// normalized so that rho = h^2 Psi Psi^dagger has unit trace.
DensityMatrix grid_entangled_state(const Grid1D& grid, double momentum = 1.0, double modulation = 0.3);

/// H_1(rho_(1)) x I + I x H_2(rho_(2)), nonlinear parts only, on grid x grid.
Operator two_particle_nl_potential(const CatalogTerm& term1, const CatalogTerm& term2, const Grid1D& grid,
                                   const DensityMatrix& rho2);

struct AdditivityResult {
  double ln_defect = 0.0;      // max |ln(ab) - ln a - ln b| over grid pairs
  double square_defect = 0.0;  // max |(ab)^2 - a^2 - b^2|
  double floor_bound = 0.0;    // perturbation bound on ln_defect, 0 when no floor is set
};

/// a = |psi(x)|^2, b = |phi(y)|^2. Without a floor, any non-positive density
/// raises NonPositiveDensity; with a floor eps, densities and their products
/// are clamped to eps first and floor_bound bounds the induced ln defect.
AdditivityResult bbm_additivity_check(const Vector& psi, const Vector& phi,
                                      std::optional<double> floor = std::nullopt);

}  // namespace nambu
