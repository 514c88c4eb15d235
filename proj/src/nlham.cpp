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

#include "nambu/nlham.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nambu {

void Grid1D::validate() const {
  if (n_points < 8) fail(ErrorCode::InvalidArgument, "grid needs at least 8 points, got " + std::to_string(n_points));
  if (!(spacing > 0.0) || !std::isfinite(spacing)) fail(ErrorCode::InvalidArgument, "grid spacing must be positive");
}

Grid1D Grid1D::periodic(Index n_points, double length) {
  Grid1D g{n_points, length / static_cast<double>(n_points)};
  g.validate();
  return g;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"abs2",  "log",   "haag_bannier", "dg_r1",   "dg_r2", "dg_r3",
                                              "dg_r4", "dg_r5", "twarock",      "homog_n"};
  return names;
}

std::optional<CatalogTerm> CatalogTerm::from_name(std::string_view name) {
  CatalogTerm t;
  if (name == "abs2") t.kind = CatalogKind::AbsSquared;
  else if (name == "log") t.kind = CatalogKind::Logarithmic;
  else if (name == "haag_bannier") t.kind = CatalogKind::HaagBannier;
  else if (name == "twarock") t.kind = CatalogKind::Twarock;
  else if (name == "homog_n") t.kind = CatalogKind::Homogeneous;
  else if (name.size() == 5 && name.substr(0, 4) == "dg_r" && name[4] >= '1' && name[4] <= '5') {
    t.kind = CatalogKind::DoebnerGoldin;
    t.dg_which = name[4] - '0';
  } else {
    return std::nullopt;
  }
  return t;
}

std::string CatalogTerm::name() const {
  switch (kind) {
    case CatalogKind::AbsSquared: return "abs2";
    case CatalogKind::Logarithmic: return "log";
    case CatalogKind::HaagBannier: return "haag_bannier";
    case CatalogKind::DoebnerGoldin: return "dg_r" + std::to_string(dg_which);
    case CatalogKind::Twarock: return "twarock";
    case CatalogKind::Homogeneous: return "homog_n";
  }
  return "unknown";
}

void CatalogTerm::validate(const Grid1D& grid) const {
  grid.validate();
  if (!std::isfinite(coefficient)) fail(ErrorCode::InvalidArgument, "coefficient must be finite");
  if (!(floor > 0.0)) fail(ErrorCode::InvalidArgument, "regularization floor must be positive");
  if (kind == CatalogKind::HaagBannier && static_cast<Index>(vector_potential.size()) != grid.n_points) {
    fail(ErrorCode::InvalidArgument, "haag_bannier needs one vector-potential value per grid point");
  }
  if (kind == CatalogKind::DoebnerGoldin && (dg_which < 1 || dg_which > 5)) {
    fail(ErrorCode::InvalidArgument, "doebner-goldin term index must lie in 1..5");
  }
  if (kind == CatalogKind::Homogeneous && homog_n < 0) {
    fail(ErrorCode::InvalidArgument, "homogeneity degree must be non-negative");
  }
}

Matrix first_derivative_stencil(const Grid1D& grid) {
  grid.validate();
  const Index n = grid.n_points;
  Matrix d = Matrix::Zero(n, n);
  const double c = 1.0 / (2.0 * grid.spacing);
  for (Index i = 0; i < n; ++i) {
    d(i, (i + 1) % n) += c;
    d(i, (i + n - 1) % n) -= c;
  }
  return d;
}

Matrix laplacian_stencil(const Grid1D& grid) {
  grid.validate();
  const Index n = grid.n_points;
  Matrix l = Matrix::Zero(n, n);
  const double c = 1.0 / (grid.spacing * grid.spacing);
  for (Index i = 0; i < n; ++i) {
    l(i, i) -= 2.0 * c;
    l(i, (i + 1) % n) += c;
    l(i, (i + n - 1) % n) += c;
  }
  return l;
}

Operator kinetic_operator(const Grid1D& grid, double mass) {
  if (!(mass > 0.0)) fail(ErrorCode::InvalidArgument, "mass must be positive");
  return Operator(-laplacian_stencil(grid) / (2.0 * mass));
}

namespace {

const cplx kTwoI{0.0, 2.0};

void require_floor(double value, double floor, const std::string& what, Index x) {
  if (!(value >= floor)) {
    fail(ErrorCode::NonPositiveDensity,
         what + " at grid point " + std::to_string(x) + " is below the floor (" + std::to_string(value) + ")");
  }
}

cplx homogeneous_f(HomogeneousForm form, cplx w, double floor, Index x) {
  if (form == HomogeneousForm::AbsSquared) return std::norm(w);
  require_floor(std::norm(w), floor, "|w|^2", x);
  return w.real() * w.real() / std::norm(w);
}

bool needs_density_floor(const CatalogTerm& t) {
  if (t.kind == CatalogKind::AbsSquared) return false;
  if (t.kind == CatalogKind::Homogeneous) return t.homog_n > 0;
  return true;
}

}  // namespace

RealVector nonlinear_diagonal(const CatalogTerm& term, const Grid1D& grid, const Matrix& rho) {
  term.validate(grid);
  const Index n = grid.n_points;
  if (rho.rows() != n || rho.cols() != n) {
    fail(ErrorCode::DimensionMismatch, "state dim " + std::to_string(rho.rows()) + " does not match grid size " +
                                           std::to_string(n));
  }
  const Matrix k = rho / grid.spacing;
  const Matrix d = first_derivative_stencil(grid);
  const Matrix l = laplacian_stencil(grid);
  const Vector dens = k.diagonal();
  const Vector w = (d * k).diagonal();                // derivative in the first argument
  const Vector u = (k * d.transpose()).diagonal();    // derivative in the second argument
  const Vector lw = (l * k).diagonal();
  const Vector lu = (k * l.transpose()).diagonal();
  const Vector dn = d * dens;
  const Vector ln = l * dens;
  const double n_ref = 1.0 / (static_cast<double>(n) * grid.spacing);

  RealVector out(n);
  for (Index x = 0; x < n; ++x) {
    const cplx nx = dens(x);
    if (needs_density_floor(term)) require_floor(nx.real(), term.floor, "density", x);
    const cplx j = (w(x) - u(x)) / kTwoI;
    cplx v;
    switch (term.kind) {
      case CatalogKind::AbsSquared: v = nx; break;
      case CatalogKind::Logarithmic: v = std::log(nx.real() / n_ref); break;
      case CatalogKind::HaagBannier: v = term.vector_potential[static_cast<std::size_t>(x)] * j / nx; break;
      case CatalogKind::DoebnerGoldin:
        switch (term.dg_which) {
          case 1: v = (lw(x) - lu(x)) / (kTwoI * nx); break;
          case 2: v = ln(x) / nx; break;
          case 3: v = j * j / (nx * nx); break;
          case 4: v = j * dn(x) / (nx * nx); break;
          default: v = dn(x) * dn(x) / (nx * nx); break;
        }
        break;
      case CatalogKind::Twarock: {
        const cplx p = lw(x) * u(x);
        const cplx q = nx * u(x);
        const cplx den = q - std::conj(q);
        require_floor(std::abs(den), term.floor, "twarock denominator", x);
        v = (p - std::conj(p)) / den;
        break;
      }
      case CatalogKind::Homogeneous:
        v = homogeneous_f(term.form, w(x), term.floor, x) / std::pow(nx, term.homog_n);
        break;
    }
    out(x) = term.coefficient * v.real();
  }
  return out;
}

RealVector nonlinear_diagonal_psi(const CatalogTerm& term, const Grid1D& grid, const Vector& psi) {
  term.validate(grid);
  const Index n = grid.n_points;
  if (psi.size() != n) fail(ErrorCode::DimensionMismatch, "wave function does not match grid size");
  const Matrix d = first_derivative_stencil(grid);
  const Matrix l = laplacian_stencil(grid);
  const Vector p1 = d * psi;  // psi'
  const Vector p2 = l * psi;  // psi''
  Vector dens(n);
  for (Index x = 0; x < n; ++x) dens(x) = std::norm(psi(x));
  const Vector dn = d * dens;
  const Vector ln = l * dens;
  const double n_ref = 1.0 / (static_cast<double>(n) * grid.spacing);

  RealVector out(n);
  for (Index x = 0; x < n; ++x) {
    const cplx f = psi(x);
    const cplx fb = std::conj(f);
    const cplx nx = dens(x);
    if (needs_density_floor(term)) require_floor(nx.real(), term.floor, "density", x);
    const cplx cur = fb * p1(x) - f * std::conj(p1(x));
    cplx v;
    switch (term.kind) {
      case CatalogKind::AbsSquared: v = nx; break;
      case CatalogKind::Logarithmic: v = std::log(nx.real() / n_ref); break;
      case CatalogKind::HaagBannier: v = term.vector_potential[static_cast<std::size_t>(x)] * cur / (kTwoI * nx); break;
      case CatalogKind::DoebnerGoldin:
        switch (term.dg_which) {
          case 1: v = (fb * p2(x) - f * std::conj(p2(x))) / (kTwoI * nx); break;
          case 2: v = ln(x) / nx; break;
          case 3: v = cur * cur / (kTwoI * kTwoI * nx * nx); break;
          case 4: v = cur * dn(x) / (kTwoI * nx * nx); break;
          default: v = dn(x) * dn(x) / (nx * nx); break;
        }
        break;
      case CatalogKind::Twarock: {
        const cplx den = f * std::conj(p1(x)) - fb * p1(x);
        require_floor(nx.real() * std::abs(den), term.floor, "twarock denominator", x);
        v = (p2(x) * std::conj(p1(x)) - std::conj(p2(x)) * p1(x)) / den;
        break;
      }
      case CatalogKind::Homogeneous:
        v = homogeneous_f(term.form, fb * p1(x), term.floor, x) / std::pow(nx, term.homog_n);
        break;
    }
    out(x) = term.coefficient * v.real();
  }
  return out;
}

namespace {

Operator with_diagonal(const Operator& linear_part, const RealVector& diag, Index n) {
  if (linear_part.dim() != n) fail(ErrorCode::DimensionMismatch, "linear part does not match grid size");
  Matrix h = linear_part.matrix();
  for (Index x = 0; x < n; ++x) h(x, x) += diag(x);
  return Operator(std::move(h));
}

}  // namespace

Operator build_hamiltonian(const CatalogTerm& term, const Grid1D& grid, const DensityMatrix& rho,
                           const Operator& linear_part) {
  return with_diagonal(linear_part, nonlinear_diagonal(term, grid, rho.matrix()), grid.n_points);
}

Operator build_hamiltonian_psi(const CatalogTerm& term, const Grid1D& grid, const Vector& psi,
                               const Operator& linear_part) {
  return with_diagonal(linear_part, nonlinear_diagonal_psi(term, grid, psi), grid.n_points);
}

HamiltonianMap catalog_map(const CatalogTerm& term, const Grid1D& grid, const Operator& linear_part) {
  term.validate(grid);
  if (linear_part.dim() != grid.n_points) fail(ErrorCode::DimensionMismatch, "linear part does not match grid size");
  const Matrix lin = linear_part.matrix();
  return {[term, grid, lin](const Matrix& rho) -> Matrix {
            Matrix h = lin;
            h.diagonal() += nonlinear_diagonal(term, grid, rho).cast<cplx>();
            return h;
          },
          term.name(), false};
}

DensityMatrix grid_pure_state(const Grid1D& grid, const Vector& psi) {
  grid.validate();
  if (psi.size() != grid.n_points) fail(ErrorCode::DimensionMismatch, "wave function does not match grid size");
  const double norm2 = grid.spacing * psi.squaredNorm();
  if (!(norm2 > 0.0)) fail(ErrorCode::InvalidArgument, "wave function is zero");
  const Vector v = psi / std::sqrt(norm2);
  return DensityMatrix(grid.spacing * v * v.adjoint(), std::numeric_limits<double>::infinity());
}

Vector grid_plane_wave(const Grid1D& grid, double momentum, double modulation) {
  grid.validate();
  const double length = grid.spacing * static_cast<double>(grid.n_points);
  Vector psi(grid.n_points);
  for (Index i = 0; i < grid.n_points; ++i) {
    const double q = 2.0 * std::numbers::pi * grid.x(i) / length;
    psi(i) = std::polar(1.0 + modulation * std::cos(q), momentum * q);
  }
  return psi;
}

DensityMatrix grid_entangled_state(const Grid1D& grid, double momentum, double modulation) {
  grid.validate();
  const Index n = grid.n_points;
  const double length = grid.spacing * static_cast<double>(n);
  Vector psi(n * n);
  for (Index a = 0; a < n; ++a) {
    const double q1 = 2.0 * std::numbers::pi * grid.x(a) / length;
    for (Index b = 0; b < n; ++b) {
      const double q2 = 2.0 * std::numbers::pi * grid.x(b) / length;
      psi(a * n + b) = std::polar(1.0 + modulation * std::cos(q1 - q2) + 0.1 * std::sin(2.0 * q1), momentum * (q1 + q2));
    }
  }
  const double h2 = grid.spacing * grid.spacing;
  psi /= std::sqrt(h2 * psi.squaredNorm());
  return DensityMatrix(h2 * psi * psi.adjoint(), std::numeric_limits<double>::infinity());
}

Operator two_particle_nl_potential(const CatalogTerm& term1, const CatalogTerm& term2, const Grid1D& grid,
                                   const DensityMatrix& rho2) {
  const Index n = grid.n_points;
  if (rho2.dim() != n * n) fail(ErrorCode::DimensionMismatch, "two-particle state must have dim n^2");
  const std::vector<Index> dims{n, n};
  const RealVector v1 = nonlinear_diagonal(term1, grid, partial_trace(rho2.matrix(), dims, 0));
  const RealVector v2 = nonlinear_diagonal(term2, grid, partial_trace(rho2.matrix(), dims, 1));
  Matrix h = Matrix::Zero(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) h(a * n + b, a * n + b) = v1(a) + v2(b);
  return Operator(std::move(h));
}

AdditivityResult bbm_additivity_check(const Vector& psi, const Vector& phi, std::optional<double> floor) {
  if (floor && !(*floor > 0.0)) fail(ErrorCode::InvalidArgument, "floor must be positive");
  auto density = [&](cplx z, Index x) {
    const double a = std::norm(z);
    if (!floor) require_floor(a, std::numeric_limits<double>::min(), "density", x);
    return a;
  };
  AdditivityResult r;
  for (Index x = 0; x < psi.size(); ++x) {
    const double a = density(psi(x), x);
    for (Index y = 0; y < phi.size(); ++y) {
      const double b = density(phi(y), y);
      const double ab = a * b;
      r.square_defect = std::max(r.square_defect, std::abs(ab * ab - a * a - b * b));
      if (!floor) {
        r.ln_defect = std::max(r.ln_defect, std::abs(std::log(ab) - std::log(a) - std::log(b)));
        continue;
      }
      const double e = *floor;
      const double ca = std::max(a, e);
      const double cb = std::max(b, e);
      const double cab = std::max(ab, e);
      r.ln_defect = std::max(r.ln_defect, std::abs(std::log(cab) - std::log(ca) - std::log(cb)));
      // Each clamp moves its logarithm by ln(clamped / raw) >= 0.
      const double bound = std::log(ca / a) + std::log(cb / b) + std::log(cab / ab);
      r.floor_bound = std::max(r.floor_bound, bound);
    }
  }
  return r;
}

}  // namespace nambu
