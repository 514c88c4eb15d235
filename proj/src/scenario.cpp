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

#include "nambu/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "nambu/matrix_io.hpp"
#include "nambu/multiparticle.hpp"
#include "nambu/nlham.hpp"
#include "nambu/random.hpp"

namespace nambu {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::Validation, path + ": " + what);
}

std::string join_path(const std::string& path, const std::string& key) { return path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) invalid(path, "expected an object");
  return j;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      invalid(join_path(path, key), "unknown key");
    }
  }
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& path, const char* key) {
  const json* v = find(j, key);
  if (!v) invalid(join_path(path, key), "required key is missing");
  return *v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(path, "expected a finite number");
  return v;
}

double as_positive(const json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!(v > 0.0)) invalid(path, "expected a positive number");
  return v;
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) invalid(path, "expected an integer");
  return j.get<long long>();
}

long long as_positive_integer(const json& j, const std::string& path) {
  const long long v = as_integer(j, path);
  if (v < 1) invalid(path, "expected a positive integer");
  return v;
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    invalid(path, "expected a non-negative integer seed");
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) invalid(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) invalid(path, "expected true or false");
  return j.get<bool>();
}

// Re-raises domain errors from the library as validation errors at `path`.
template <class F>
auto at(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Validation) throw;
    invalid(path, e.what());
  }
}

// ---------------------------------------------------------------------------

struct Space {
  Index dim = 0;
  std::optional<Grid1D> grid;
};

struct HamiltonianSpec {
  Matrix linear;
  std::optional<CatalogTerm> catalog;
};

Grid1D parse_grid(const json& j, const std::string& path) {
  check_keys(j, path, {"n_points", "length", "spacing"});
  const long long n = as_positive_integer(require(j, path, "n_points"), join_path(path, "n_points"));
  const json* len = find(j, "length");
  const json* sp = find(j, "spacing");
  if ((len != nullptr) == (sp != nullptr)) invalid(path, "give exactly one of \"length\" or \"spacing\"");
  Grid1D g;
  g.n_points = static_cast<Index>(n);
  g.spacing = len ? as_positive(*len, join_path(path, "length")) / static_cast<double>(n)
                  : as_positive(*sp, join_path(path, "spacing"));
  at(path, [&] { g.validate(); });
  return g;
}

Space parse_single(const json& j, const std::string& path) {
  check_keys(j, path, {"dim", "grid"});
  const json* dim = find(j, "dim");
  const json* grid = find(j, "grid");
  if ((dim != nullptr) == (grid != nullptr)) invalid(path, "give exactly one of \"dim\" or \"grid\"");
  Space s;
  if (dim) {
    s.dim = static_cast<Index>(as_positive_integer(*dim, join_path(path, "dim")));
  } else {
    s.grid = parse_grid(*grid, join_path(path, "grid"));
    s.dim = s.grid->n_points;
  }
  return s;
}

Matrix harmonic_ladder(Index d) {
  Matrix h = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) h(i, i) = static_cast<double>(i) + 0.5;
  return h;
}

CatalogTerm parse_catalog(const json& j, const std::string& path, const Grid1D& grid) {
  check_keys(j, path, {"term", "coefficient", "floor", "vector_potential", "homog_n", "form"});
  const std::string name = as_string(require(j, path, "term"), join_path(path, "term"));
  auto term = CatalogTerm::from_name(name);
  if (!term) {
    std::string known;
    for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
    invalid(join_path(path, "term"), "unknown catalog term \"" + name + "\" (known: " + known + ")");
  }
  if (const json* v = find(j, "coefficient")) term->coefficient = as_number(*v, join_path(path, "coefficient"));
  if (const json* v = find(j, "floor")) term->floor = as_positive(*v, join_path(path, "floor"));
  if (const json* v = find(j, "homog_n")) {
    const long long n = as_integer(*v, join_path(path, "homog_n"));
    if (n < 0) invalid(join_path(path, "homog_n"), "expected a non-negative integer");
    term->homog_n = static_cast<int>(n);
  }
  if (const json* v = find(j, "form")) {
    const std::string f = as_string(*v, join_path(path, "form"));
    if (f == "abs2") term->form = HomogeneousForm::AbsSquared;
    else if (f == "re2_over_abs2") term->form = HomogeneousForm::ReSquaredOverAbsSquared;
    else invalid(join_path(path, "form"), "expected \"abs2\" or \"re2_over_abs2\"");
  }
  if (const json* v = find(j, "vector_potential")) {
    const std::string vp = join_path(path, "vector_potential");
    if (v->is_number()) {
      term->vector_potential.assign(static_cast<std::size_t>(grid.n_points), as_number(*v, vp));
    } else if (v->is_array()) {
      for (std::size_t i = 0; i < v->size(); ++i) term->vector_potential.push_back(as_number((*v)[i], index_path(vp, i)));
    } else {
      invalid(vp, "expected a number or an array of numbers");
    }
  } else if (term->kind == CatalogKind::HaagBannier) {
    term->vector_potential.resize(static_cast<std::size_t>(grid.n_points));
    for (Index i = 0; i < grid.n_points; ++i) {
      term->vector_potential[static_cast<std::size_t>(i)] = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                                     static_cast<double>(grid.n_points));
    }
  }
  at(path, [&] { term->validate(grid); });
  return *term;
}

HamiltonianSpec parse_hamiltonian(const json& j, const std::string& path, const Space& space, std::uint64_t seed) {
  check_keys(j, path, {"matrix", "named", "scale", "seed", "kinetic", "potential", "catalog"});
  HamiltonianSpec h;
  h.linear = Matrix::Zero(space.dim, space.dim);
  bool any = false;
  if (const json* m = find(j, "matrix")) {
    const std::string mp = join_path(path, "matrix");
    const Matrix lit = matrix_from_json(*m, mp);
    if (lit.rows() != space.dim || lit.cols() != space.dim) {
      invalid(mp, "expected a " + std::to_string(space.dim) + "x" + std::to_string(space.dim) + " matrix");
    }
    if (hermiticity_defect(lit) > kDefaultHermTol) invalid(mp, "Hamiltonian matrix is not Hermitian");
    h.linear += lit;
    any = true;
  }
  if (const json* n = find(j, "named")) {
    const std::string np = join_path(path, "named");
    const std::string name = as_string(*n, np);
    double scale = 1.0;
    if (const json* s = find(j, "scale")) scale = as_number(*s, join_path(path, "scale"));
    std::uint64_t s = seed;
    if (const json* sj = find(j, "seed")) s = as_seed(*sj, join_path(path, "seed"));
    auto need2 = [&] {
      if (space.dim != 2) invalid(np, "\"" + name + "\" needs dim 2");
    };
    if (name == "sigma_x") { need2(); h.linear += scale * pauli::x(); }
    else if (name == "sigma_y") { need2(); h.linear += scale * pauli::y(); }
    else if (name == "sigma_z") { need2(); h.linear += scale * pauli::z(); }
    else if (name == "harmonic_ladder") h.linear += scale * harmonic_ladder(space.dim);
    else if (name == "random") { Rng rng(s); h.linear += random_hermitian(rng, space.dim, scale); }
    else invalid(np, "unknown Hamiltonian \"" + name + "\" (known: sigma_x, sigma_y, sigma_z, harmonic_ladder, random)");
    any = true;
  } else {
    if (find(j, "scale")) invalid(join_path(path, "scale"), "only valid together with \"named\"");
    if (find(j, "seed")) invalid(join_path(path, "seed"), "only valid together with \"named\"");
  }
  auto need_grid = [&](const char* key) -> const Grid1D& {
    if (!space.grid) invalid(join_path(path, key), "requires a grid system");
    return *space.grid;
  };
  if (const json* k = find(j, "kinetic")) {
    const std::string kp = join_path(path, "kinetic");
    const Grid1D& g = need_grid("kinetic");
    double mass = 1.0;
    if (k->is_boolean()) {
      if (!k->get<bool>()) mass = 0.0;
    } else {
      check_keys(*k, kp, {"mass"});
      mass = as_positive(require(*k, kp, "mass"), join_path(kp, "mass"));
    }
    if (mass > 0.0) h.linear += kinetic_operator(g, mass).matrix();
    any = true;
  }
  if (const json* p = find(j, "potential")) {
    const std::string pp = join_path(path, "potential");
    const Grid1D& g = need_grid("potential");
    RealVector v = RealVector::Zero(g.n_points);
    if (p->is_array()) {
      if (static_cast<Index>(p->size()) != g.n_points) invalid(pp, "expected one value per grid point");
      for (std::size_t i = 0; i < p->size(); ++i) v(static_cast<Index>(i)) = as_number((*p)[i], index_path(pp, i));
    } else {
      check_keys(*p, pp, {"harmonic"});
      const double w = as_positive(require(*p, pp, "harmonic"), join_path(pp, "harmonic"));
      const double centre = 0.5 * g.spacing * static_cast<double>(g.n_points);
      for (Index i = 0; i < g.n_points; ++i) v(i) = 0.5 * w * w * (g.x(i) - centre) * (g.x(i) - centre);
    }
    h.linear.diagonal() += v.cast<cplx>();
    any = true;
  }
  if (const json* c = find(j, "catalog")) {
    h.catalog = parse_catalog(*c, join_path(path, "catalog"), need_grid("catalog"));
    any = true;
  }
  if (!any) invalid(path, "empty Hamiltonian: give matrix, named, kinetic, potential or catalog");
  return h;
}

Generator parse_entropy(const json& j, const std::string& path) {
  check_keys(j, path, {"casimir", "scale", "terms"});
  const json* k = find(j, "casimir");
  const json* terms = find(j, "terms");
  if ((k != nullptr) == (terms != nullptr)) invalid(path, "give exactly one of \"casimir\" or \"terms\"");
  if (k) {
    const long long order = as_positive_integer(*k, join_path(path, "casimir"));
    double scale = 1.0 / static_cast<double>(order);
    if (const json* s = find(j, "scale")) scale = as_number(*s, join_path(path, "scale"));
    return Generator::casimir(static_cast<int>(order), scale);
  }
  if (find(j, "scale")) invalid(join_path(path, "scale"), "only valid together with \"casimir\"");
  const std::string tp = join_path(path, "terms");
  if (!terms->is_array() || terms->empty()) invalid(tp, "expected a non-empty array of terms");
  CasimirPolynomial poly;
  for (std::size_t i = 0; i < terms->size(); ++i) {
    const std::string ip = index_path(tp, i);
    const json& t = (*terms)[i];
    check_keys(t, ip, {"coefficient", "powers"});
    const double c = as_number(require(t, ip, "coefficient"), join_path(ip, "coefficient"));
    const std::string pp = join_path(ip, "powers");
    const json& powers = require_object(require(t, ip, "powers"), pp);
    CasimirPolynomial::Exponents e;
    for (const auto& [key, value] : powers.items()) {
      int order = 0;
      try {
        std::size_t used = 0;
        order = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        invalid(join_path(pp, key), "Casimir order keys must be positive integers");
      }
      if (order < 1 || order > 12) invalid(join_path(pp, key), "Casimir order must lie in 1..12");
      const long long p = as_integer(value, join_path(pp, key));
      if (p < 0) invalid(join_path(pp, key), "power must be non-negative");
      if (static_cast<int>(e.size()) < order) e.resize(static_cast<std::size_t>(order), 0);
      e[static_cast<std::size_t>(order - 1)] = static_cast<int>(p);
    }
    poly.add_term(e, c);
  }
  return Generator::polynomial(poly);
}

cplx parse_z(const json& j, const std::string& path) { return complex_from_json(j, path); }

IntegratorConfig parse_integrator(const json& j, const std::string& path) {
  check_keys(j, path, {"method", "dt", "t_end", "record_every", "tolerances", "adaptive_tol", "track_spectrum"});
  IntegratorConfig c;
  if (const json* m = find(j, "method")) {
    const std::string s = as_string(*m, join_path(path, "method"));
    if (s == "rk4") c.method = Method::RK4;
    else if (s == "rk4_adaptive") c.method = Method::RK4Adaptive;
    else invalid(join_path(path, "method"), "expected \"rk4\" or \"rk4_adaptive\"");
  }
  if (const json* v = find(j, "dt")) c.dt = as_positive(*v, join_path(path, "dt"));
  c.t_end = as_positive(require(j, path, "t_end"), join_path(path, "t_end"));
  if (const json* v = find(j, "record_every")) {
    c.record_every = static_cast<int>(as_positive_integer(*v, join_path(path, "record_every")));
  }
  if (const json* t = find(j, "tolerances")) {
    const std::string tp = join_path(path, "tolerances");
    check_keys(*t, tp, {"herm_tol", "casimir_tol", "spectrum_tol"});
    if (const json* v = find(*t, "herm_tol")) c.tolerances.herm_tol = as_positive(*v, join_path(tp, "herm_tol"));
    if (const json* v = find(*t, "casimir_tol")) c.tolerances.casimir_tol = as_positive(*v, join_path(tp, "casimir_tol"));
    if (const json* v = find(*t, "spectrum_tol")) c.tolerances.spectrum_tol = as_positive(*v, join_path(tp, "spectrum_tol"));
  }
  if (const json* v = find(j, "adaptive_tol")) c.adaptive_tol = as_positive(*v, join_path(path, "adaptive_tol"));
  if (const json* v = find(j, "track_spectrum")) c.track_spectrum = as_bool(*v, join_path(path, "track_spectrum"));
  if (!(c.dt < c.t_end)) invalid(join_path(path, "dt"), "dt must be smaller than t_end");
  at(path, [&] { c.validate(); });
  return c;
}

DensityMatrix parse_initial_state(const json& j, const std::string& path, Index dim, const std::optional<Grid1D>& grid,
                                  std::size_t n_subsystems, std::uint64_t seed) {
  check_keys(j, path, {"matrix", "psi", "named", "seed", "momentum", "modulation"});
  const int given = (find(j, "matrix") ? 1 : 0) + (find(j, "psi") ? 1 : 0) + (find(j, "named") ? 1 : 0);
  if (given != 1) invalid(path, "give exactly one of \"matrix\", \"psi\" or \"named\"");
  auto check_dim = [&](Index d, const std::string& p) {
    if (d != dim) invalid(p, "state dimension " + std::to_string(d) + " does not match system dimension " +
                                 std::to_string(dim));
  };
  if (const json* m = find(j, "matrix")) {
    const std::string mp = join_path(path, "matrix");
    const Matrix lit = matrix_from_json(*m, mp);
    check_dim(lit.rows(), mp);
    return at(mp, [&] { return DensityMatrix(lit); });
  }
  if (const json* p = find(j, "psi")) {
    const std::string pp = join_path(path, "psi");
    const Vector psi = vector_from_json(*p, pp);
    check_dim(psi.size(), pp);
    if (!(psi.norm() > 0.0)) invalid(pp, "wave function is zero");
    return DensityMatrix::pure(psi);
  }
  const std::string np = join_path(path, "named");
  const std::string name = as_string(*find(j, "named"), np);
  std::uint64_t s = seed;
  if (const json* sj = find(j, "seed")) s = as_seed(*sj, join_path(path, "seed"));
  double momentum = 1.0;
  double modulation = 0.3;
  if (const json* v = find(j, "momentum")) momentum = as_number(*v, join_path(path, "momentum"));
  if (const json* v = find(j, "modulation")) modulation = as_number(*v, join_path(path, "modulation"));
  Rng rng(s);
  if (name == "pure_random") return DensityMatrix::pure(random_state_vector(rng, dim));
  if (name == "mixed_random") return DensityMatrix(random_mixed_state(rng, dim), kDefaultHermTol);
  if (name == "maximally_mixed") return DensityMatrix::maximally_mixed(dim);
  if (name == "singlet" || name == "bb_correlated" || name == "bell_phi_plus") {
    if (dim != 4 || n_subsystems != 2) invalid(np, "\"" + name + "\" needs a 2x2 composite system");
    if (name == "singlet") return singlet_state();
    if (name == "bell_phi_plus") return bell_phi_plus();
    return bb_correlated_state();
  }
  if (name == "plane_wave" || name == "entangled_wave") {
    if (!grid) invalid(np, "\"" + name + "\" needs a grid system");
    if (name == "plane_wave") {
      if (n_subsystems != 1) invalid(np, "\"plane_wave\" needs a single grid system");
      return grid_pure_state(*grid, grid_plane_wave(*grid, momentum, modulation));
    }
    if (n_subsystems != 2) invalid(np, "\"entangled_wave\" needs a two-particle grid system");
    return grid_entangled_state(*grid, momentum, modulation);
  }
  invalid(np, "unknown initial state \"" + name +
                  "\" (known: pure_random, mixed_random, maximally_mixed, singlet, bb_correlated, bell_phi_plus, "
                  "plane_wave, entangled_wave)");
}

struct Outputs {
  std::optional<std::string> csv;
  std::optional<std::string> json_path;
  std::vector<std::string> observables;
  bool json_states = true;
};

Outputs parse_outputs(const json& j, const std::string& path) {
  check_keys(j, path, {"csv", "json", "observables", "json_states"});
  Outputs o;
  if (const json* v = find(j, "csv")) o.csv = as_string(*v, join_path(path, "csv"));
  if (const json* v = find(j, "json")) o.json_path = as_string(*v, join_path(path, "json"));
  if (const json* v = find(j, "json_states")) o.json_states = as_bool(*v, join_path(path, "json_states"));
  if (const json* v = find(j, "observables")) {
    const std::string op = join_path(path, "observables");
    if (!v->is_array()) invalid(op, "expected an array of names");
    for (std::size_t i = 0; i < v->size(); ++i) o.observables.push_back(as_string((*v)[i], index_path(op, i)));
  }
  return o;
}

std::vector<NamedObservable> build_observables(const std::vector<std::string>& names, const std::string& path,
                                               const std::vector<Index>& dims,
                                               const std::vector<Matrix>& linear_hamiltonians) {
  std::vector<NamedObservable> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& name = names[i];
    const std::string ip = index_path(path, i);
    if (!seen.insert(name).second) invalid(ip, "duplicate observable \"" + name + "\"");
    if (name == "trace") {
      out.emplace_back(name, [](const DensityMatrix& s) { return s.trace(); });
    } else if (name == "purity") {
      out.emplace_back(name, [](const DensityMatrix& s) { return (s.matrix() * s.matrix()).trace().real(); });
    } else if (name == "min_eigenvalue") {
      out.emplace_back(name, [](const DensityMatrix& s) { return s.min_eigenvalue(); });
    } else if (name == "energy") {
      if (dims.size() > 1 || linear_hamiltonians.empty()) invalid(ip, "\"energy\" needs a single system");
      const Matrix h = linear_hamiltonians.front();
      out.emplace_back(name, [h](const DensityMatrix& s) { return (h * s.matrix()).trace().real(); });
    } else if (name.rfind("energy_sub", 0) == 0 || name.rfind("c2_sub", 0) == 0) {
      const bool energy = name[0] == 'e';
      const std::string num = name.substr(energy ? 10 : 6);
      std::size_t k = 0;
      try {
        std::size_t used = 0;
        k = static_cast<std::size_t>(std::stoul(num, &used));
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        invalid(ip, "unknown observable \"" + name + "\"");
      }
      if (dims.size() < 2 || k < 1 || k > dims.size()) invalid(ip, "\"" + name + "\" needs subsystem " + num);
      const std::vector<Index> dv = dims;
      const std::size_t slot = k - 1;
      if (energy) {
        const Matrix h = linear_hamiltonians[slot];
        out.emplace_back(name, [h, dv, slot](const DensityMatrix& s) {
          return (h * partial_trace(s.matrix(), dv, slot)).trace().real();
        });
      } else {
        out.emplace_back(name, [dv, slot](const DensityMatrix& s) {
          const Matrix r = partial_trace(s.matrix(), dv, slot);
          return (r * r).trace().real();
        });
      }
    } else {
      invalid(ip, "unknown observable \"" + name +
                      "\" (known: trace, purity, min_eigenvalue, energy, energy_sub<k>, c2_sub<k>)");
    }
  }
  return out;
}

std::string describe_entropy(const Generator& g) { return g.describe(); }

// dC_2(rho_(1))/dt at rho0 from the right-hand side, checked against a
// central difference over one RK4 step of +-h.
json subsystem_c2_rate(const Scenario& sc) {
  const Matrix& rho = sc.rho0.matrix();
  const Matrix r1 = partial_trace(rho, sc.dims, 0);
  const double rate = 2.0 * (r1 * partial_trace(sc.rhs(rho), sc.dims, 0)).trace().real();
  auto c2 = [&](double h) {
    const Matrix s = partial_trace(rk4_step(sc.rhs, rho, h), sc.dims, 0);
    return (s * s).trace().real();
  };
  const double h = 1e-4;
  const double fd = (c2(h) - c2(-h)) / (2.0 * h);
  const double diff = std::abs(rate - fd);
  json j;
  j["rate"] = rate;
  j["fd_rate"] = fd;
  j["fd_step"] = h;
  j["rel_error"] = std::abs(fd) < 1e-12 ? diff : diff / std::abs(fd);
  return j;
}

}  // namespace

Scenario build_scenario(const json& config) {
  const std::string root = "config";
  check_keys(config, root, {"system", "hamiltonian", "entropy", "bracket", "initial_state", "integrator", "outputs",
                            "seed"});
  Scenario sc;
  if (const json* s = find(config, "seed")) sc.seed = as_seed(*s, join_path(root, "seed"));

  const std::string sys_path = join_path(root, "system");
  const json& sys = require(config, root, "system");
  check_keys(sys, sys_path, {"single", "composite"});
  const json* single = find(sys, "single");
  const json* composite = find(sys, "composite");
  if ((single != nullptr) == (composite != nullptr)) invalid(sys_path, "give exactly one of \"single\" or \"composite\"");

  const json* bracket = find(config, "bracket");
  const std::string br_path = join_path(root, "bracket");
  int arity = 3;
  std::optional<cplx> z;
  if (bracket) {
    check_keys(*bracket, br_path, {"arity", "z", "hamiltonians", "entropies"});
    if (const json* a = find(*bracket, "arity")) {
      const long long n = as_integer(*a, join_path(br_path, "arity"));
      arity = static_cast<int>(n);
      at(join_path(br_path, "arity"), [&] { BracketSpec::validate_arity(arity); });
    }
    if (const json* zj = find(*bracket, "z")) z = parse_z(*zj, join_path(br_path, "z"));
  }
  const std::size_t m = static_cast<std::size_t>((arity - 1) / 2);

  std::vector<Matrix> linear_h;
  std::optional<Grid1D> grid;

  if (single) {
    const Space space = parse_single(*single, join_path(sys_path, "single"));
    grid = space.grid;
    sc.dims = {space.dim};

    std::vector<HamiltonianSpec> hams;
    std::vector<Generator> ents;
    const json* top_h = find(config, "hamiltonian");
    const json* top_s = find(config, "entropy");
    const json* br_h = bracket ? find(*bracket, "hamiltonians") : nullptr;
    const json* br_s = bracket ? find(*bracket, "entropies") : nullptr;
    if (top_h && br_h) invalid(join_path(br_path, "hamiltonians"), "conflicts with config.hamiltonian");
    if (top_s && br_s) invalid(join_path(br_path, "entropies"), "conflicts with config.entropy");
    if (br_h) {
      const std::string hp = join_path(br_path, "hamiltonians");
      if (!br_h->is_array()) invalid(hp, "expected an array");
      for (std::size_t i = 0; i < br_h->size(); ++i) hams.push_back(parse_hamiltonian((*br_h)[i], index_path(hp, i), space, sc.seed + i));
    } else if (top_h) {
      hams.push_back(parse_hamiltonian(*top_h, join_path(root, "hamiltonian"), space, sc.seed));
    } else {
      invalid(join_path(root, "hamiltonian"), "required key is missing");
    }
    if (br_s) {
      const std::string sp = join_path(br_path, "entropies");
      if (!br_s->is_array()) invalid(sp, "expected an array");
      for (std::size_t i = 0; i < br_s->size(); ++i) ents.push_back(parse_entropy((*br_s)[i], index_path(sp, i)));
    } else if (top_s) {
      ents.push_back(parse_entropy(*top_s, join_path(root, "entropy")));
    }
    const bool nonlinear = std::any_of(hams.begin(), hams.end(), [](const HamiltonianSpec& h) { return h.catalog.has_value(); });
    if (nonlinear) {
      if (arity != 3 || hams.size() != 1) {
        invalid(br_path, "catalog Hamiltonians drive -i[H(rho), rho] and need arity 3 with a single Hamiltonian");
      }
      if (!ents.empty()) invalid(join_path(root, "entropy"), "catalog Hamiltonians cannot be combined with an entropy");
      if (z) invalid(join_path(br_path, "z"), "catalog Hamiltonians fix z = -i");
      sc.kind = FlowKind::AlmostLiePoisson;
      const HamiltonianMap map = catalog_map(*hams[0].catalog, *grid, Operator(hams[0].linear));
      sc.rhs = subsystem_rhs(map);
      sc.description = "almost-Lie-Poisson flow with catalog term " + hams[0].catalog->name();
    } else {
      if (ents.empty()) ents.push_back(Generator::casimir(2, 0.5));
      if (hams.size() != m) {
        invalid(br_h ? join_path(br_path, "hamiltonians") : join_path(root, "hamiltonian"),
                "arity " + std::to_string(arity) + " needs " + std::to_string(m) + " Hamiltonians, got " +
                    std::to_string(hams.size()));
      }
      if (ents.size() != m) {
        invalid(br_s ? join_path(br_path, "entropies") : join_path(root, "entropy"),
                "arity " + std::to_string(arity) + " needs " + std::to_string(m) + " entropies, got " +
                    std::to_string(ents.size()));
      }
      std::vector<Generator> gens;
      for (const HamiltonianSpec& h : hams) gens.push_back(Generator::linear(Operator(h.linear)));
      for (const Generator& s : ents) gens.push_back(s);
      sc.spec = at(br_path, [&] {
        return z ? BracketSpec(arity, gens, *z) : BracketSpec(arity, gens);
      });
      sc.kind = FlowKind::Bracket;
      sc.rhs = bracket_rhs(*sc.spec);
      std::string ent;
      for (const Generator& s : ents) ent += (ent.empty() ? "" : ", ") + describe_entropy(s);
      sc.description = std::to_string(arity) + "-bracket flow with entropies " + ent;
    }
    for (const HamiltonianSpec& h : hams) linear_h.push_back(h.linear);
  } else {
    const std::string cp = join_path(sys_path, "composite");
    check_keys(*composite, cp, {"dims", "grid", "hamiltonians"});
    if (find(config, "hamiltonian")) invalid(join_path(root, "hamiltonian"), "use system.composite.hamiltonians");
    if (bracket && (find(*bracket, "hamiltonians") || find(*bracket, "entropies"))) {
      invalid(br_path, "composite systems take Hamiltonians from system.composite.hamiltonians");
    }
    if (const json* g = find(*composite, "grid")) grid = parse_grid(*g, join_path(cp, "grid"));
    const std::string dp = join_path(cp, "dims");
    if (const json* d = find(*composite, "dims")) {
      if (!d->is_array() || d->size() < 2) invalid(dp, "expected an array of at least two dimensions");
      if (d->size() > 4) invalid(dp, "at most four subsystems are supported");
      for (std::size_t i = 0; i < d->size(); ++i)
        sc.dims.push_back(static_cast<Index>(as_positive_integer((*d)[i], index_path(dp, i))));
      if (grid)
        for (std::size_t i = 0; i < sc.dims.size(); ++i)
          if (sc.dims[i] != grid->n_points) invalid(index_path(dp, i), "grid subsystems must have n_points entries");
    } else if (grid) {
      sc.dims = {grid->n_points, grid->n_points};
    } else {
      invalid(dp, "required key is missing");
    }
    const std::string hp = join_path(cp, "hamiltonians");
    const json& hj = require(*composite, cp, "hamiltonians");
    if (!hj.is_array() || hj.size() != sc.dims.size()) invalid(hp, "expected one Hamiltonian per subsystem");
    std::vector<HamiltonianSpec> hams;
    for (std::size_t i = 0; i < hj.size(); ++i) {
      Space sp{sc.dims[i], grid};
      hams.push_back(parse_hamiltonian(hj[i], index_path(hp, i), sp, sc.seed + i));
      linear_h.push_back(hams.back().linear);
    }
    if (z) invalid(join_path(br_path, "z"), "composite flows fix z = -i");
    if (arity != 3) invalid(join_path(br_path, "arity"), "composite flows are 3-bracket flows");
    if (const json* sj = find(config, "entropy")) {
      const Generator s = parse_entropy(*sj, join_path(root, "entropy"));
      for (std::size_t i = 0; i < hams.size(); ++i)
        if (hams[i].catalog) invalid(index_path(hp, i), "the dual-scheme flow needs linear Hamiltonians");
      Matrix htot = Matrix::Zero(total_dim(sc.dims), total_dim(sc.dims));
      for (std::size_t i = 0; i < hams.size(); ++i) htot += lift(hams[i].linear, sc.dims, i);
      sc.spec = BracketSpec(3, {Generator::linear(Operator(htot)), s}, cplx(0.0, -1.0));
      sc.rhs = bracket_rhs(*sc.spec);
      sc.kind = FlowKind::DualScheme;
      sc.description = "dual-scheme composite flow with entropy " + s.describe();
    } else {
      CompositeSystem cs;
      cs.dims = sc.dims;
      for (const HamiltonianSpec& h : hams) {
        cs.hamiltonians.push_back(h.catalog ? catalog_map(*h.catalog, *grid, Operator(h.linear))
                                            : HamiltonianMap::constant(Operator(h.linear)));
      }
      sc.rhs = composite_rhs(cs);
      sc.kind = FlowKind::CompositeExtension;
      sc.description = "noninteracting " + std::to_string(sc.dims.size()) + "-particle extension";
    }
  }

  const Index dim = total_dim(sc.dims);
  sc.rho0 = parse_initial_state(require(config, root, "initial_state"), join_path(root, "initial_state"), dim, grid,
                                sc.dims.size(), sc.seed);
  sc.integrator = parse_integrator(require(config, root, "integrator"), join_path(root, "integrator"));
  if (const json* o = find(config, "outputs")) {
    const Outputs out = parse_outputs(*o, join_path(root, "outputs"));
    sc.csv_path = out.csv;
    sc.json_path = out.json_path;
    sc.json_states = out.json_states;
    sc.observables = build_observables(out.observables, join_path(root, "outputs.observables"), sc.dims, linear_h);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Validation, path.string() + ": cannot open config file");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Validation, path.string() + ": malformed JSON (" + e.what() + ")");
  }
  return build_scenario(config);
}

std::string summarize(const Trajectory& traj) {
  std::ostringstream out;
  const Diagnostics& d = traj.diagnostics;
  out << "t_end=" << format_double(traj.times.back()) << " records=" << traj.size() << " steps=" << d.accepted_steps;
  if (d.rejected_steps) out << " rejected=" << d.rejected_steps;
  if (!traj.casimirs.empty()) {
    out << " casimir_drift=[";
    for (std::size_t k = 0; k < d.max_casimir_drift.size(); ++k) {
      out << (k ? "," : "") << format_double(d.max_casimir_drift[k]);
    }
    out << "]";
  }
  if (!traj.spectra.empty()) out << " spectrum_drift=" << format_double(d.max_spectrum_drift);
  out << " hermiticity_defect=" << format_double(d.max_hermiticity_defect);
  std::string flags;
  for (const std::string& f : d.flags) flags += (flags.empty() ? "" : ";") + f;
  out << " flags=" << (flags.empty() ? "none" : flags);
  return out.str();
}

RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
  RunResult r{integrate(sc.rhs, sc.rho0, sc.integrator, sc.observables), "", {}};
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : out_dir / fp;
  };
  if (sc.csv_path) {
    const auto p = resolve(*sc.csv_path);
    write_file_atomic(p, trajectory_to_csv(r.trajectory));
    r.written.push_back(p);
  }
  if (sc.json_path) {
    const auto p = resolve(*sc.json_path);
    json doc;
    doc["description"] = sc.description;
    doc["seed"] = sc.seed;
    if (sc.kind == FlowKind::DualScheme && sc.dims.size() == 2) doc["subsystem_c2_rate"] = subsystem_c2_rate(sc);
    doc["trajectory"] = trajectory_to_json(r.trajectory, sc.json_states);
    write_file_atomic(p, doc.dump(2) + "\n");
    r.written.push_back(p);
  }
  r.summary = summarize(r.trajectory);
  return r;
}

}  // namespace nambu
