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

#include "nambu/demos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nambu/brackets.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/matrix_io.hpp"
#include "nambu/multiparticle.hpp"
#include "nambu/nlham.hpp"
#include "nambu/random.hpp"
#include "nambu/tensor_identity.hpp"

namespace nambu {

using nlohmann::json;

namespace {

IntegratorConfig fixed_config(const DemoOptions& o, double dt, double t_end, int record_every) {
  IntegratorConfig c;
  c.method = Method::RK4;
  c.dt = o.dt.value_or(dt);
  c.t_end = o.t_end.value_or(t_end);
  c.record_every = record_every;
  c.validate();
  return c;
}

json parameters(std::uint64_t seed, const IntegratorConfig* cfg) {
  json p;
  p["seed"] = seed;
  if (cfg) {
    p["dt"] = cfg->dt;
    p["t_end"] = cfg->t_end;
  }
  return p;
}

json drift_report(const Trajectory& traj) {
  json j;
  json c = json::array();
  for (int k = 1; k <= kTrackedCasimirs; ++k) c.push_back(casimir_drift(traj, k));
  j["casimir_drift"] = c;
  j["spectrum_drift"] = spectrum_drift(traj);
  j["max_hermiticity_defect"] = traj.diagnostics.max_hermiticity_defect;
  j["steps"] = traj.diagnostics.accepted_steps;
  j["flags"] = traj.diagnostics.flags;
  return j;
}

double max_casimir_drift(const Trajectory& traj) {
  double m = 0.0;
  for (int k = 1; k <= kTrackedCasimirs; ++k) m = std::max(m, casimir_drift(traj, k));
  return m;
}

std::string fmt(double v) { return format_double(v); }

Matrix exact_conjugation(const Matrix& h, const Matrix& rho, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
  const Vector phase = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  const Matrix u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return u * rho * u.adjoint();
}

DemoOutput linear_check(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(1);
  const IntegratorConfig cfg = fixed_config(o, 1e-3, 1.0, 10);
  Rng rng(seed);
  const Matrix h = random_hermitian(rng, 4);
  const DensityMatrix rho0(random_mixed_state(rng, 4));
  const Trajectory traj = integrate(BracketSpec::three(Operator(h), Generator::casimir(2, 0.5)), rho0, cfg);
  const double err = max_abs(traj.final_state().matrix() - exact_conjugation(h, rho0.matrix(), traj.times.back()));
  DemoOutput out;
  out.report["demo"] = "linear_check";
  out.report["parameters"] = parameters(seed, &cfg);
  out.report["max_entry_error_vs_unitary"] = err;
  out.report["drift"] = drift_report(traj);
  out.report["trajectory"] = trajectory_to_json(traj, false);
  out.csv = trajectory_to_csv(traj);
  out.passed = err <= 1e-8;
  out.summary = "max entry error vs exact conjugation " + fmt(err) + ", max Casimir drift " + fmt(max_casimir_drift(traj));
  return out;
}

DemoOutput rho_squared_flow(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(2);
  const IntegratorConfig cfg = fixed_config(o, 1e-3, 10.0, 100);
  Rng rng(seed);
  const Matrix h = random_hermitian(rng, 4);
  const DensityMatrix rho0(random_mixed_state(rng, 4));
  const Trajectory traj = integrate(BracketSpec::three(Operator(h), Generator::casimir(3, 1.0 / 3.0)), rho0, cfg);
  DemoOutput out;
  out.report["demo"] = "rho_squared_flow";
  out.report["equation"] = "d rho/dt = -i [H, rho^2]";
  out.report["parameters"] = parameters(seed, &cfg);
  out.report["drift"] = drift_report(traj);
  out.report["trajectory"] = trajectory_to_json(traj, false);
  out.csv = trajectory_to_csv(traj);
  out.passed = max_casimir_drift(traj) <= 1e-8 && spectrum_drift(traj) <= 1e-7;
  out.summary = "max Casimir drift " + fmt(max_casimir_drift(traj)) + ", spectrum drift " + fmt(spectrum_drift(traj));
  return out;
}

// Twelve-term closed form of z^-1 * rhs for generators (H1, H2, C_2/2, C_3/3).
Matrix five_bracket_closed_form(const Matrix& a, const Matrix& b, const Matrix& r) {
  auto c = [](const Matrix& x, const Matrix& y) -> Matrix { return x * y - y * x; };
  const Matrix r2 = r * r;
  return (c(r, a) * b - c(r, b) * a) * r2 + r2 * (b * c(a, r) - a * c(b, r)) + r * (b * r2 * a - a * r2 * b) +
         (a * r2 * b - b * r2 * a) * r;
}

DemoOutput five_bracket(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(3);
  const IntegratorConfig cfg = fixed_config(o, 1e-3, 5.0, 50);
  Rng rng(seed);
  const Matrix h1 = random_hermitian(rng, 4);
  const Matrix h2 = random_hermitian(rng, 4);
  const DensityMatrix rho0(random_mixed_state(rng, 4));
  const Vector psi = random_state_vector(rng, 4);
  const BracketSpec spec =
      BracketSpec::five(Operator(h1), Operator(h2), Generator::casimir(2, 0.5), Generator::casimir(3, 1.0 / 3.0));
  const Matrix rhs = eom_rhs(spec, rho0.matrix());
  const double closed_form_error = max_abs(rhs - spec.z() * five_bracket_closed_form(h1, h2, rho0.matrix()));
  const double pure_rhs = max_abs(eom_rhs(spec, DensityMatrix::pure(psi).matrix()));
  const double herm = hermiticity_defect(rhs);
  const Trajectory traj = integrate(spec, rho0, cfg);
  DemoOutput out;
  out.report["demo"] = "five_bracket";
  out.report["parameters"] = parameters(seed, &cfg);
  out.report["closed_form_error"] = closed_form_error;
  out.report["pure_state_rhs_max"] = pure_rhs;
  out.report["rhs_hermiticity_defect"] = herm;
  out.report["drift"] = drift_report(traj);
  out.report["trajectory"] = trajectory_to_json(traj, false);
  out.csv = trajectory_to_csv(traj);
  out.passed = closed_form_error <= 1e-12 && pure_rhs <= 1e-12 && herm <= 1e-12 && max_casimir_drift(traj) <= 1e-8;
  out.summary = "closed-form error " + fmt(closed_form_error) + ", pure-state rhs " + fmt(pure_rhs) +
                ", max Casimir drift " + fmt(max_casimir_drift(traj));
  return out;
}

DemoOutput separability(const DemoOptions& o) {
  const IntegratorConfig cfg = fixed_config(o, 0.01, 0.2, 1);
  const Grid1D grid = Grid1D::periodic(16, 2.0 * std::numbers::pi);
  const Operator kinetic = kinetic_operator(grid);
  const DensityMatrix entangled = grid_entangled_state(grid);
  const DensityMatrix product = tensor_product(grid_pure_state(grid, grid_plane_wave(grid, 1.0, 0.3)),
                                               grid_pure_state(grid, grid_plane_wave(grid, 2.0, 0.2)));
  json table = json::object();
  double worst = 0.0;
  for (const std::string& name : catalog_names()) {
    CatalogTerm term = *CatalogTerm::from_name(name);
    if (term.kind == CatalogKind::HaagBannier) {
      for (Index i = 0; i < grid.n_points; ++i) term.vector_potential.push_back(std::cos(grid.x(i)));
    }
    // homog_n is not part of the separability table.
    if (term.kind == CatalogKind::Homogeneous) continue;
    CompositeSystem sys;
    sys.dims = {grid.n_points, grid.n_points};
    sys.hamiltonians = {catalog_map(term, grid, kinetic), catalog_map(term, grid, kinetic)};
    json row;
    row["product"] = separability_defect(sys, product, 0, cfg);
    row["entangled"] = separability_defect(sys, entangled, 0, cfg);
    worst = std::max({worst, row["product"].get<double>(), row["entangled"].get<double>()});
    table[name] = row;
  }
  DemoOutput out;
  out.report["demo"] = "separability";
  out.report["parameters"] = parameters(0, &cfg);
  out.report["parameters"].erase("seed");
  out.report["grid"] = {{"n_points", grid.n_points}, {"length", 2.0 * std::numbers::pi}};
  out.report["defects"] = table;
  out.report["max_defect"] = worst;
  out.passed = worst <= 1e-6;
  out.summary = "max separability defect " + fmt(worst) + " over " + std::to_string(table.size()) + " terms";
  return out;
}

std::string big_brother_config(std::uint64_t seed) {
  json c;
  c["seed"] = seed;
  c["system"] = {{"composite", {{"dims", {2, 2}},
                                {"hamiltonians", json::array({{{"named", "random"}, {"seed", seed}},
                                                              {{"named", "random"}, {"seed", seed + 1}}})}}}};
  c["entropy"] = {{"casimir", 3}, {"scale", 1.0 / 3.0}};
  c["initial_state"] = {{"named", "mixed_random"}, {"seed", seed}};
  c["integrator"] = {{"method", "rk4"}, {"dt", 1e-3}, {"t_end", 1.0}, {"record_every", 10}};
  c["outputs"] = {{"csv", "big_brother_run.csv"},
                  {"json", "big_brother_run.json"},
                  {"observables", {"energy_sub1", "c2_sub1"}},
                  {"json_states", false}};
  return c.dump(2) + "\n";
}

DemoOutput big_brother(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(5);
  const std::vector<Index> dims{2, 2};
  Rng rng(seed);
  json states = json::array();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Operator h1(random_hermitian(rng, 2));
    const Operator h2(random_hermitian(rng, 2));
    const DensityMatrix rho(random_mixed_state(rng, 4));
    const BigBrotherResult r = big_brother_rate(rho, dims, h1, h2);
    worst = std::max(worst, r.rel_error);
    states.push_back({{"rate", r.rate}, {"fd_rate", r.fd_rate}, {"rel_error", r.rel_error}});
  }
  const Operator h1(random_hermitian(rng, 2));
  const DensityMatrix product =
      tensor_product(DensityMatrix(random_mixed_state(rng, 2)), DensityMatrix(random_mixed_state(rng, 2)));
  const double product_rate = big_brother_rate(product, dims, h1).rate;
  const double singlet_rate = big_brother_rate(singlet_state(), dims, h1).rate;
  const double bb_rate = big_brother_rate(bb_correlated_state(), dims, h1).rate;
  DemoOutput out;
  out.report["demo"] = "big_brother";
  out.report["equation"] = "d rho/dt = -i [H_1 x I + I x H_2, rho^2]";
  out.report["parameters"] = parameters(seed, nullptr);
  out.report["correlated_states"] = states;
  out.report["max_rel_error"] = worst;
  out.report["product_rate"] = product_rate;
  out.report["singlet_rate"] = singlet_rate;
  out.report["bb_correlated_rate"] = bb_rate;
  out.extra_files.emplace_back("big_brother_config.json", big_brother_config(seed));
  out.passed = worst <= 1e-5 && std::abs(product_rate) <= 1e-10 && std::abs(singlet_rate) <= 1e-10;
  out.summary = "max relative error " + fmt(worst) + ", product rate " + fmt(product_rate) + ", singlet rate " +
                fmt(singlet_rate);
  return out;
}

Matrix hadamard() {
  Matrix u(2, 2);
  u << 1.0, 1.0, 1.0, -1.0;
  return u / std::sqrt(2.0);
}

DemoOutput gisin_basis(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(11);
  const double dt = o.dt.value_or(1e-3);
  const double t = o.t_end.value_or(0.1);
  if (!(dt > 0.0) || !(t > 0.0)) fail(ErrorCode::InvalidArgument, "dt and t_end must be positive");
  const std::vector<Index> dims{2, 2};
  Rng rng(seed);
  const Matrix rho2 = DensityMatrix::pure(random_state_vector(rng, 4)).matrix();
  const Matrix h = random_hermitian(rng, 2);
  const Rhs block = [h](const Matrix& a) -> Matrix {
    const Matrix a2 = a * a;
    return cplx(0.0, -1.0) * (h * a2 - a2 * h);
  };
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix comp = gisin_extension(block, rho2, dims, id, t, dt);
  const Matrix rot = gisin_extension(block, rho2, dims, hadamard(), t, dt);
  CompositeSystem sys;
  sys.dims = dims;
  sys.hamiltonians = {HamiltonianMap::anticommutator(Operator(h)), HamiltonianMap::constant(Operator::zero(2))};
  const Matrix lp_comp = rotated_composite_evolution(sys, rho2, id, t, dt);
  const Matrix lp_rot = rotated_composite_evolution(sys, rho2, hadamard(), t, dt);
  const double dist = frobenius_distance(comp, rot);
  const double lp_dist = frobenius_distance(lp_comp, lp_rot);
  DemoOutput out;
  out.report["demo"] = "gisin_basis";
  out.report["parameters"] = {{"seed", seed}, {"dt", dt}, {"t_end", t}};
  out.report["block_flow"] = "d a/dt = -i [H, a^2]";
  out.report["computational_basis"] = to_json(comp);
  out.report["rotated_basis"] = to_json(rot);
  out.report["frobenius_distance"] = dist;
  out.report["lie_poisson_frobenius_distance"] = lp_dist;
  out.passed = dist > 1e-3 && lp_dist <= 1e-10;
  out.summary = "block extension basis distance " + fmt(dist) + ", Lie-Poisson extension distance " + fmt(lp_dist);
  return out;
}

DemoOutput duality(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(13);
  Rng rng(seed);
  const Generator a = Generator::linear(Operator(random_hermitian(rng, 4)));
  const Generator h = Generator::linear(Operator(random_hermitian(rng, 4)));
  const Generator s = Generator::casimir(3, 1.0 / 3.0);
  const DensityMatrix rho(random_mixed_state(rng, 4));
  const std::vector<Generator> base{a, h, s};
  const cplx v0 = scalar_bracket(base, rho);
  json values = json::array();
  double worst = 0.0;
  for (int j = 0; j < 16; ++j) {
    const double alpha = 2.0 * std::numbers::pi * j / 16.0;
    const auto [hr, sr] = duality_rotate(h, s, alpha);
    const std::vector<Generator> gens{a, hr, sr};
    const cplx v = scalar_bracket(gens, rho);
    worst = std::max(worst, std::abs(v - v0));
    values.push_back({{"alpha", alpha}, {"value", to_json(v)}});
  }
  DemoOutput out;
  out.report["demo"] = "duality";
  out.report["parameters"] = parameters(seed, nullptr);
  out.report["reference_value"] = to_json(v0);
  out.report["rotations"] = values;
  out.report["max_deviation"] = worst;
  out.passed = worst <= 1e-11;
  out.summary = "max deviation over 16 angles " + fmt(worst);
  return out;
}

DemoOutput tensor_identities(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(7);
  json table = json::object();
  double worst = 0.0;
  for (TensorIdentity id : kAllTensorIdentities) {
    json row = json::object();
    for (Index d = 2; d <= 5; ++d) {
      const double defect = verify_tensor_identity({id, d, seed});
      worst = std::max(worst, defect);
      row[std::to_string(d)] = defect;
    }
    table[std::string(to_string(id))] = row;
  }
  DemoOutput out;
  out.report["demo"] = "tensor_identities";
  out.report["parameters"] = parameters(seed, nullptr);
  out.report["defects"] = table;
  out.report["max_defect"] = worst;
  out.passed = worst <= 1e-10;
  out.summary = "max identity defect " + fmt(worst) + " over 7 identities, dims 2-5";
  return out;
}

DemoOutput bbm_additivity(const DemoOptions& o) {
  const std::uint64_t seed = o.seed.value_or(17);
  Rng rng(seed);
  const Vector psi = random_state_vector(rng, 16);
  const Vector phi = random_state_vector(rng, 16);
  const AdditivityResult plain = bbm_additivity_check(psi, phi);
  Vector phi_node = phi;
  phi_node(0) = 0.0;
  const double floor = 1e-12;
  const AdditivityResult floored = bbm_additivity_check(psi, phi_node, floor);
  DemoOutput out;
  out.report["demo"] = "bbm_additivity";
  out.report["parameters"] = parameters(seed, nullptr);
  out.report["ln_defect"] = plain.ln_defect;
  out.report["square_defect"] = plain.square_defect;
  out.report["with_node"] = {{"floor", floor},
                             {"ln_defect", floored.ln_defect},
                             {"floor_bound", floored.floor_bound},
                             {"square_defect", floored.square_defect}};
  out.passed = plain.ln_defect <= 1e-12 && plain.square_defect > 1e-6 && floored.ln_defect <= floored.floor_bound;
  out.summary = "ln defect " + fmt(plain.ln_defect) + ", square defect " + fmt(plain.square_defect);
  return out;
}

using DemoFn = std::function<DemoOutput(const DemoOptions&)>;

const std::map<std::string, DemoFn, std::less<>>& registry() {
  static const std::map<std::string, DemoFn, std::less<>> table{
      {"linear_check", linear_check},         {"rho_squared_flow", rho_squared_flow},
      {"five_bracket", five_bracket},         {"separability", separability},
      {"big_brother", big_brother},           {"gisin_basis", gisin_basis},
      {"duality", duality},                   {"tensor_identities", tensor_identities},
      {"bbm_additivity", bbm_additivity},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"linear_check", "rho_squared_flow", "five_bracket",
                                              "separability", "big_brother",      "gisin_basis",
                                              "duality",      "tensor_identities", "bbm_additivity"};
  return names;
}

DemoOutput run_demo(std::string_view name, const DemoOptions& options) {
  const auto& table = registry();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const std::string& n : demo_names()) known += (known.empty() ? "" : ", ") + n;
    fail(ErrorCode::UnknownDemo, "unknown demo \"" + std::string(name) + "\" (known: " + known + ")");
  }
  DemoOutput out = it->second(options);
  out.report["passed"] = out.passed;
  return out;
}

}  // namespace nambu
