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

// Time integration of density-matrix flows with conservation monitoring.
//
// Every accepted step is followed by rho <- (rho + rho^dagger)/2; the
// Hermiticity defect before that symmetrization is logged, never hidden.
// Positivity is monitored through the minimum eigenvalue and never enforced.

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nambu/brackets.hpp"
#include "nambu/densmat.hpp"

namespace nambu {

inline constexpr int kTrackedCasimirs = 5;

enum class Method { RK4, RK4Adaptive };

struct Tolerances {
  double herm_tol = 1e-10;
  double casimir_tol = 1e-8;
  double spectrum_tol = 1e-7;
};

struct IntegratorConfig {
  Method method = Method::RK4;
  double dt = 1e-3;  // fixed step, or initial step for the adaptive method
  double t_end = 1.0;
  int record_every = 1;
  Tolerances tolerances;
  double adaptive_tol = 1e-9;  // entrywise step-doubling error target
  bool track_spectrum = true;  // eigen-decompose every recorded state
  bool track_casimirs = true;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

using Rhs = std::function<Matrix(const Matrix&)>;
using Observable = std::function<double(const DensityMatrix&)>;
using NamedObservable = std::pair<std::string, Observable>;

struct Diagnostics {
  std::array<double, kTrackedCasimirs> max_casimir_drift{};  // |C_k(t) - C_k(0)|, k = 1..5
  double max_spectrum_drift = 0.0;
  double max_hermiticity_defect = 0.0;  // before symmetrization, over all steps
  double min_eigenvalue = 0.0;          // over recorded states (if tracked)
  long accepted_steps = 0;
  long rejected_steps = 0;
  std::vector<std::string> flags;  // distinct tolerance violations
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<std::array<double, kTrackedCasimirs>> casimirs;  // empty if untracked
  std::vector<SpectrumRecord> spectra;                          // empty if untracked
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> observables;  // [row][observable]
  std::vector<std::string> row_flags;            // ';'-joined, empty when clean
  Diagnostics diagnostics;

  const DensityMatrix& final_state() const { return states.back(); }
  std::size_t size() const { return times.size(); }
};

/// One classical RK4 step, no symmetrization.
Matrix rk4_step(const Rhs& f, const Matrix& y, double dt);

/// Raw fixed-step RK4 from 0 to t (last step shortened), no symmetrization.
/// Used for operators that are not states, e.g. off-diagonal blocks.
Matrix propagate(const Rhs& f, Matrix y, double t, double dt);

Rhs bracket_rhs(const BracketSpec& spec);

/// Errors: StepRejected (adaptive step underflow), NonFiniteState.
Trajectory integrate(const Rhs& f, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                     const std::vector<NamedObservable>& observables = {});
Trajectory integrate(const BracketSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                     const std::vector<NamedObservable>& observables = {});

/// sum_{j <= order} t^j rho_j with rho(t) = sum_j t^j rho_j the formal
/// Taylor solution of the bracket flow (Lie-derivative series). Coefficients
/// come from truncated power-series arithmetic: rho_{j+1} = [rhs]_j / (j+1),
/// where [rhs]_j is the degree-j coefficient of the right-hand side with
/// every gradient re-expanded along the series.
/// Errors: InvalidArgument (order outside [0, 20]), SeriesDiverging (the
/// last three non-negligible term norms are not non-increasing).
DensityMatrix taylor_oracle(const BracketSpec& spec, const DensityMatrix& rho0, double t, int order);

/// Max-entry norms of the terms t^j rho_j, j = 0..order.
std::vector<double> taylor_term_norms(const BracketSpec& spec, const DensityMatrix& rho0, double t, int order);

struct PureTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double max_norm_drift = 0.0;
};

/// i dpsi/dt = H psi with fixed-step RK4 (cfg.dt, cfg.t_end, cfg.record_every).
PureTrajectory evolve_pure(const Operator& h, const Vector& psi0, const IntegratorConfig& cfg);

/// max_t max_i |eig_i(t) - eig_i(0)| over the recorded sorted spectra.
double spectrum_drift(const Trajectory& traj);

/// max_t |C_k(t) - C_k(0)|, k in [1, 5].
double casimir_drift(const Trajectory& traj, int k);

/// CSV columns: t, C1..C5, eig1..eigd, <observables>, flags. Casimir and
/// eigenvalue columns are present only when tracked.
std::string trajectory_csv_header(const Trajectory& traj);
std::string trajectory_to_csv(const Trajectory& traj);
/// Includes the complex state dumps when `with_states` is set.
nlohmann::json trajectory_to_json(const Trajectory& traj, bool with_states = true);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Shortest round-trip representation, locale independent.
std::string format_double(double v);

}  // namespace nambu
