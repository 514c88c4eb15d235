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

// Scenario configs: JSON documents validated against a fixed schema before
// any numeric work. Unknown keys are rejected; every validation failure is an
// Error(Validation) whose message starts with the offending JSON path.
// The schema is documented in README.md.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nambu/brackets.hpp"
#include "nambu/dynamics.hpp"

namespace nambu {

enum class FlowKind {
  Bracket,            // z * antisym(gradients) on a single system
  AlmostLiePoisson,   // -i [H(rho), rho] with a catalog Hamiltonian
  CompositeExtension, // noninteracting N-particle extension
  DualScheme,         // -i [sum_k lift_k(H_k), G_S(rho)] on a composite system
};

struct Scenario {
  FlowKind kind = FlowKind::Bracket;
  std::string description;
  DensityMatrix rho0{Matrix::Identity(1, 1)};
  Rhs rhs;
  std::optional<BracketSpec> spec;
  std::vector<Index> dims;  // subsystem dims for composite flows
  IntegratorConfig integrator;
  std::vector<NamedObservable> observables;
  std::optional<std::string> csv_path;
  std::optional<std::string> json_path;
  bool json_states = true;
  std::uint64_t seed = 0;
};

/// Validates and builds. Throws Error(Validation) with a path-qualified
/// message on any schema problem, including domain errors raised while
/// building (bad arity, non-Hermitian matrices, dimension mismatches).
Scenario build_scenario(const nlohmann::json& config);

/// Reads and parses a config file, then calls build_scenario.
Scenario load_scenario(const std::filesystem::path& path);

struct RunResult {
  Trajectory trajectory;
  std::string summary;  // one line
  std::vector<std::filesystem::path> written;
};

/// Integrates and writes the configured outputs; relative output paths are
/// resolved against `out_dir`.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// One-line drift summary of a trajectory.
std::string summarize(const Trajectory& traj);

}  // namespace nambu
