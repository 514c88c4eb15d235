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

// Pre-built demo scenarios with fixed default seeds. Each demo returns a
// JSON report (plus CSV trajectory data where it integrates a flow); the
// same options always produce the same bytes.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nambu {

struct DemoOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
};

struct DemoOutput {
  nlohmann::json report;
  std::optional<std::string> csv;
  /// Extra files to write next to the report, as (file name, contents).
  std::vector<std::pair<std::string, std::string>> extra_files;
  std::string summary;  // one line
  bool passed = true;   // the demo's own check
};

/// linear_check, rho_squared_flow, five_bracket, separability, big_brother,
/// gisin_basis, duality, tensor_identities, bbm_additivity.
const std::vector<std::string>& demo_names();

/// Throws UnknownDemo for names outside demo_names().
DemoOutput run_demo(std::string_view name, const DemoOptions& options = {});

}  // namespace nambu
