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

// Matrix literals in JSON.
//
// A matrix is an array of rows; each row is an array of entries. An entry is
// one of
//   1.5                      real number
//   [1.5, -0.25]             [re, im] pair
//   {"re": 1.5, "im": -0.25} object ("im" optional, default 0)
// All rows must have the same length. Writers always emit [re, im] pairs.
// Vectors use the same entry forms in a flat array.

#pragma once

#include <string>

#include <json.hpp>

#include "nambu/densmat.hpp"

namespace nambu {

/// Throws Error(Validation) naming `path` on malformed input.
Matrix matrix_from_json(const nlohmann::json& j, const std::string& path = "matrix");
Vector vector_from_json(const nlohmann::json& j, const std::string& path = "vector");
cplx complex_from_json(const nlohmann::json& j, const std::string& path = "value");

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(cplx z);

}  // namespace nambu
