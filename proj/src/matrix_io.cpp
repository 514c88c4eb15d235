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

#include "nambu/matrix_io.hpp"

namespace nambu {

using nlohmann::json;

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      fail(ErrorCode::Validation, path + ": complex entry must be [re, im]");
    }
    return cplx(j[0].get<double>(), j[1].get<double>());
  }
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "re" && key != "im") fail(ErrorCode::Validation, path + "." + key + ": unknown key");
      if (!value.is_number()) fail(ErrorCode::Validation, path + "." + key + ": expected a number");
    }
    if (!j.contains("re")) fail(ErrorCode::Validation, path + ": complex object needs \"re\"");
    return cplx(j["re"].get<double>(), j.value("im", 0.0));
  }
  fail(ErrorCode::Validation, path + ": expected a number, [re, im] or {\"re\", \"im\"}");
}

Vector vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::Validation, path + ": expected a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::Validation, path + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].empty()) fail(ErrorCode::Validation, rpath + ": expected a non-empty row");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) fail(ErrorCode::Validation, rpath + ": ragged row");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          complex_from_json(j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  return m;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

}  // namespace nambu
