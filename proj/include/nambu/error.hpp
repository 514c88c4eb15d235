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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nambu {

enum class ErrorCode {
  NonHermitianInput,
  DimensionMismatch,
  OddCount,
  InvalidBracket,
  UnsupportedCombination,
  StepRejected,
  NonFiniteState,
  SeriesDiverging,
  NonPositiveDensity,
  InvalidArgument,
  UnknownDemo,
  Validation,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code tells callers (and the
/// CLI exit-code mapping) which failure class occurred.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace nambu
