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

#include "nambu/error.hpp"

namespace nambu {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OddCount: return "OddCount";
    case ErrorCode::InvalidBracket: return "InvalidBracket";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::StepRejected: return "StepRejected";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::SeriesDiverging: return "SeriesDiverging";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownDemo: return "UnknownDemo";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

}  // namespace nambu
