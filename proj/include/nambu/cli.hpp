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

// Command-line front end of nambu-dyn.
//
//   nambu-dyn run <config> [--validate-only] [--out DIR]
//   nambu-dyn demo <name> [--seed N] [--out DIR] [--dt X] [--t-end X]
//   nambu-dyn identities [--dim D] [--seed N]
//   nambu-dyn --version
//
// Output directory: --out, else $NAMBU_DYN_OUT, else the working directory.
// Exit codes: 0 success, 2 invalid input, 3 numeric or I/O failure.

#pragma once

#include <iosfwd>
#include <string_view>

#include "nambu/error.hpp"

namespace nambu {

inline constexpr std::string_view kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitFailure = 3 };

/// 2 for input errors (validation, bad arity, unknown demo, ...), 3 for
/// failures during numeric work.
int exit_code_for(ErrorCode code);

/// Runs the CLI with the given arguments, writing to `out` and `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nambu
