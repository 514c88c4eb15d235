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

#include "nambu/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nambu/demos.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/scenario.hpp"
#include "nambu/tensor_identity.hpp"

namespace nambu {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::StepRejected:
    case ErrorCode::NonFiniteState:
    case ErrorCode::SeriesDiverging:
    case ErrorCode::NonPositiveDensity:
      return kExitFailure;
    default:
      return kExitInvalid;
  }
}

namespace {

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NAMBU_DYN_OUT"); env && *env) return env;
  return fs::current_path();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw fs::filesystem_error("cannot create output directory", dir, ec);
}

int run_command(const std::string& config, bool validate_only, const std::string& out_flag, std::ostream& out) {
  const Scenario sc = load_scenario(config);
  if (validate_only) {
    out << "valid: " << sc.description << "\n";
    return kExitOk;
  }
  const fs::path dir = output_dir(out_flag);
  ensure_dir(dir);
  const RunResult r = run_scenario(sc, dir);
  out << "ok: " << sc.description << ": " << r.summary;
  for (const fs::path& p : r.written) out << " wrote=" << p.string();
  out << "\n";
  return kExitOk;
}

int demo_command(const std::string& name, const DemoOptions& opts, const std::string& out_flag, std::ostream& out) {
  const DemoOutput d = run_demo(name, opts);
  const fs::path dir = output_dir(out_flag);
  ensure_dir(dir);
  std::vector<fs::path> written;
  write_file_atomic(dir / (name + ".json"), d.report.dump(2) + "\n");
  written.push_back(dir / (name + ".json"));
  if (d.csv) {
    write_file_atomic(dir / (name + ".csv"), *d.csv);
    written.push_back(dir / (name + ".csv"));
  }
  for (const auto& [file, contents] : d.extra_files) {
    write_file_atomic(dir / file, contents);
    written.push_back(dir / file);
  }
  out << name << ": " << (d.passed ? "check passed" : "check FAILED") << ": " << d.summary;
  for (const fs::path& p : written) out << " wrote=" << p.string();
  out << "\n";
  return kExitOk;
}

int identities_command(std::optional<long long> dim, std::uint64_t seed, std::ostream& out) {
  std::vector<Index> dims;
  if (dim) {
    if (*dim < 2 || *dim > 8) fail(ErrorCode::InvalidArgument, "--dim must lie in 2..8");
    dims.push_back(static_cast<Index>(*dim));
  } else {
    dims = {2, 3, 4, 5};
  }
  bool all = true;
  out << "identity dim seed defect status\n";
  for (TensorIdentity id : kAllTensorIdentities) {
    for (Index d : dims) {
      const double defect = verify_tensor_identity({id, d, seed});
      const bool ok = defect <= 1e-10;
      all = all && ok;
      out << to_string(id) << " " << d << " " << seed << " " << format_double(defect) << " " << (ok ? "PASS" : "FAIL")
          << "\n";
    }
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nambu-dyn: density-matrix dynamics generated by multi-brackets", "nambu-dyn"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print the version and exit");

  std::string config;
  bool validate_only = false;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "Validate a scenario config, integrate it and write outputs");
  run->add_option("config", config, "Scenario config (JSON)")->required();
  run->add_flag("--validate-only", validate_only, "Validate the config without integrating");
  run->add_option("--out", run_out, "Output directory");

  std::string demo_name;
  std::optional<std::uint64_t> demo_seed;
  std::optional<double> demo_dt;
  std::optional<double> demo_t_end;
  std::string demo_out;
  CLI::App* demo = app.add_subcommand("demo", "Run a pre-built demo scenario");
  demo->add_option("name", demo_name, "Demo name")->required();
  demo->add_option("--seed", demo_seed, "Override the demo seed");
  demo->add_option("--out", demo_out, "Output directory");
  demo->add_option("--dt", demo_dt, "Override the step size");
  demo->add_option("--t-end", demo_t_end, "Override the final time");

  std::optional<long long> id_dim;
  std::uint64_t id_seed = 7;
  CLI::App* identities = app.add_subcommand("identities", "Check the trace-tensor identities");
  identities->add_option("--dim", id_dim, "Single dimension in 2..8 (default: 2..5)");
  identities->add_option("--seed", id_seed, "Seed for the random operators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (version) {
      out << "nambu-dyn " << kVersion << "\n";
      return kExitOk;
    }
    if (run->parsed()) return run_command(config, validate_only, run_out, out);
    if (demo->parsed()) {
      DemoOptions opts;
      opts.seed = demo_seed;
      opts.dt = demo_dt;
      opts.t_end = demo_t_end;
      return demo_command(demo_name, opts, demo_out, out);
    }
    if (identities->parsed()) return identities_command(id_dim, id_seed, out);
    out << app.help();
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace nambu
