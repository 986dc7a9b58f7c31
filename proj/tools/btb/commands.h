// Copyright 2026 The btb-equilibria Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BTB_TOOLS_COMMANDS_H_
#define BTB_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.h"

namespace btb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitVerification = 2,
  kExitIo = 3,
};

// Command-line overrides; each takes precedence over the config file.
struct CliOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  bool quiet = false;
  std::optional<double> chi;  // simulate only
  std::optional<double> eta;  // simulate only
  // Shifts the selected equilibrium's qualification rate before verifying,
  // so that `verify` must fail. Negative control for the checks themselves.
  std::optional<double> debug_perturb;
};

// Loads the configuration, applies overrides and validates it.
RunConfig ResolveConfig(const CliOptions& options);

// Output directory: --out, then the config file, then $BTB_OUT_DIR, then
// kDefaultOutDir.
std::filesystem::path ResolveOutDir(const CliOptions& options,
                                    const RunConfig& config);

// Runs one of solve, compare, verify, sweep, simulate. The human-readable
// report goes to `out` (unless quiet) and, with the machine-readable
// report, into the output directory. Errors are reported on `err` and
// mapped to an ExitCode; nothing is written when validation fails.
int RunCommand(const std::string& command, const CliOptions& options,
               std::ostream& out, std::ostream& err);

// Key/value CSV used for the non-sweep machine-readable reports.
using KeyValueRows = std::vector<std::pair<std::string, std::string>>;
std::string FormatKeyValueCsv(const KeyValueRows& rows);
KeyValueRows ParseKeyValueCsv(const std::string& text);

}  // namespace btb::cli

#endif  // BTB_TOOLS_COMMANDS_H_
