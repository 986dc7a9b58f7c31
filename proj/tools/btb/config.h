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

#ifndef BTB_TOOLS_CONFIG_H_
#define BTB_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "btb/model.h"
#include "btb/sweep.h"

namespace btb::cli {

inline constexpr std::string_view kOutDirEnv = "BTB_OUT_DIR";
inline constexpr std::string_view kDefaultOutDir = "btb_out";

struct OracleConfig {
  int grid_n = 401;
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 42;
  double tol = 1e-9;
};

struct RunConfig {
  MarketParams market;
  PopulationParams population;
  bool has_population = false;     // population block present in the file
  std::optional<double> potential;  // single-group p
  double eps = kDefaultEps;
  OracleConfig oracle;
  std::optional<SweepSpec> sweep;
  std::optional<std::string> out_dir;
  OutputFormat format = OutputFormat::kCsv;
  std::optional<StrategyProfile> simulate_profile;

  // p when given, otherwise the group-1 potential.
  double SingleGroupPotential() const {
    return potential.value_or(population.potential1);
  }
};

// Parses a JSON configuration document:
//
//   {
//     "market": {"w": 1, "B": 2, "c_L": 0.3, "c_H": 1.5,
//                "phi0": 0.2, "phi1": 0.6},
//     "population": {"gamma": 0.5, "p1": 0.8, "p2": 0.4, "p": 0.8},
//     "eps": 1e-9,
//     "oracle": {"grid_n": 401, "n_samples": 1000000, "seed": 42,
//                "tol": 1e-9},
//     "sweep": {"mode": "SingleGroupRegions", "threads": 0,
//               "axes": [{"name": "phi0", "min": 0, "max": 1,
//                         "steps": 101}]},
//     "output": {"dir": "out", "format": "csv"},
//     "simulate": {"chi": 0.8, "eta": 0.5}
//   }
//
// Every block and key is optional; unknown keys are rejected. Throws
// ValidationError naming the offending key.
RunConfig ParseConfig(std::string_view text);

// Reads and parses a file. Throws IoError when it cannot be read.
RunConfig LoadConfig(const std::filesystem::path& path);

// Validates every parameter the configuration carries.
void ValidateConfig(const RunConfig& config);

}  // namespace btb::cli

#endif  // BTB_TOOLS_CONFIG_H_
