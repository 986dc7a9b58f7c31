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

#ifndef BTB_SWEEP_H_
#define BTB_SWEEP_H_

// Parameter sweeps producing region maps: the Pareto-selected single-group
// equilibrium over a grid, or the welfare scenario of banning the box.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "btb/model.h"

namespace btb {

enum class SweepMode { kSingleGroupRegions, kBtbScenarios };
enum class OutputFormat { kCsv, kJson };

std::string_view ToString(SweepMode mode);
SweepMode ParseSweepMode(std::string_view text);
OutputFormat ParseOutputFormat(std::string_view text);

// Axis names: w, B, c_L, c_H, phi0, phi1, p, gamma, p1, p2.
struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  // one or two
  MarketParams market;          // values of the unswept parameters
  PopulationParams population;
  double potential = 0.8;       // single-group mode only
  SweepMode mode = SweepMode::kSingleGroupRegions;
  OutputFormat format = OutputFormat::kCsv;
  double eps = kDefaultEps;
  unsigned threads = 0;         // 0: hardware concurrency
};

struct SweepCell {
  double axis1 = 0.0;
  std::optional<double> axis2;
  std::string label;
  double p_e_star = 0.0;
  std::optional<double> chi_star;
  std::optional<double> eta_star;
  std::optional<double> delta_employer;
  std::optional<double> delta_w1_low;
  std::optional<double> delta_w1_high;
  std::optional<double> delta_w2_low;
  std::optional<double> delta_w2_high;
  bool boundary = false;

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct SweepResult {
  SweepMode mode = SweepMode::kSingleGroupRegions;
  std::vector<SweepCell> cells;  // axis1-major order
};

inline constexpr std::string_view kSweepCsvHeader =
    "axis1,axis2,label,p_e_star,chi_star,eta_star,delta_employer,"
    "delta_w1_low,delta_w1_high,delta_w2_low,delta_w2_high,boundary";

// Throws ValidationError for malformed specs.
void ValidateSweepSpec(const SweepSpec& spec);

// Coordinates of an axis after clipping probability axes to [eps, 1 - eps].
std::vector<double> AxisValues(const SweepAxis& axis, double eps);

// Cells are evaluated in parallel and merged in grid order. A cell whose
// parameters fail validation aborts the sweep with a ValidationError that
// names its coordinates.
SweepResult RunSweep(const SweepSpec& spec);

std::string FormatCsv(const SweepResult& result);
std::string FormatJson(const SweepResult& result);
SweepResult ParseCsv(std::string_view text, SweepMode mode);
SweepResult ParseJson(std::string_view text, SweepMode mode);

std::map<std::string, int> LabelCounts(const SweepResult& result);

// Writes `contents` to `path` through a temporary file and rename so a
// reader never observes a partial file. Throws IoError.
void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents);

// Writes the result in `format` to `path`.
void Emit(const SweepResult& result, OutputFormat format,
          const std::filesystem::path& path);

// Nine significant digits, the precision used in every emitted table.
std::string FormatNumber(double v);

}  // namespace btb

#endif  // BTB_SWEEP_H_
