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

#include "btb/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <system_error>
#include <thread>

#include "json.hpp"

#include "btb/btb.h"
#include "btb/errors.h"
#include "btb/solver.h"

namespace btb {
namespace {

struct AxisInfo {
  std::string_view name;
  bool probability;
};

constexpr AxisInfo kAxes[] = {
    {"w", false},    {"B", false},     {"c_L", false}, {"c_H", false},
    {"phi0", true},  {"phi1", true},   {"p", true},    {"gamma", true},
    {"p1", true},    {"p2", true},
};

const AxisInfo* FindAxis(std::string_view name) {
  for (const AxisInfo& a : kAxes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

// All parameter values of one cell.
struct CellParams {
  MarketParams market;
  PopulationParams population;
  double potential;
};

void Assign(CellParams& c, std::string_view name, double v) {
  if (name == "w") c.market.wage = v;
  else if (name == "B") c.market.benefit = v;
  else if (name == "c_L") c.market.cost_low = v;
  else if (name == "c_H") c.market.cost_high = v;
  else if (name == "phi0") c.market.reveal_unqualified = v;
  else if (name == "phi1") c.market.reveal_qualified = v;
  else if (name == "p") c.potential = v;
  else if (name == "gamma") c.population.share_group1 = v;
  else if (name == "p1") c.population.potential1 = v;
  else if (name == "p2") c.population.potential2 = v;
}

bool Near(double a, double b, double eps) { return std::abs(a - b) <= eps; }

// True when some classification predicate of the market sits within eps of
// its switching point.
bool MarketBoundary(const MarketParams& m, double eps) {
  const double r = m.CostRatio();
  return Near(m.reveal_unqualified, r, eps) ||
         Near(m.reveal_qualified, r, eps) ||
         Near(m.reveal_unqualified, m.reveal_qualified, eps);
}

SweepCell EvaluateSingleGroup(const CellParams& c, double eps) {
  const SingleGroupSolution sol = SolveSingleGroup(c.market, c.potential, eps);
  const Equilibrium& best = sol.best();
  SweepCell cell;
  cell.label = Label(best);
  cell.p_e_star = HiringThreshold(c.market);
  cell.chi_star = best.profile.qualify_prob;
  cell.eta_star = best.profile.hire_prob;
  cell.boundary = MarketBoundary(c.market, eps) ||
                  Near(c.potential, cell.p_e_star, eps);
  return cell;
}

SweepCell EvaluateBtb(const CellParams& c, double eps) {
  const BtbComparison cmp = CompareBtb(c.market, c.population, eps);
  SweepCell cell;
  cell.label = std::string(ToString(cmp.scenario));
  cell.p_e_star = cmp.hiring_threshold;
  cell.delta_employer = cmp.deltas.employer;
  cell.delta_w1_low = cmp.deltas.group1_low;
  cell.delta_w1_high = cmp.deltas.group1_high;
  cell.delta_w2_low = cmp.deltas.group2_low;
  cell.delta_w2_high = cmp.deltas.group2_high;
  const double pe = cmp.hiring_threshold;
  const PopulationParams& pop = c.population;
  cell.boundary = MarketBoundary(c.market, eps) ||
                  pop.share_group1 <= eps || pop.share_group1 >= 1.0 - eps ||
                  Near(pop.potential1, pe, eps) ||
                  Near(pop.potential2, pe, eps) ||
                  Near(cmp.population_potential, pe, eps) ||
                  Near(pop.potential1, pop.potential2, eps) ||
                  Near(pop.potential2, EmployerBtbInterval(c.market).lower, eps);
  return cell;
}

std::string CoordinateText(const SweepSpec& spec, double a1,
                           std::optional<double> a2) {
  std::string s = spec.axes[0].name + "=" + FormatNumber(a1);
  if (a2) s += ", " + spec.axes[1].name + "=" + FormatNumber(*a2);
  return s;
}

SweepCell EvaluateCell(const SweepSpec& spec, double a1,
                       std::optional<double> a2) {
  CellParams c{spec.market, spec.population, spec.potential};
  Assign(c, spec.axes[0].name, a1);
  if (a2) Assign(c, spec.axes[1].name, *a2);
  try {
    ValidateMarket(c.market);
    if (spec.mode == SweepMode::kSingleGroupRegions) {
      ValidatePotential(c.potential);
    } else {
      ValidatePopulation(c.population);
    }
  } catch (const ValidationError& e) {
    throw ValidationError(e.field(), "cell (" + CoordinateText(spec, a1, a2) +
                                         "): " + e.what());
  }
  SweepCell cell = spec.mode == SweepMode::kSingleGroupRegions
                       ? EvaluateSingleGroup(c, spec.eps)
                       : EvaluateBtb(c, spec.eps);
  cell.axis1 = a1;
  cell.axis2 = a2;
  return cell;
}

// Values are stored at the printed precision so that an emitted table parses
// back to an identical result.
double Rounded(double v) { return std::strtod(FormatNumber(v).c_str(), nullptr); }

void RoundCell(SweepCell& c) {
  c.axis1 = Rounded(c.axis1);
  c.p_e_star = Rounded(c.p_e_star);
  for (std::optional<double>* f :
       {&c.axis2, &c.chi_star, &c.eta_star, &c.delta_employer, &c.delta_w1_low,
        &c.delta_w1_high, &c.delta_w2_low, &c.delta_w2_high}) {
    if (*f) **f = Rounded(**f);
  }
}

std::string OptionalText(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : std::string();
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double ParseNumber(const std::string& text, std::string_view field) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ValidationError(std::string(field),
                          "malformed number '" + text + "' in " +
                              std::string(field));
  }
  return v;
}

std::optional<double> ParseOptional(const std::string& text,
                                    std::string_view field) {
  if (text.empty()) return std::nullopt;
  return ParseNumber(text, field);
}

using OrderedJson = nlohmann::ordered_json;

OrderedJson OptionalJson(const std::optional<double>& v) {
  return v ? OrderedJson(*v) : OrderedJson(nullptr);
}

std::optional<double> JsonOptional(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string FormatNumber(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero in output
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string_view ToString(SweepMode mode) {
  return mode == SweepMode::kSingleGroupRegions ? "SingleGroupRegions"
                                                : "BtbScenarios";
}

SweepMode ParseSweepMode(std::string_view text) {
  if (text == "SingleGroupRegions") return SweepMode::kSingleGroupRegions;
  if (text == "BtbScenarios") return SweepMode::kBtbScenarios;
  throw ValidationError("sweep.mode", "unknown sweep mode '" +
                                          std::string(text) + "'");
}

OutputFormat ParseOutputFormat(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw ValidationError("format", "unknown output format '" +
                                      std::string(text) +
                                      "' (expected csv or json)");
}

void ValidateSweepSpec(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw ValidationError("sweep.axes", "a sweep needs one or two axes");
  }
  if (!(spec.eps > 0.0 && spec.eps < 0.5)) {
    throw ValidationError("eps", "eps must lie in (0, 0.5)");
  }
  for (const SweepAxis& a : spec.axes) {
    const AxisInfo* info = FindAxis(a.name);
    const std::string field = "sweep.axes." + a.name;
    if (info == nullptr) {
      throw ValidationError("sweep.axes",
                            "unknown sweep axis '" + a.name + "'");
    }
    if (spec.mode == SweepMode::kSingleGroupRegions &&
        (a.name == "gamma" || a.name == "p1" || a.name == "p2")) {
      throw ValidationError(field, "axis " + a.name +
                                       " needs mode BtbScenarios");
    }
    if (spec.mode == SweepMode::kBtbScenarios && a.name == "p") {
      throw ValidationError(field, "axis p needs mode SingleGroupRegions");
    }
    if (a.steps < 2) {
      throw ValidationError(field, "steps must be >= 2 on axis " + a.name);
    }
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.min > a.max) {
      throw ValidationError(field, "axis " + a.name + " needs min <= max");
    }
    if (info->probability && (a.max < spec.eps || a.min > 1.0 - spec.eps)) {
      throw ValidationError(field, "axis " + a.name +
                                       " range lies outside (0, 1)");
    }
    if (!info->probability && a.min <= 0.0) {
      throw ValidationError(field, "axis " + a.name + " must stay positive");
    }
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) {
    throw ValidationError("sweep.axes", "the two axes must differ");
  }
}

std::vector<double> AxisValues(const SweepAxis& axis, double eps) {
  const AxisInfo* info = FindAxis(axis.name);
  std::vector<double> v(static_cast<std::size_t>(axis.steps));
  for (int k = 0; k < axis.steps; ++k) {
    double x = k == axis.steps - 1
                   ? axis.max
                   : axis.min + (axis.max - axis.min) * k / (axis.steps - 1);
    if (info != nullptr && info->probability) {
      x = std::clamp(x, eps, 1.0 - eps);
    }
    v[static_cast<std::size_t>(k)] = x;
  }
  return v;
}

SweepResult RunSweep(const SweepSpec& spec) {
  ValidateSweepSpec(spec);
  const std::vector<double> first = AxisValues(spec.axes[0], spec.eps);
  const std::vector<double> second =
      spec.axes.size() == 2 ? AxisValues(spec.axes[1], spec.eps)
                            : std::vector<double>{};
  const std::size_t inner = second.empty() ? 1 : second.size();
  const std::size_t total = first.size() * inner;

  SweepResult result;
  result.mode = spec.mode;
  result.cells.resize(total);

  // Each worker claims cells by index; the first failing index wins so the
  // reported error does not depend on scheduling.
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::size_t error_index = total;
  std::exception_ptr error;

  auto work = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const double a1 = first[idx / inner];
      const std::optional<double> a2 =
          second.empty() ? std::nullopt
                         : std::optional<double>(second[idx % inner]);
      try {
        result.cells[idx] = EvaluateCell(spec, a1, a2);
        RoundCell(result.cells[idx]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (idx < error_index) {
          error_index = idx;
          error = std::current_exception();
        }
      }
    }
  };

  unsigned threads = spec.threads != 0 ? spec.threads
                                       : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, total / 64)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  if (error) std::rethrow_exception(error);
  return result;
}

std::string FormatCsv(const SweepResult& result) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const SweepCell& c : result.cells) {
    out += FormatNumber(c.axis1) + ',' + OptionalText(c.axis2) + ',' + c.label +
           ',' + FormatNumber(c.p_e_star) + ',' + OptionalText(c.chi_star) +
           ',' + OptionalText(c.eta_star) + ',' +
           OptionalText(c.delta_employer) + ',' +
           OptionalText(c.delta_w1_low) + ',' + OptionalText(c.delta_w1_high) +
           ',' + OptionalText(c.delta_w2_low) + ',' +
           OptionalText(c.delta_w2_high) + ',' + (c.boundary ? "1" : "0") +
           '\n';
  }
  return out;
}

std::string FormatJson(const SweepResult& result) {
  std::string out = "[";
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const SweepCell& c = result.cells[i];
    OrderedJson j;
    j["axis1"] = c.axis1;
    j["axis2"] = OptionalJson(c.axis2);
    j["label"] = c.label;
    j["p_e_star"] = c.p_e_star;
    j["chi_star"] = OptionalJson(c.chi_star);
    j["eta_star"] = OptionalJson(c.eta_star);
    j["delta_employer"] = OptionalJson(c.delta_employer);
    j["delta_w1_low"] = OptionalJson(c.delta_w1_low);
    j["delta_w1_high"] = OptionalJson(c.delta_w1_high);
    j["delta_w2_low"] = OptionalJson(c.delta_w2_low);
    j["delta_w2_high"] = OptionalJson(c.delta_w2_high);
    j["boundary"] = c.boundary;
    out += i == 0 ? "\n  " : ",\n  ";
    out += j.dump();
  }
  out += result.cells.empty() ? "]\n" : "\n]\n";
  return out;
}

SweepResult ParseCsv(std::string_view text, SweepMode mode) {
  SweepResult r;
  r.mode = mode;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != kSweepCsvHeader) {
        throw ValidationError("csv", "unexpected sweep CSV header");
      }
      header = false;
      continue;
    }
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 12) {
      throw ValidationError("csv", "sweep CSV row needs 12 fields");
    }
    SweepCell c;
    c.axis1 = ParseNumber(f[0], "axis1");
    c.axis2 = ParseOptional(f[1], "axis2");
    c.label = f[2];
    c.p_e_star = ParseNumber(f[3], "p_e_star");
    c.chi_star = ParseOptional(f[4], "chi_star");
    c.eta_star = ParseOptional(f[5], "eta_star");
    c.delta_employer = ParseOptional(f[6], "delta_employer");
    c.delta_w1_low = ParseOptional(f[7], "delta_w1_low");
    c.delta_w1_high = ParseOptional(f[8], "delta_w1_high");
    c.delta_w2_low = ParseOptional(f[9], "delta_w2_low");
    c.delta_w2_high = ParseOptional(f[10], "delta_w2_high");
    if (f[11] != "0" && f[11] != "1") {
      throw ValidationError("boundary", "boundary must be 0 or 1");
    }
    c.boundary = f[11] == "1";
    r.cells.push_back(std::move(c));
  }
  return r;
}

SweepResult ParseJson(std::string_view text, SweepMode mode) {
  SweepResult r;
  r.mode = mode;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("json", std::string("malformed sweep JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("json", "sweep JSON must be an array");
  for (const auto& j : doc) {
    SweepCell c;
    c.axis1 = j.at("axis1").get<double>();
    c.axis2 = JsonOptional(j, "axis2");
    c.label = j.at("label").get<std::string>();
    c.p_e_star = j.at("p_e_star").get<double>();
    c.chi_star = JsonOptional(j, "chi_star");
    c.eta_star = JsonOptional(j, "eta_star");
    c.delta_employer = JsonOptional(j, "delta_employer");
    c.delta_w1_low = JsonOptional(j, "delta_w1_low");
    c.delta_w1_high = JsonOptional(j, "delta_w1_high");
    c.delta_w2_low = JsonOptional(j, "delta_w2_low");
    c.delta_w2_high = JsonOptional(j, "delta_w2_high");
    c.boundary = j.at("boundary").get<bool>();
    r.cells.push_back(std::move(c));
  }
  return r;
}

std::map<std::string, int> LabelCounts(const SweepResult& result) {
  std::map<std::string, int> counts;
  for (const SweepCell& c : result.cells) ++counts[c.label];
  return counts;
}

void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.string(), "cannot create directory (" + ec.message() + ")");
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string(), "cannot open for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError(tmp.string(), "write failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError(path.string(), "cannot rename temporary file (" + ec.message() + ")");
  }
}

void Emit(const SweepResult& result, OutputFormat format,
          const std::filesystem::path& path) {
  WriteFileAtomically(path, format == OutputFormat::kCsv ? FormatCsv(result)
                                                         : FormatJson(result));
}

}  // namespace btb
