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

#include "config.h"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "btb/errors.h"

namespace btb::cli {
namespace {

using Json = nlohmann::json;

void RejectUnknown(const Json& obj, std::string_view section,
                   std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || key == k;
    if (!ok) {
      const std::string where =
          section.empty() ? key : std::string(section) + "." + key;
      throw ValidationError(where, "unknown configuration key '" + where + "'");
    }
  }
}

const Json& Section(const Json& root, const char* name) {
  const Json& s = root.at(name);
  if (!s.is_object()) {
    throw ValidationError(name, std::string("'") + name + "' must be an object");
  }
  return s;
}

void ReadNumber(const Json& obj, const char* key, std::string_view section,
                double& dst) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  const std::string where = std::string(section) + "." + key;
  if (!v.is_number()) throw ValidationError(key, "'" + where + "' must be a number");
  dst = v.get<double>();
}

template <typename Int>
void ReadUnsigned(const Json& obj, const char* key, std::string_view section,
                  Int& dst) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  const std::string where = std::string(section) + "." + key;
  if (!v.is_number_unsigned()) {
    throw ValidationError(key, "'" + where + "' must be a non-negative integer");
  }
  dst = v.get<Int>();
}

std::string ReadString(const Json& obj, const char* key,
                       std::string_view section) {
  const Json& v = obj.at(key);
  if (!v.is_string()) {
    throw ValidationError(key, "'" + std::string(section) + "." + key +
                                   "' must be a string");
  }
  return v.get<std::string>();
}

SweepSpec ParseSweep(const Json& s) {
  RejectUnknown(s, "sweep", {"mode", "axes", "threads"});
  SweepSpec spec;
  if (s.contains("mode")) spec.mode = ParseSweepMode(ReadString(s, "mode", "sweep"));
  ReadUnsigned(s, "threads", "sweep", spec.threads);
  if (!s.contains("axes") || !s.at("axes").is_array()) {
    throw ValidationError("sweep.axes", "'sweep.axes' must be an array");
  }
  for (const Json& a : s.at("axes")) {
    if (!a.is_object()) {
      throw ValidationError("sweep.axes", "each sweep axis must be an object");
    }
    RejectUnknown(a, "sweep.axes", {"name", "min", "max", "steps"});
    SweepAxis axis;
    if (!a.contains("name")) {
      throw ValidationError("sweep.axes", "sweep axis needs a name");
    }
    axis.name = ReadString(a, "name", "sweep.axes");
    ReadNumber(a, "min", "sweep.axes", axis.min);
    ReadNumber(a, "max", "sweep.axes", axis.max);
    if (a.contains("steps")) {
      const Json& st = a.at("steps");
      if (!st.is_number_integer()) {
        throw ValidationError("sweep.axes.steps", "steps must be an integer");
      }
      axis.steps = st.get<int>();
    }
    spec.axes.push_back(std::move(axis));
  }
  return spec;
}

}  // namespace

RunConfig ParseConfig(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ValidationError("config", "configuration must be a JSON object");
  }
  RejectUnknown(root, "", {"market", "population", "eps", "oracle", "sweep",
                           "output", "simulate"});

  RunConfig c;
  if (root.contains("market")) {
    const Json& m = Section(root, "market");
    RejectUnknown(m, "market", {"w", "B", "c_L", "c_H", "phi0", "phi1"});
    ReadNumber(m, "w", "market", c.market.wage);
    ReadNumber(m, "B", "market", c.market.benefit);
    ReadNumber(m, "c_L", "market", c.market.cost_low);
    ReadNumber(m, "c_H", "market", c.market.cost_high);
    ReadNumber(m, "phi0", "market", c.market.reveal_unqualified);
    ReadNumber(m, "phi1", "market", c.market.reveal_qualified);
  }
  if (root.contains("population")) {
    const Json& p = Section(root, "population");
    RejectUnknown(p, "population", {"gamma", "p1", "p2", "p"});
    c.has_population = p.contains("gamma") || p.contains("p1") || p.contains("p2");
    ReadNumber(p, "gamma", "population", c.population.share_group1);
    ReadNumber(p, "p1", "population", c.population.potential1);
    ReadNumber(p, "p2", "population", c.population.potential2);
    if (p.contains("p")) {
      double v = 0.0;
      ReadNumber(p, "p", "population", v);
      c.potential = v;
    }
  }
  if (root.contains("eps")) ReadNumber(root, "eps", "", c.eps);
  if (root.contains("oracle")) {
    const Json& o = Section(root, "oracle");
    RejectUnknown(o, "oracle", {"grid_n", "n_samples", "seed", "tol"});
    ReadUnsigned(o, "grid_n", "oracle", c.oracle.grid_n);
    ReadUnsigned(o, "n_samples", "oracle", c.oracle.n_samples);
    ReadUnsigned(o, "seed", "oracle", c.oracle.seed);
    ReadNumber(o, "tol", "oracle", c.oracle.tol);
  }
  if (root.contains("sweep")) c.sweep = ParseSweep(Section(root, "sweep"));
  if (root.contains("output")) {
    const Json& o = Section(root, "output");
    RejectUnknown(o, "output", {"dir", "format"});
    if (o.contains("dir")) c.out_dir = ReadString(o, "dir", "output");
    if (o.contains("format")) {
      c.format = ParseOutputFormat(ReadString(o, "format", "output"));
    }
  }
  if (root.contains("simulate")) {
    const Json& s = Section(root, "simulate");
    RejectUnknown(s, "simulate", {"chi", "eta"});
    StrategyProfile profile;
    ReadNumber(s, "chi", "simulate", profile.qualify_prob);
    ReadNumber(s, "eta", "simulate", profile.hire_prob);
    c.simulate_profile = profile;
  }
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot read configuration");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path.string(), "error reading configuration");
  return ParseConfig(buf.str());
}

void ValidateConfig(const RunConfig& c) {
  ValidateMarket(c.market);
  if (c.has_population) ValidatePopulation(c.population);
  ValidatePotential(c.SingleGroupPotential());
  if (!(c.eps > 0.0 && c.eps < 1e-3)) {
    throw ValidationError("eps", "eps must lie in (0, 1e-3)");
  }
  if (c.oracle.grid_n < 3) {
    throw ValidationError("oracle.grid_n", "oracle.grid_n must be at least 3");
  }
  if (c.oracle.n_samples < 2) {
    throw ValidationError("oracle.n_samples", "oracle.n_samples must be at least 2");
  }
  if (!(c.oracle.tol > 0.0)) {
    throw ValidationError("oracle.tol", "oracle.tol must be positive");
  }
  if (c.simulate_profile) {
    const StrategyProfile& s = *c.simulate_profile;
    if (s.qualify_prob < 0.0 || s.qualify_prob > 1.0) {
      throw ValidationError("simulate.chi", "simulate.chi must lie in [0, 1]");
    }
    if (s.hire_prob < 0.0 || s.hire_prob > 1.0) {
      throw ValidationError("simulate.eta", "simulate.eta must lie in [0, 1]");
    }
  }
  if (c.sweep) ValidateSweepSpec(*c.sweep);
}

}  // namespace btb::cli
