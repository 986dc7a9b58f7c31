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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "btb/btb.h"
#include "btb/errors.h"
#include "btb/oracle.h"
#include "btb/solver.h"
#include "btb/sweep.h"

namespace btb::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kSigmaPolicy = 4.0;

// Numbers are stored at the emitted precision so every report re-parses to
// the same values.
Json Num(double v) { return std::strtod(FormatNumber(v).c_str(), nullptr); }

std::string F(double v) { return FormatNumber(v); }

Json MarketJson(const MarketParams& m) {
  return {{"w", Num(m.wage)},
          {"B", Num(m.benefit)},
          {"c_L", Num(m.cost_low)},
          {"c_H", Num(m.cost_high)},
          {"phi0", Num(m.reveal_unqualified)},
          {"phi1", Num(m.reveal_qualified)}};
}

Json PayoffJson(const PayoffTable& t) {
  return {{"worker_low", Num(t.worker_low)},
          {"worker_high", Num(t.worker_high)},
          {"worker_exante", Num(t.worker_exante)},
          {"employer", Num(t.employer)}};
}

Json EquilibriumJson(const Equilibrium& e) {
  return {{"label", Label(e)},
          {"kind", std::string(ToString(e.kind))},
          {"posture", std::string(ToString(e.posture))},
          {"chi", Num(e.profile.qualify_prob)},
          {"eta", Num(e.profile.hire_prob)},
          {"mu_garbled", Num(e.belief.prob_qualified)}};
}

std::string MarketLine(const MarketParams& m) {
  return "w=" + F(m.wage) + " B=" + F(m.benefit) + " c_L=" + F(m.cost_low) +
         " c_H=" + F(m.cost_high) + " phi0=" + F(m.reveal_unqualified) +
         " phi1=" + F(m.reveal_qualified);
}

std::string PayoffLine(const PayoffTable& t) {
  return "W_L=" + F(t.worker_low) + " W_H=" + F(t.worker_high) +
         " W=" + F(t.worker_exante) + " E=" + F(t.employer);
}

std::string ProfileLine(const Equilibrium& e) {
  return "chi=" + F(e.profile.qualify_prob) + " eta=" + F(e.profile.hire_prob);
}

// Both report forms of one command.
struct Report {
  std::string name;
  Json data;
  std::string text;
};

void FlattenInto(const Json& j, const std::string& prefix, KeyValueRows& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      FlattenInto(v, prefix.empty() ? k : prefix + "." + k, rows);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      FlattenInto(j[i], prefix + "." + std::to_string(i), rows);
    }
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_boolean()) {
    rows.emplace_back(prefix, j.get<bool>() ? "true" : "false");
  } else if (j.is_null()) {
    rows.emplace_back(prefix, "");
  } else if (j.is_number_unsigned()) {
    rows.emplace_back(prefix, std::to_string(j.get<std::uint64_t>()));
  } else if (j.is_number_integer()) {
    rows.emplace_back(prefix, std::to_string(j.get<std::int64_t>()));
  } else {
    rows.emplace_back(prefix, FormatNumber(j.get<double>()));
  }
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void WriteReport(const Report& r, const RunConfig& config,
                 const std::filesystem::path& dir) {
  if (config.format == OutputFormat::kJson) {
    WriteFileAtomically(dir / (r.name + ".json"), r.data.dump(2) + "\n");
  } else {
    KeyValueRows rows;
    FlattenInto(r.data, "", rows);
    WriteFileAtomically(dir / (r.name + ".csv"), FormatKeyValueCsv(rows));
  }
  WriteFileAtomically(dir / (r.name + ".txt"), r.text);
}

// ---- solve -----------------------------------------------------------------

Report Solve(const RunConfig& c) {
  const double p = c.SingleGroupPotential();
  const SingleGroupSolution sol = SolveSingleGroup(c.market, p, c.eps);
  const double pe = HiringThreshold(c.market);
  const bool high = AtLeast(p, pe, c.eps);

  Report r{"solve", Json::object(), ""};
  Json& d = r.data;
  d["command"] = "solve";
  d["market"] = MarketJson(c.market);
  d["p"] = Num(p);
  d["eps"] = Num(c.eps);
  d["hiring_threshold"] = Num(pe);
  d["potential_high"] = high;
  d["test_typology"] = std::string(ToString(ClassifyTest(c.market, c.eps)));
  d["qualified_reveal_enough"] = QualifiedRevealEnough(c.market, c.eps);
  d["unqualified_reveal_enough"] = UnqualifiedRevealEnough(c.market, c.eps);
  Json list = Json::array();
  for (std::size_t i = 0; i < sol.equilibria.size(); ++i) {
    Json e = EquilibriumJson(sol.equilibria[i]);
    e["payoffs"] = PayoffJson(sol.payoffs[i]);
    list.push_back(std::move(e));
  }
  d["equilibria"] = std::move(list);
  d["selected"] = Label(sol.best());
  d["selected_index"] = sol.selected;

  std::ostringstream t;
  t << "market: " << MarketLine(c.market) << "\n"
    << "potential: p=" << F(p) << "\n"
    << "hiring threshold: p_E*=" << F(pe) << " (p " << (high ? ">=" : "<")
    << " p_E*)\n"
    << "test: " << ToString(ClassifyTest(c.market, c.eps)) << "\n"
    << "equilibria (" << sol.equilibria.size() << "):\n";
  for (std::size_t i = 0; i < sol.equilibria.size(); ++i) {
    const Equilibrium& e = sol.equilibria[i];
    t << "  " << (i == sol.selected ? "* " : "  ") << Label(e) << "  "
      << ProfileLine(e) << " mu=" << F(e.belief.prob_qualified) << "  "
      << PayoffLine(sol.payoffs[i]) << "\n";
  }
  t << "Pareto selection: " << Label(sol.best()) << "\n";
  r.text = t.str();
  return r;
}

// ---- compare ---------------------------------------------------------------

Json GroupJson(const GroupOutcome& g) {
  Json j = EquilibriumJson(g.equilibrium);
  j["payoffs"] = PayoffJson(g.payoffs);
  return j;
}

Report Compare(const RunConfig& c) {
  if (!c.has_population) {
    throw ValidationError("population",
                          "compare needs a population block (gamma, p1, p2)");
  }
  const BtbComparison cmp = CompareBtb(c.market, c.population, c.eps);
  const PopulationParams& pop = c.population;
  const WelfareDeltas& dl = cmp.deltas;

  Report r{"compare", Json::object(), ""};
  Json& d = r.data;
  d["command"] = "compare";
  d["market"] = MarketJson(c.market);
  d["population"] = {{"gamma", Num(pop.share_group1)},
                     {"p1", Num(pop.potential1)},
                     {"p2", Num(pop.potential2)}};
  d["eps"] = Num(c.eps);
  d["hiring_threshold"] = Num(cmp.hiring_threshold);
  d["population_potential"] = Num(cmp.population_potential);
  d["population_potential_high"] = cmp.population_potential_high;
  d["test_typology"] = std::string(ToString(cmp.test));
  d["potential_typology"] = std::string(ToString(cmp.potentials));
  d["with_box"] = {{"group1", GroupJson(cmp.with_box.group1)},
                   {"group2", GroupJson(cmp.with_box.group2)},
                   {"employer_total", Num(cmp.with_box.employer_total)}};
  d["banned"] = {{"pooled", EquilibriumJson(*cmp.banned.pooled)},
                 {"group1", GroupJson(cmp.banned.group1)},
                 {"group2", GroupJson(cmp.banned.group2)},
                 {"employer_total", Num(cmp.banned.employer_total)}};
  d["deltas"] = {{"employer", Num(dl.employer)},
                 {"group1_low", Num(dl.group1_low)},
                 {"group1_high", Num(dl.group1_high)},
                 {"group1_exante", Num(dl.group1_exante)},
                 {"group2_low", Num(dl.group2_low)},
                 {"group2_high", Num(dl.group2_high)},
                 {"group2_exante", Num(dl.group2_exante)}};
  d["scenario"] = std::string(ToString(cmp.scenario));

  const bool negative = EffectiveTestTypology(c.market, c.eps) ==
                        TestTypology::kNegativelyInformative;
  const EmployerSupportInterval iv = EmployerBtbInterval(c.market);
  if (negative) {
    d["employer_btb_interval"] = {{"lower", Num(iv.lower)},
                                  {"upper", Num(iv.upper)},
                                  {"contains_p2", iv.Contains(pop.potential2)}};
  }

  std::ostringstream t;
  t << "market: " << MarketLine(c.market) << "\n"
    << "population: gamma=" << F(pop.share_group1) << " p1=" << F(pop.potential1)
    << " p2=" << F(pop.potential2) << " pbar=" << F(cmp.population_potential)
    << "\n"
    << "hiring threshold: p_E*=" << F(cmp.hiring_threshold) << " (pbar "
    << (cmp.population_potential_high ? ">=" : "<") << " p_E*)\n"
    << "test: " << ToString(cmp.test)
    << "  potentials: " << ToString(cmp.potentials) << "\n"
    << "with box:\n"
    << "  group 1: " << Label(cmp.with_box.group1.equilibrium) << "  "
    << ProfileLine(cmp.with_box.group1.equilibrium) << "  "
    << PayoffLine(cmp.with_box.group1.payoffs) << "\n"
    << "  group 2: " << Label(cmp.with_box.group2.equilibrium) << "  "
    << ProfileLine(cmp.with_box.group2.equilibrium) << "  "
    << PayoffLine(cmp.with_box.group2.payoffs) << "\n"
    << "  employer: " << F(cmp.with_box.employer_total) << "\n"
    << "box banned (pooled " << Label(*cmp.banned.pooled) << "  "
    << ProfileLine(*cmp.banned.pooled) << "):\n"
    << "  group 1: " << PayoffLine(cmp.banned.group1.payoffs) << "\n"
    << "  group 2: " << PayoffLine(cmp.banned.group2.payoffs) << "\n"
    << "  employer: " << F(cmp.banned.employer_total) << "\n"
    << "deltas (banned - box): employer=" << F(dl.employer)
    << " group1=" << F(dl.group1_exante) << " [L " << F(dl.group1_low)
    << ", H " << F(dl.group1_high) << "] group2=" << F(dl.group2_exante)
    << " [L " << F(dl.group2_low) << ", H " << F(dl.group2_high) << "]\n"
    << "scenario: " << ToString(cmp.scenario) << "\n";
  if (negative) {
    t << "employer gains from the ban for p2 in [" << F(iv.lower) << ", "
      << F(iv.upper) << "); p2=" << F(pop.potential2)
      << (iv.Contains(pop.potential2) ? " inside" : " outside") << "\n";
  }
  r.text = t.str();
  return r;
}

// ---- verify ----------------------------------------------------------------

struct CheckLog {
  Json checks = Json::array();
  std::vector<std::string> failures;

  void Add(const std::string& name, bool passed, const std::string& detail) {
    checks.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    if (!passed) failures.push_back(name + ": " + detail);
  }
};

struct Target {
  std::string tag;
  double potential;
};

std::vector<Target> VerifyTargets(const RunConfig& c) {
  if (!c.has_population) return {{"p", c.SingleGroupPotential()}};
  return {{"p1", c.population.potential1},
          {"p2", c.population.potential2},
          {"pbar", PopulationPotential(c.population)}};
}

StrategyProfile Perturbed(StrategyProfile s, double delta) {
  const double up = s.qualify_prob + delta;
  s.qualify_prob = up <= 1.0 ? up : s.qualify_prob - delta;
  s.qualify_prob = std::clamp(s.qualify_prob, 0.0, 1.0);
  return s;
}

void MonteCarloStage(const std::string& name, const StrategyProfile& s,
                     const PayoffTable& exact, const MarketParams& m,
                     double potential, const OracleConfig& o,
                     std::uint64_t seed, CheckLog& log) {
  const SimulatedPayoffs sim = SimulatePayoffs(s, m, potential, o.n_samples, seed);
  const std::pair<const MonteCarloEstimate*, double> rows[] = {
      {&sim.worker_low, exact.worker_low},
      {&sim.worker_high, exact.worker_high},
      {&sim.worker, exact.worker_exante},
      {&sim.employer, exact.employer}};
  const char* names[] = {"worker_low", "worker_high", "worker_exante", "employer"};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 4; ++k) {
    const MonteCarloEstimate& e = *rows[k].first;
    const double gap = std::abs(e.mean - rows[k].second);
    const bool pass = gap <= kSigmaPolicy * e.std_error + o.tol;
    if (!pass && ok) {
      detail = std::string(names[k]) + " simulated " + F(e.mean) +
               " vs closed form " + F(rows[k].second) + " (se " +
               F(e.std_error) + ")";
    }
    ok = ok && pass;
  }
  if (ok) detail = "n=" + std::to_string(o.n_samples) + " within 4 standard errors";
  log.Add(name, ok, detail);
}

Report Verify(const RunConfig& c, std::optional<double> perturb) {
  CheckLog log;
  const OracleConfig& o = c.oracle;
  std::uint64_t stream = 0;

  for (const Target& target : VerifyTargets(c)) {
    const SingleGroupSolution sol =
        SolveSingleGroup(c.market, target.potential, c.eps);
    for (std::size_t i = 0; i < sol.equilibria.size(); ++i) {
      const Equilibrium& e = sol.equilibria[i];
      StrategyProfile s = e.profile;
      std::string suffix;
      if (perturb && i == sol.selected) {
        s = Perturbed(s, *perturb);
        suffix = " (perturbed)";
      }
      const std::string id = target.tag + "=" + F(target.potential) + ", " + Label(e);
      const DeviationReport dev = CheckEquilibrium(s, c.market, target.potential, o.tol);
      log.Add("check_equilibrium[" + id + "]" + suffix, dev.passed,
              "worker_gain=" + F(dev.worker_gain) +
                  " employer_gain=" + F(dev.employer_gain) +
                  " belief_error=" + F(dev.belief_error));
      MonteCarloStage("monte_carlo[" + id + "]" + suffix, s, sol.payoffs[i],
                      c.market, target.potential, o, MixSeed(o.seed, stream++),
                      log);
    }

    const std::vector<GridCluster> clusters =
        GridSearchEquilibria(c.market, target.potential, o.grid_n, o.tol);
    std::string missing, extra;
    for (const Equilibrium& e : sol.equilibria) {
      const bool hit = std::any_of(clusters.begin(), clusters.end(), [&](const GridCluster& g) {
        return GridDistance(g, e.profile, o.grid_n) <= 2.0;
      });
      if (!hit) missing += " " + Label(e);
    }
    for (const GridCluster& g : clusters) {
      const bool hit = std::any_of(sol.equilibria.begin(), sol.equilibria.end(), [&](const Equilibrium& e) {
        return GridDistance(g, e.profile, o.grid_n) <= 2.0;
      });
      if (!hit) {
        extra += " (" + F(g.centroid.qualify_prob) + ", " + F(g.centroid.hire_prob) + ")";
      }
    }
    const bool grid_ok = missing.empty() && extra.empty();
    log.Add("grid_search[" + target.tag + "=" + F(target.potential) + "]", grid_ok,
            grid_ok ? std::to_string(clusters.size()) + " clusters, all matched"
                    : "missing:" + (missing.empty() ? std::string(" none") : missing) +
                          " extra:" + (extra.empty() ? std::string(" none") : extra));
  }

  if (c.has_population) {
    const BtbComparison cmp = CompareBtb(c.market, c.population, c.eps);
    const ComparisonCheck check = VerifyComparison(
        cmp, c.market, c.population, o.n_samples, MixSeed(o.seed, stream++), o.tol,
        kSigmaPolicy);
    std::string detail = "scenario " + std::string(ToString(cmp.scenario));
    for (const std::string& f : check.failures) detail += "; " + f;
    log.Add("compare_btb", check.passed, detail);
  }

  const bool passed = log.failures.empty();
  Report r{"verify", Json::object(), ""};
  Json& d = r.data;
  d["command"] = "verify";
  d["market"] = MarketJson(c.market);
  if (c.has_population) {
    d["population"] = {{"gamma", Num(c.population.share_group1)},
                       {"p1", Num(c.population.potential1)},
                       {"p2", Num(c.population.potential2)}};
  } else {
    d["p"] = Num(c.SingleGroupPotential());
  }
  d["seed"] = o.seed;
  d["n_samples"] = o.n_samples;
  d["grid_n"] = o.grid_n;
  d["tol"] = Num(o.tol);
  d["sigma_policy"] = Num(kSigmaPolicy);
  d["checks"] = log.checks;
  d["passed"] = passed;
  d["first_failure"] = passed ? Json(nullptr) : Json(log.failures.front());

  std::ostringstream t;
  t << "market: " << MarketLine(c.market) << "\n"
    << "oracle: grid_n=" << o.grid_n << " n_samples=" << o.n_samples
    << " seed=" << o.seed << " tol=" << F(o.tol) << "\n";
  for (const auto& chk : log.checks) {
    t << (chk["passed"].get<bool>() ? "PASS " : "FAIL ")
      << chk["name"].get<std::string>() << "  " << chk["detail"].get<std::string>()
      << "\n";
  }
  t << (passed ? "verification passed\n"
               : "verification FAILED at " + log.failures.front() + "\n");
  r.text = t.str();
  return r;
}

// ---- simulate --------------------------------------------------------------

Report Simulate(const RunConfig& c, bool& passed) {
  const double p = c.SingleGroupPotential();
  StrategyProfile s;
  std::string source;
  if (c.simulate_profile) {
    s = *c.simulate_profile;
    source = "configured";
  } else {
    const SingleGroupSolution sol = SolveSingleGroup(c.market, p, c.eps);
    s = sol.best().profile;
    source = "selected " + Label(sol.best());
  }
  const OracleConfig& o = c.oracle;
  const SimulatedPayoffs sim = SimulatePayoffs(s, c.market, p, o.n_samples, o.seed);
  const PayoffTable exact = ExpectedPayoffs(s, c.market, p);

  Report r{"simulate", Json::object(), ""};
  Json& d = r.data;
  d["command"] = "simulate";
  d["market"] = MarketJson(c.market);
  d["p"] = Num(p);
  d["profile"] = {{"source", source},
                  {"chi", Num(s.qualify_prob)},
                  {"eta", Num(s.hire_prob)}};
  d["seed"] = o.seed;
  d["n_samples"] = o.n_samples;

  std::ostringstream t;
  t << "market: " << MarketLine(c.market) << "\n"
    << "potential: p=" << F(p) << "\n"
    << "profile (" << source << "): chi=" << F(s.qualify_prob)
    << " eta=" << F(s.hire_prob) << "\n"
    << "n=" << o.n_samples << " seed=" << o.seed << "\n";

  passed = true;
  Json est = Json::object();
  const std::tuple<const char*, const MonteCarloEstimate*, double> rows[] = {
      {"worker_low", &sim.worker_low, exact.worker_low},
      {"worker_high", &sim.worker_high, exact.worker_high},
      {"worker_exante", &sim.worker, exact.worker_exante},
      {"employer", &sim.employer, exact.employer}};
  for (const auto& [name, e, x] : rows) {
    const double gap = e->mean - x;
    const bool ok = std::abs(gap) <= kSigmaPolicy * e->std_error + o.tol;
    passed = passed && ok;
    const double z = e->std_error > 0.0 ? gap / e->std_error : 0.0;
    est[name] = {{"mean", Num(e->mean)},
                 {"std_error", Num(e->std_error)},
                 {"samples", e->n},
                 {"exact", Num(x)},
                 {"z", Num(z)},
                 {"within_4se", ok}};
    t << "  " << name << ": " << F(e->mean) << " +/- " << F(e->std_error)
      << "  exact " << F(x) << "  z=" << F(z) << (ok ? "" : "  OUTSIDE 4 se")
      << "\n";
  }
  d["estimates"] = std::move(est);
  d["passed"] = passed;
  t << (passed ? "simulation agrees with exact expectation\n"
               : "simulation DISAGREES with exact expectation\n");
  r.text = t.str();
  return r;
}

// ---- sweep -----------------------------------------------------------------

std::string SweepSummary(const SweepSpec& spec, const SweepResult& res,
                         const std::filesystem::path& file) {
  std::ostringstream t;
  t << "mode: " << ToString(spec.mode) << "\n";
  for (const SweepAxis& a : spec.axes) {
    t << "axis " << a.name << ": [" << F(a.min) << ", " << F(a.max) << "] x "
      << a.steps << "\n";
  }
  int boundary = 0;
  for (const SweepCell& cell : res.cells) boundary += cell.boundary ? 1 : 0;
  t << "cells: " << res.cells.size() << " (boundary " << boundary << ")\n";
  for (const auto& [label, n] : LabelCounts(res)) {
    t << "  " << label << ": " << n << "\n";
  }
  t << "written: " << file.filename().string() << "\n";
  return t.str();
}

}  // namespace

std::string FormatKeyValueCsv(const KeyValueRows& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += CsvField(k) + "," + CsvField(v) + "\n";
  return out;
}

KeyValueRows ParseKeyValueCsv(const std::string& text) {
  KeyValueRows rows;
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool header = true;
  auto end_row = [&] {
    fields.push_back(std::move(cur));
    cur.clear();
    if (header) {
      header = false;
    } else if (fields.size() == 2) {
      rows.emplace_back(fields[0], fields[1]);
    } else if (!(fields.size() == 1 && fields[0].empty())) {
      throw ValidationError("csv", "report CSV rows need two fields");
    }
    fields.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch == '\n') {
      end_row();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty() || !fields.empty()) end_row();
  return rows;
}

RunConfig ResolveConfig(const CliOptions& opt) {
  RunConfig c = opt.config_path ? LoadConfig(*opt.config_path) : RunConfig{};
  if (opt.seed) c.oracle.seed = *opt.seed;
  if (opt.eps) c.eps = *opt.eps;
  if (opt.format) c.format = ParseOutputFormat(*opt.format);
  if (opt.chi || opt.eta) {
    StrategyProfile s = c.simulate_profile.value_or(StrategyProfile{});
    if (opt.chi) s.qualify_prob = *opt.chi;
    if (opt.eta) s.hire_prob = *opt.eta;
    c.simulate_profile = s;
  }
  if (c.sweep) {
    c.sweep->market = c.market;
    c.sweep->population = c.population;
    c.sweep->potential = c.SingleGroupPotential();
    c.sweep->eps = c.eps;
    c.sweep->format = c.format;
  }
  ValidateConfig(c);
  return c;
}

std::filesystem::path ResolveOutDir(const CliOptions& opt, const RunConfig& c) {
  if (opt.out_dir) return *opt.out_dir;
  if (c.out_dir) return *c.out_dir;
  if (const char* env = std::getenv(std::string(kOutDirEnv).c_str());
      env != nullptr && *env != '\0') {
    return env;
  }
  return std::string(kDefaultOutDir);
}

int RunCommand(const std::string& command, const CliOptions& opt,
               std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = ResolveConfig(opt);
    const std::filesystem::path dir = ResolveOutDir(opt, c);
    int code = kExitOk;
    Report report;
    if (command == "solve") {
      report = Solve(c);
    } else if (command == "compare") {
      report = Compare(c);
    } else if (command == "verify") {
      report = Verify(c, opt.debug_perturb);
      if (!report.data["passed"].get<bool>()) code = kExitVerification;
    } else if (command == "simulate") {
      bool passed = true;
      report = Simulate(c, passed);
      if (!passed) code = kExitVerification;
    } else if (command == "sweep") {
      if (!c.sweep) throw ValidationError("sweep", "sweep needs a sweep block in the configuration");
      const SweepResult res = RunSweep(*c.sweep);
      const std::filesystem::path file =
          dir / (c.format == OutputFormat::kCsv ? "sweep.csv" : "sweep.json");
      Emit(res, c.format, file);
      const std::string summary = SweepSummary(*c.sweep, res, file);
      WriteFileAtomically(dir / "sweep.txt", summary);
      if (!opt.quiet) out << summary;
      return kExitOk;
    } else {
      throw ValidationError("command", "unknown command '" + command + "'");
    }
    WriteReport(report, c, dir);
    if (!opt.quiet) out << report.text;
    if (code == kExitVerification) {
      err << "error: verification failed: "
          << report.data.value("first_failure", Json("simulation outside 4 standard errors"))
                 .get<std::string>()
          << "\n";
    }
    return code;
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: I/O failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const InconsistencyError& e) {
    err << "error: internal consistency check failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace btb::cli
