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

#include "btb/btb.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "btb/errors.h"

namespace btb {
namespace {

enum class Sign { kZero, kPositive, kNegative, kNonNegative, kNonPositive };

struct SignPattern {
  Sign employer;
  Sign group1;
  Sign group2;
};

SignPattern PatternFor(Scenario s) {
  switch (s) {
    case Scenario::kNoEffect:
      return {Sign::kZero, Sign::kZero, Sign::kZero};
    case Scenario::kBtbParetoDominant:
      return {Sign::kNonNegative, Sign::kZero, Sign::kPositive};
    case Scenario::kBoxParetoDominant:
      return {Sign::kNegative, Sign::kNegative, Sign::kZero};
    case Scenario::kEmployerOnlyAffectedHighPbar:
      return {Sign::kNonPositive, Sign::kZero, Sign::kPositive};
    case Scenario::kEmployerOnlyAffectedLowPbar:
      return {Sign::kNonPositive, Sign::kNegative, Sign::kZero};
    case Scenario::kOpposedEmployerProBan:
      return {Sign::kNonNegative, Sign::kNegative, Sign::kZero};
    case Scenario::kEmployerHurtWorkersHelped:
      return {Sign::kNonPositive, Sign::kZero, Sign::kPositive};
    case Scenario::kEmployerHelpedByCommitment:
      return {Sign::kZero, Sign::kZero, Sign::kPositive};
  }
  return {Sign::kZero, Sign::kZero, Sign::kZero};
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool Matches(Sign s, double v, double tol) {
  switch (s) {
    case Sign::kZero: return std::abs(v) <= tol;
    case Sign::kPositive: return v > tol;
    case Sign::kNegative: return v < -tol;
    case Sign::kNonNegative: return v >= -tol;
    case Sign::kNonPositive: return v <= tol;
  }
  return false;
}

// Conditional entries only need to agree weakly; the ex-ante entry carries
// the strict part of the sign.
bool GroupMatches(Sign s, double low, double high, double exante, double tol) {
  if (!Matches(s, exante, tol)) return false;
  Sign weak = s;
  if (s == Sign::kPositive) weak = Sign::kNonNegative;
  if (s == Sign::kNegative) weak = Sign::kNonPositive;
  return Matches(weak, low, tol) && Matches(weak, high, tol);
}

// Share-weighted mean written so that equal inputs return that value
// exactly.
double Blend(double group1, double group2, double gamma) {
  return group1 + (1.0 - gamma) * (group2 - group1);
}

GroupOutcome WithBoxGroup(const MarketParams& m, double potential,
                          double eps) {
  SingleGroupSolution s = SolveSingleGroup(m, potential, eps);
  return {s.best(), s.best_payoffs()};
}

// Pooled profile evaluated against one group's own potential. For pure
// pooled profiles the closed forms are exact at any potential; under a
// pooled mixed profile the worker entries are group independent while the
// employer's per-group payoff is not, so it is taken from the generic
// expectation.
GroupOutcome BannedGroup(const Equilibrium& pooled, const MarketParams& m,
                         double potential) {
  PayoffTable t = EquilibriumPayoffs(pooled, m, potential);
  if (pooled.kind == EquilibriumKind::kMixed) {
    t.employer = ExpectedPayoffs(pooled.profile, m, potential).employer;
  }
  return {pooled, t};
}

}  // namespace

std::string_view ToString(Regime r) {
  return r == Regime::kWithBox ? "with_box" : "banned";
}

std::string_view ToString(Scenario s) {
  switch (s) {
    case Scenario::kNoEffect: return "NoEffect";
    case Scenario::kBtbParetoDominant: return "BtbParetoDominant";
    case Scenario::kBoxParetoDominant: return "BoxParetoDominant";
    case Scenario::kEmployerOnlyAffectedHighPbar:
      return "EmployerOnlyAffected_HighPbar";
    case Scenario::kEmployerOnlyAffectedLowPbar:
      return "EmployerOnlyAffected_LowPbar";
    case Scenario::kOpposedEmployerProBan: return "OpposedEmployerProBan";
    case Scenario::kEmployerHurtWorkersHelped:
      return "EmployerHurtWorkersHelped";
    case Scenario::kEmployerHelpedByCommitment:
      return "EmployerHelpedByCommitment";
  }
  return "?";
}

double PopulationPotential(const PopulationParams& pop) {
  return pop.share_group1 * pop.potential1 +
         (1.0 - pop.share_group1) * pop.potential2;
}

MarketSolution SolveWithBox(const MarketParams& m,
                            const PopulationParams& pop, double eps) {
  MarketSolution s;
  s.regime = Regime::kWithBox;
  s.group1 = WithBoxGroup(m, pop.potential1, eps);
  s.group2 = WithBoxGroup(m, pop.potential2, eps);
  s.employer_total = Blend(s.group1.payoffs.employer,
                           s.group2.payoffs.employer, pop.share_group1);
  return s;
}

MarketSolution SolveBanned(const MarketParams& m, const PopulationParams& pop,
                           double eps) {
  MarketSolution s;
  s.regime = Regime::kBanned;
  const SingleGroupSolution pooled =
      SolveSingleGroup(m, PopulationPotential(pop), eps);
  s.pooled = pooled.best();
  s.group1 = BannedGroup(*s.pooled, m, pop.potential1);
  s.group2 = BannedGroup(*s.pooled, m, pop.potential2);
  // Under a pooled mixed profile the employer faces one population of
  // potential pbar; its closed form avoids cancellation across the groups.
  s.employer_total =
      s.pooled->kind == EquilibriumKind::kMixed
          ? pooled.best_payoffs().employer
          : Blend(s.group1.payoffs.employer, s.group2.payoffs.employer,
                  pop.share_group1);
  return s;
}

EmployerSupportInterval EmployerBtbInterval(const MarketParams& m) {
  const double lower = m.wage * (1.0 - m.reveal_unqualified) /
                       (m.benefit - m.wage * m.reveal_unqualified);
  return {lower, HiringThreshold(m)};
}

TestTypology EffectiveTestTypology(const MarketParams& m, double eps) {
  const TestTypology t = ClassifyTest(m, eps);
  if (t != TestTypology::kBoundaryEqualPhis) return t;
  return UnqualifiedRevealEnough(m, eps) && QualifiedRevealEnough(m, eps)
             ? TestTypology::kUniformlyInformative
             : TestTypology::kUninformative;
}

std::vector<std::string> ScenarioSignViolations(Scenario scenario,
                                                const WelfareDeltas& d,
                                                double tol,
                                                bool degenerate_share) {
  SignPattern want = PatternFor(scenario);
  // The employer delta is share-weighted; with one group of vanishing share
  // a strict employer sign shrinks into the tolerance band.
  if (degenerate_share) {
    if (want.employer == Sign::kPositive) want.employer = Sign::kNonNegative;
    if (want.employer == Sign::kNegative) want.employer = Sign::kNonPositive;
  }
  std::vector<std::string> out;
  if (!Matches(want.employer, d.employer, tol)) {
    out.push_back("employer delta " + Num(d.employer));
  }
  if (!GroupMatches(want.group1, d.group1_low, d.group1_high, d.group1_exante,
                    tol)) {
    out.push_back("group1 delta " + Num(d.group1_exante));
  }
  if (!GroupMatches(want.group2, d.group2_low, d.group2_high, d.group2_exante,
                    tol)) {
    out.push_back("group2 delta " + Num(d.group2_exante));
  }
  return out;
}

BtbComparison CompareBtb(const MarketParams& m, const PopulationParams& pop,
                         double eps) {
  BtbComparison c;
  c.with_box = SolveWithBox(m, pop, eps);
  c.banned = SolveBanned(m, pop, eps);
  c.hiring_threshold = HiringThreshold(m);
  c.population_potential = PopulationPotential(pop);
  c.test = ClassifyTest(m, eps);
  c.potentials = ClassifyPotentials(pop, c.hiring_threshold, eps);
  c.population_potential_high =
      AtLeast(c.population_potential, c.hiring_threshold, eps);

  const PayoffTable& b1 = c.with_box.group1.payoffs;
  const PayoffTable& b2 = c.with_box.group2.payoffs;
  const PayoffTable& n1 = c.banned.group1.payoffs;
  const PayoffTable& n2 = c.banned.group2.payoffs;
  const double gamma = pop.share_group1;
  WelfareDeltas& d = c.deltas;
  d.employer = c.banned.employer_total - c.with_box.employer_total;
  d.group1_low = n1.worker_low - b1.worker_low;
  d.group1_high = n1.worker_high - b1.worker_high;
  d.group1_exante = n1.worker_exante - b1.worker_exante;
  d.group2_low = n2.worker_low - b2.worker_low;
  d.group2_high = n2.worker_high - b2.worker_high;
  d.group2_exante = n2.worker_exante - b2.worker_exante;

  const bool high = c.population_potential_high;
  if (c.potentials != PotentialTypology::kStatisticallyDistinct) {
    c.scenario = Scenario::kNoEffect;
  } else {
    switch (EffectiveTestTypology(m, eps)) {
      case TestTypology::kUninformative:
      case TestTypology::kBoundaryEqualPhis:
        c.scenario = Scenario::kNoEffect;
        break;
      case TestTypology::kUniformlyInformative:
        c.scenario = high ? Scenario::kEmployerOnlyAffectedHighPbar
                          : Scenario::kEmployerOnlyAffectedLowPbar;
        break;
      case TestTypology::kPositivelyInformative:
        c.scenario = high ? Scenario::kBtbParetoDominant
                          : Scenario::kOpposedEmployerProBan;
        break;
      case TestTypology::kNegativelyInformative: {
        if (!high) {
          c.scenario = Scenario::kBoxParetoDominant;
          break;
        }
        const double lower = EmployerBtbInterval(m).lower;
        if (std::abs(pop.potential2 - lower) <= eps) {
          c.scenario = Scenario::kEmployerHelpedByCommitment;
        } else if (pop.potential2 > lower) {
          c.scenario = Scenario::kBtbParetoDominant;
        } else {
          c.scenario = Scenario::kEmployerHurtWorkersHelped;
        }
        break;
      }
    }
  }

  // Payoff deltas scale with the wage and benefit, so the sign band does too.
  const double tol = eps * (1.0 + m.benefit + m.wage);
  const bool degenerate = gamma <= eps || gamma >= 1.0 - eps;
  const std::vector<std::string> bad =
      ScenarioSignViolations(c.scenario, d, tol, degenerate);
  if (!bad.empty()) {
    std::string msg = "scenario " + std::string(ToString(c.scenario)) +
                      " contradicts computed deltas:";
    for (const std::string& b : bad) msg += " [" + b + "]";
    throw InconsistencyError(msg);
  }
  return c;
}

}  // namespace btb
