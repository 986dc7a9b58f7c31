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

#ifndef BTB_BTB_H_
#define BTB_BTB_H_

// Two-group market with and without the box: when the box is present the
// employer conditions hiring on group membership and each group plays its
// own single-group equilibrium; when it is banned both groups face a single
// hiring rule solved at the population potential.

#include <optional>
#include <string_view>
#include <vector>

#include "btb/model.h"
#include "btb/solver.h"

namespace btb {

enum class Regime { kWithBox, kBanned };

struct GroupOutcome {
  Equilibrium equilibrium;
  PayoffTable payoffs;
};

struct MarketSolution {
  Regime regime = Regime::kWithBox;
  GroupOutcome group1;
  GroupOutcome group2;
  std::optional<Equilibrium> pooled;  // present iff regime == kBanned
  double employer_total = 0.0;        // share-weighted per-applicant payoff
};

enum class Scenario {
  kNoEffect,
  kBtbParetoDominant,
  kBoxParetoDominant,
  kEmployerOnlyAffectedHighPbar,
  kEmployerOnlyAffectedLowPbar,
  kOpposedEmployerProBan,
  kEmployerHurtWorkersHelped,
  kEmployerHelpedByCommitment,
};

std::string_view ToString(Regime regime);
std::string_view ToString(Scenario scenario);

// Signed change banned minus with-box for every actor.
struct WelfareDeltas {
  double employer = 0.0;
  double group1_low = 0.0;
  double group1_high = 0.0;
  double group1_exante = 0.0;
  double group2_low = 0.0;
  double group2_high = 0.0;
  double group2_exante = 0.0;
};

struct BtbComparison {
  MarketSolution with_box;
  MarketSolution banned;
  WelfareDeltas deltas;
  Scenario scenario = Scenario::kNoEffect;
  TestTypology test = TestTypology::kUninformative;
  PotentialTypology potentials = PotentialTypology::kEqualPotentials;
  bool population_potential_high = false;
  double hiring_threshold = 0.0;
  double population_potential = 0.0;
};

double PopulationPotential(const PopulationParams& population);

MarketSolution SolveWithBox(const MarketParams& market,
                            const PopulationParams& population,
                            double eps = kDefaultEps);

MarketSolution SolveBanned(const MarketParams& market,
                           const PopulationParams& population,
                           double eps = kDefaultEps);

// Range of disadvantaged-group potentials [lower, upper) on which the
// employer gains from the ban under a negatively informative test: at
// `lower` aggressive hiring of group 2 breaks even, `upper` is the hiring
// threshold.
struct EmployerSupportInterval {
  double lower;
  double upper;

  bool Contains(double potential) const {
    return potential >= lower && potential < upper;
  }
};
EmployerSupportInterval EmployerBtbInterval(const MarketParams& market);

// Test typology with the equal-accuracy boundary folded into whichever of
// the uniform labels its accuracy satisfies.
TestTypology EffectiveTestTypology(const MarketParams& market,
                                   double eps = kDefaultEps);

BtbComparison CompareBtb(const MarketParams& market,
                         const PopulationParams& population,
                         double eps = kDefaultEps);

// Describes every actor whose delta sign contradicts `scenario`; empty when
// consistent. CompareBtb throws InconsistencyError on a non-empty result.
// `degenerate_share` (a group share within eps of 0 or 1) relaxes strict
// employer signs to weak ones.
std::vector<std::string> ScenarioSignViolations(Scenario scenario,
                                                const WelfareDeltas& deltas,
                                                double eps = kDefaultEps,
                                                bool degenerate_share = false);

}  // namespace btb

#endif  // BTB_BTB_H_
