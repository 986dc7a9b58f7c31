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

#ifndef BTB_SOLVER_H_
#define BTB_SOLVER_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btb/model.h"

namespace btb {

enum class EquilibriumKind {
  kFullQualification,  // FQE: every low-cost worker qualifies
  kMixed,              // MSE: low-cost workers and employer both mix
  kZeroQualification,  // ZQE: nobody qualifies, garbled results not hired
};

enum class HiringPosture { kAggressive, kConservative, kMixed };

struct Equilibrium {
  EquilibriumKind kind;
  StrategyProfile profile;
  HiringPosture posture;
  Belief belief;
};

// Expected payoffs for one group of applicants. Worker entries are
// conditional on the drawn cost; `employer` is per applicant.
struct PayoffTable {
  double worker_low = 0.0;
  double worker_high = 0.0;
  double worker_exante = 0.0;
  double employer = 0.0;
};

std::string_view ToString(EquilibriumKind kind);
std::string_view ToString(HiringPosture posture);

// "FQE-aggressive", "FQE-conservative", "MSE" or "ZQE".
std::string Label(const Equilibrium& eq);

// Payoff gain of qualifying over not qualifying for a low-cost worker when
// garbled results are hired with probability `hire_prob`.
double QualificationGain(const MarketParams& market, double hire_prob);

// Interior mixed profile, or nullopt unless both the hiring and the
// qualification probability lie strictly inside (0, 1).
std::optional<StrategyProfile> MixedProfile(const MarketParams& market,
                                            double potential);

// All sequential equilibria of the one-group game at potential `potential`,
// ordered FQE, MSE, ZQE. Worker and employer indifference inside the eps
// band resolves toward qualifying and hiring.
std::vector<Equilibrium> EnumerateEquilibria(const MarketParams& market,
                                             double potential,
                                             double eps = kDefaultEps);

// Closed-form expected payoffs of an enumerated equilibrium.
PayoffTable EquilibriumPayoffs(const Equilibrium& eq,
                               const MarketParams& market, double potential);

// Exact expected payoffs of an arbitrary profile played against a group
// with the given potential.
PayoffTable ExpectedPayoffs(const StrategyProfile& profile,
                            const MarketParams& market, double potential);

// Index of the Pareto-dominant equilibrium. Throws InconsistencyError if the
// preferred kind fails to weakly dominate every other entry.
std::size_t ParetoSelect(std::span<const Equilibrium> equilibria,
                         std::span<const PayoffTable> payoffs,
                         double eps = kDefaultEps);

struct SingleGroupSolution {
  std::vector<Equilibrium> equilibria;
  std::vector<PayoffTable> payoffs;
  std::size_t selected = 0;

  const Equilibrium& best() const { return equilibria[selected]; }
  const PayoffTable& best_payoffs() const { return payoffs[selected]; }
};

SingleGroupSolution SolveSingleGroup(const MarketParams& market,
                                     double potential,
                                     double eps = kDefaultEps);

}  // namespace btb

#endif  // BTB_SOLVER_H_
