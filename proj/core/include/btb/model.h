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

#ifndef BTB_MODEL_H_
#define BTB_MODEL_H_

// Primitives of the hiring game: a worker privately draws a qualification
// cost, chooses whether to qualify, the employer sees a three-valued test
// result and decides whether to hire at a fixed wage.

#include <array>
#include <string_view>

namespace btb {

// Single tolerance shared by every classifier so that labels stay mutually
// consistent. Values within kDefaultEps of a boundary resolve to the weak
// side of the inequality.
inline constexpr double kDefaultEps = 1e-9;

struct MarketParams {
  double wage = 1.0;               // paid on every hire
  double benefit = 2.0;            // employer value of a qualified hire
  double cost_low = 0.3;           // qualification cost of a low-cost worker
  double cost_high = 1.5;          // qualification cost of a high-cost worker
  double reveal_unqualified = 0.2; // Pr[test = 1 | unqualified]
  double reveal_qualified = 0.6;   // Pr[test = 3 | qualified]

  // Cutoff on test accuracy below which qualifying never pays: c_L / w.
  double CostRatio() const { return cost_low / wage; }

  friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

struct PopulationParams {
  double share_group1 = 0.5;  // fraction of applicants in group 1
  double potential1 = 0.8;    // Pr[low cost | group 1]
  double potential2 = 0.4;    // Pr[low cost | group 2]

  friend bool operator==(const PopulationParams&,
                         const PopulationParams&) = default;
};

struct ValidatedModel {
  MarketParams market;
  PopulationParams population;
};

// Throws ValidationError naming the first violated invariant.
void ValidateMarket(const MarketParams& market);
void ValidatePopulation(const PopulationParams& population);
void ValidatePotential(double potential);
ValidatedModel Validate(const MarketParams& market,
                        const PopulationParams& population);

enum class TestSignal { kRevealsUnqualified = 1, kGarbled = 2, kRevealsQualified = 3 };

// Pr[test = 1], Pr[test = 2], Pr[test = 3] given the qualification choice.
using SignalDistribution = std::array<double, 3>;
SignalDistribution SignalDistributionFor(bool qualified,
                                         const MarketParams& market);

struct StagePayoffs {
  double worker;
  double employer;
};
StagePayoffs StagePayoff(bool qualified, bool hired, double cost,
                         const MarketParams& market);

// Low-cost worker strategy and employer response to a garbled result. The
// remaining strategy components are pinned: high-cost workers never
// qualify, test result 1 is never hired, test result 3 is always hired.
struct StrategyProfile {
  double qualify_prob = 0.0;
  double hire_prob = 0.0;

  friend bool operator==(const StrategyProfile&,
                         const StrategyProfile&) = default;
};

// Employer posterior that a worker with a garbled result is qualified.
// Beliefs after results 1 and 3 are 0 and 1 respectively.
struct Belief {
  double prob_qualified = 0.0;
};

Belief PosteriorGivenGarbled(double qualify_prob, double potential,
                             const MarketParams& market);

// Potential at which the employer is indifferent about hiring on a garbled
// result when every low-cost worker qualifies.
double HiringThreshold(const MarketParams& market);

enum class TestTypology {
  kUniformlyInformative,
  kUninformative,
  kPositivelyInformative,
  kNegativelyInformative,
  kBoundaryEqualPhis,
};

enum class PotentialTypology {
  kUniformlyHigh,
  kUniformlyLow,
  kStatisticallyDistinct,
  kEqualPotentials,
};

TestTypology ClassifyTest(const MarketParams& market,
                          double eps = kDefaultEps);
PotentialTypology ClassifyPotentials(const PopulationParams& population,
                                     double hiring_threshold,
                                     double eps = kDefaultEps);

std::string_view ToString(TestTypology typology);
std::string_view ToString(PotentialTypology typology);

// a >= b with the boundary band [b - eps, b) counted as satisfied.
inline bool AtLeast(double a, double b, double eps) { return a >= b - eps; }

// Whether each test outcome is decisive often enough to make qualifying
// worthwhile against a conservative (revealed-unqualified) or aggressive
// (revealed-qualified) hiring rule. Boundaries resolve to true.
inline bool QualifiedRevealEnough(const MarketParams& m, double eps) {
  return AtLeast(m.reveal_qualified, m.CostRatio(), eps);
}
inline bool UnqualifiedRevealEnough(const MarketParams& m, double eps) {
  return AtLeast(m.reveal_unqualified, m.CostRatio(), eps);
}

}  // namespace btb

#endif  // BTB_MODEL_H_
