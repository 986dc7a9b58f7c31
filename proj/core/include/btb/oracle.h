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

#ifndef BTB_ORACLE_H_
#define BTB_ORACLE_H_

// Numerical checks that share nothing with the closed forms beyond the stage
// payoffs and the test-signal distribution: best-response verification of a
// profile, an exhaustive search of the discretised strategy square, and a
// Monte Carlo simulation of the extensive form.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btb/btb.h"
#include "btb/model.h"

namespace btb {

struct DeviationReport {
  double worker_gain = 0.0;    // best unilateral gain of either cost type
  double employer_gain = 0.0;  // gain from re-optimising on a garbled result
  double belief_error = 0.0;   // |supplied belief - Bayes posterior|
  bool passed = false;
};

// When `belief` is omitted the model's posterior for the profile is checked
// against the oracle's own Bayes computation.
DeviationReport CheckEquilibrium(const StrategyProfile& profile,
                                 const MarketParams& market, double potential,
                                 double tol,
                                 std::optional<Belief> belief = std::nullopt);

struct GridCluster {
  StrategyProfile centroid;
  std::vector<StrategyProfile> cells;
};

// Scans the (qualify, hire) grid with grid_n points per axis. A grid point
// is kept when its half-step box intersects both best-response
// correspondences: some qualify rate in the box is a worker best response
// to some hire rate in the box, and vice versa. Kept points are merged into
// 8-connected clusters, returned in row-major order of their first cell.
std::vector<GridCluster> GridSearchEquilibria(const MarketParams& market,
                                              double potential, int grid_n,
                                              double tol);

// Distance in grid steps (Chebyshev) from a profile to the nearest cell of
// a cluster.
double GridDistance(const GridCluster& cluster, const StrategyProfile& profile,
                    int grid_n);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

struct SimulatedPayoffs {
  MonteCarloEstimate worker;       // ex ante over the cost draw
  MonteCarloEstimate worker_low;   // samples that drew the low cost
  MonteCarloEstimate worker_high;  // samples that drew the high cost
  MonteCarloEstimate employer;
};

// Draws cost, qualification, test result and hiring decision n times.
// Deterministic in (seed, n, profile, market, potential).
SimulatedPayoffs SimulatePayoffs(const StrategyProfile& profile,
                                 const MarketParams& market, double potential,
                                 std::uint64_t n, std::uint64_t seed);

struct ComparisonCheck {
  bool passed = true;
  std::vector<std::string> failures;  // each names the actor and regime
};

// Re-derives every welfare delta of `cmp` by simulation of both regimes and
// checks agreement within `z` standard errors, sign agreement where the
// simulated delta is significant, and the scenario's sign pattern.
ComparisonCheck VerifyComparison(const BtbComparison& cmp,
                                 const MarketParams& market,
                                 const PopulationParams& population,
                                 std::uint64_t n, std::uint64_t seed,
                                 double tol, double z = 4.0);

// splitmix64 finaliser; used to derive independent per-stream seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace btb

#endif  // BTB_ORACLE_H_
