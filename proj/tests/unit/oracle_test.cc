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

#include "btb/oracle.h"

#include <cmath>

#include <gtest/gtest.h>

#include "btb/solver.h"
#include "test_support.h"

namespace btb {
namespace {

MarketParams Negative() {
  MarketParams m;
  m.reveal_unqualified = 0.6;
  m.reveal_qualified = 0.2;
  return m;
}

MarketParams Uninformative() {
  MarketParams m;
  m.reveal_unqualified = 0.1;
  m.reveal_qualified = 0.2;
  return m;
}

TEST(CheckEquilibrium, MixedProfilePasses) {
  const StrategyProfile s{5.0 / 6.0, 0.75};
  const DeviationReport r = CheckEquilibrium(s, {}, 0.8, 1e-9);
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.worker_gain, 1e-9);
  EXPECT_LT(r.employer_gain, 1e-9);
}

TEST(CheckEquilibrium, FullQualificationWithAggressiveHiringFails) {
  // phi0 * w = 0.2 < c_L: under aggressive hiring qualifying does not pay.
  const DeviationReport r = CheckEquilibrium({1.0, 1.0}, {}, 0.8, 1e-9);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.worker_gain, 0.1, 1e-12);
}

TEST(CheckEquilibrium, ZeroProfilePassesWhenQualifyingDoesNotPay) {
  EXPECT_TRUE(CheckEquilibrium({0.0, 0.0}, Uninformative(), 0.7, 1e-9).passed);
}

TEST(CheckEquilibrium, WrongBeliefIsReported) {
  const DeviationReport r =
      CheckEquilibrium({5.0 / 6.0, 0.75}, {}, 0.8, 1e-9, Belief{0.4});
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.belief_error, 0.1, 1e-9);
}

TEST(CheckEquilibrium, EveryEnumeratedEquilibriumPasses) {
  testing::ParamGen gen(21);
  for (int i = 0; i < 500; ++i) {
    const MarketParams m = gen.Market();
    const double p = gen.Probability();
    for (const Equilibrium& e : EnumerateEquilibria(m, p)) {
      EXPECT_TRUE(CheckEquilibrium(e.profile, m, p, 1e-9, e.belief).passed);
    }
  }
}

TEST(GridSearch, SingleMixedCluster) {
  const auto clusters = GridSearchEquilibria({}, 0.8, 401, 1e-9);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_NEAR(clusters[0].centroid.qualify_prob, 5.0 / 6.0, 1.0 / 400);
  EXPECT_NEAR(clusters[0].centroid.hire_prob, 0.75, 1.0 / 400);
}

TEST(GridSearch, ThreeClustersForNegativeTest) {
  const auto clusters = GridSearchEquilibria(Negative(), 0.5, 401, 1e-9);
  ASSERT_EQ(clusters.size(), 3u);
  const StrategyProfile want[] = {{0.0, 0.0}, {2.0 / 3.0, 0.25}, {1.0, 1.0}};
  for (const StrategyProfile& w : want) {
    int hits = 0;
    for (const GridCluster& c : clusters) hits += GridDistance(c, w, 401) <= 2.0;
    EXPECT_EQ(hits, 1);
  }
}

TEST(GridSearch, UninformativeHasOnlyTheOrigin) {
  const auto clusters = GridSearchEquilibria(Uninformative(), 0.6, 401, 1e-9);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].centroid, (StrategyProfile{0.0, 0.0}));
}

TEST(SimulatePayoffs, MixedWorkerPayoffWithinFourSe) {
  const SimulatedPayoffs s = SimulatePayoffs({5.0 / 6.0, 0.75}, {}, 0.8, 1000000, 42);
  EXPECT_LE(std::abs(s.worker.mean - 0.6), 4.0 * s.worker.std_error);
  EXPECT_LE(std::abs(s.employer.mean - 0.4), 4.0 * s.employer.std_error);
  EXPECT_EQ(s.worker.n, 1000000u);
  EXPECT_EQ(s.worker_low.n + s.worker_high.n, 1000000u);
}

TEST(SimulatePayoffs, AggressiveEmployerPayoff) {
  const SimulatedPayoffs s = SimulatePayoffs({1.0, 1.0}, Negative(), 0.5, 1000000, 7);
  EXPECT_LE(std::abs(s.employer.mean - 0.3), 4.0 * s.employer.std_error);
}

TEST(SimulatePayoffs, DegenerateProfileIsExactlyZero) {
  const SimulatedPayoffs s = SimulatePayoffs({0.0, 0.0}, Uninformative(), 0.5, 10000, 3);
  for (const MonteCarloEstimate* e : {&s.worker, &s.worker_low, &s.worker_high, &s.employer}) {
    EXPECT_EQ(e->mean, 0.0);
    EXPECT_EQ(e->std_error, 0.0);
  }
}

TEST(SimulatePayoffs, BitIdenticalForIdenticalInputs) {
  const SimulatedPayoffs a = SimulatePayoffs({0.7, 0.3}, {}, 0.6, 50000, 99);
  const SimulatedPayoffs b = SimulatePayoffs({0.7, 0.3}, {}, 0.6, 50000, 99);
  EXPECT_EQ(a.worker.mean, b.worker.mean);
  EXPECT_EQ(a.employer.mean, b.employer.mean);
  EXPECT_EQ(a.employer.std_error, b.employer.std_error);
  const SimulatedPayoffs c = SimulatePayoffs({0.7, 0.3}, {}, 0.6, 50000, 100);
  EXPECT_NE(a.employer.mean, c.employer.mean);
}

TEST(SimulatePayoffs, StandardErrorShrinksAsRootN) {
  // Quadrupling n halves the standard error.
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const double se1 = SimulatePayoffs({5.0 / 6.0, 0.75}, {}, 0.8, 100000, seed).employer.std_error;
    const double se4 = SimulatePayoffs({5.0 / 6.0, 0.75}, {}, 0.8, 400000, seed).employer.std_error;
    EXPECT_NEAR(se1 / se4, 2.0, 0.4);
    const double se2 = SimulatePayoffs({5.0 / 6.0, 0.75}, {}, 0.8, 200000, seed).employer.std_error;
    EXPECT_NEAR(se1 / se2, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
  }
}

TEST(VerifyComparison, AcceptsSolverOutput) {
  const PopulationParams pop{0.5, 0.5, 0.25};
  const BtbComparison c = CompareBtb(Negative(), pop);
  const ComparisonCheck check = VerifyComparison(c, Negative(), pop, 200000, 5, 1e-9);
  EXPECT_TRUE(check.passed) << (check.failures.empty() ? "" : check.failures.front());
}

TEST(VerifyComparison, RejectsTamperedDeltas) {
  const PopulationParams pop{0.5, 0.5, 0.25};
  BtbComparison c = CompareBtb(Negative(), pop);
  c.deltas.employer = 0.05;  // wrong sign and magnitude
  const ComparisonCheck check = VerifyComparison(c, Negative(), pop, 200000, 5, 1e-9);
  EXPECT_FALSE(check.passed);
  ASSERT_FALSE(check.failures.empty());
}

TEST(MixSeed, DistinctStreams) {
  EXPECT_NE(MixSeed(42, 0), MixSeed(42, 1));
  EXPECT_NE(MixSeed(42, 0), MixSeed(43, 0));
  EXPECT_EQ(MixSeed(42, 5), MixSeed(42, 5));
}

}  // namespace
}  // namespace btb
