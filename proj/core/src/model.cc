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

#include "btb/model.h"

#include <cmath>
#include <sstream>
#include <string>

#include "btb/errors.h"

namespace btb {
namespace {

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void RequireFinite(const char* field, double v) {
  if (!std::isfinite(v)) {
    throw ValidationError(field, std::string(field) + " must be finite");
  }
}

void RequireOpenUnit(const char* field, double v) {
  RequireFinite(field, v);
  if (!(v > 0.0 && v < 1.0)) {
    throw ValidationError(field, std::string(field) + " = " + Fmt(v) +
                                     " must lie in (0, 1)");
  }
}

}  // namespace

void ValidateMarket(const MarketParams& m) {
  RequireFinite("w", m.wage);
  RequireFinite("B", m.benefit);
  RequireFinite("c_L", m.cost_low);
  RequireFinite("c_H", m.cost_high);
  if (!(m.wage > 0.0)) {
    throw ValidationError("w", "w = " + Fmt(m.wage) + " must be > 0");
  }
  if (!(m.benefit > m.wage)) {
    throw ValidationError("B", "B <= w violates B > w (B = " +
                                   Fmt(m.benefit) + ", w = " + Fmt(m.wage) +
                                   ")");
  }
  if (!(m.cost_low > 0.0)) {
    throw ValidationError("c_L", "c_L <= 0 violates 0 < c_L < w");
  }
  if (!(m.cost_low < m.wage)) {
    throw ValidationError("c_L", "c_L >= w violates 0 < c_L < w (c_L = " +
                                     Fmt(m.cost_low) + ", w = " +
                                     Fmt(m.wage) + ")");
  }
  if (!(m.cost_high > m.wage)) {
    throw ValidationError("c_H", "c_H <= w violates c_H > w (c_H = " +
                                     Fmt(m.cost_high) + ", w = " +
                                     Fmt(m.wage) + ")");
  }
  RequireOpenUnit("phi0", m.reveal_unqualified);
  RequireOpenUnit("phi1", m.reveal_qualified);
}

void ValidatePotential(double potential) { RequireOpenUnit("p", potential); }

void ValidatePopulation(const PopulationParams& pop) {
  RequireOpenUnit("gamma", pop.share_group1);
  RequireOpenUnit("p1", pop.potential1);
  RequireOpenUnit("p2", pop.potential2);
  if (pop.potential1 < pop.potential2) {
    throw ValidationError("p1", "p1 < p2 (p1 = " + Fmt(pop.potential1) +
                                    ", p2 = " + Fmt(pop.potential2) + ")");
  }
}

ValidatedModel Validate(const MarketParams& market,
                        const PopulationParams& population) {
  ValidateMarket(market);
  ValidatePopulation(population);
  return {market, population};
}

SignalDistribution SignalDistributionFor(bool qualified,
                                         const MarketParams& m) {
  if (qualified) {
    return {0.0, 1.0 - m.reveal_qualified, m.reveal_qualified};
  }
  return {m.reveal_unqualified, 1.0 - m.reveal_unqualified, 0.0};
}

StagePayoffs StagePayoff(bool qualified, bool hired, double cost,
                         const MarketParams& m) {
  const double q = qualified ? 1.0 : 0.0;
  const double h = hired ? 1.0 : 0.0;
  return {m.wage * h - cost * q, (m.benefit * q - m.wage) * h};
}

Belief PosteriorGivenGarbled(double qualify_prob, double potential,
                             const MarketParams& m) {
  const double qualified_mass = potential * qualify_prob;
  const double num = (1.0 - m.reveal_qualified) * qualified_mass;
  if (num == 0.0) return {0.0};
  const double den = num + (1.0 - m.reveal_unqualified) * (1.0 - qualified_mass);
  return {num / den};
}

double HiringThreshold(const MarketParams& m) {
  return m.wage * (1.0 - m.reveal_unqualified) /
         (m.benefit * (1.0 - m.reveal_qualified) +
          m.wage * (m.reveal_qualified - m.reveal_unqualified));
}

TestTypology ClassifyTest(const MarketParams& m, double eps) {
  if (std::abs(m.reveal_unqualified - m.reveal_qualified) <= eps) {
    return TestTypology::kBoundaryEqualPhis;
  }
  const bool hi0 = UnqualifiedRevealEnough(m, eps);
  const bool hi1 = QualifiedRevealEnough(m, eps);
  if (hi0 && hi1) return TestTypology::kUniformlyInformative;
  if (!hi0 && !hi1) return TestTypology::kUninformative;
  return hi1 ? TestTypology::kPositivelyInformative
             : TestTypology::kNegativelyInformative;
}

PotentialTypology ClassifyPotentials(const PopulationParams& pop,
                                     double threshold, double eps) {
  if (std::abs(pop.potential1 - pop.potential2) <= eps) {
    return PotentialTypology::kEqualPotentials;
  }
  const bool high1 = AtLeast(pop.potential1, threshold, eps);
  const bool high2 = AtLeast(pop.potential2, threshold, eps);
  if (high2) return PotentialTypology::kUniformlyHigh;
  if (!high1) return PotentialTypology::kUniformlyLow;
  return PotentialTypology::kStatisticallyDistinct;
}

std::string_view ToString(TestTypology t) {
  switch (t) {
    case TestTypology::kUniformlyInformative: return "UniformlyInformative";
    case TestTypology::kUninformative: return "Uninformative";
    case TestTypology::kPositivelyInformative: return "PositivelyInformative";
    case TestTypology::kNegativelyInformative: return "NegativelyInformative";
    case TestTypology::kBoundaryEqualPhis: return "BoundaryEqualPhis";
  }
  return "?";
}

std::string_view ToString(PotentialTypology t) {
  switch (t) {
    case PotentialTypology::kUniformlyHigh: return "UniformlyHigh";
    case PotentialTypology::kUniformlyLow: return "UniformlyLow";
    case PotentialTypology::kStatisticallyDistinct: return "StatisticallyDistinct";
    case PotentialTypology::kEqualPotentials: return "EqualPotentials";
  }
  return "?";
}

}  // namespace btb
