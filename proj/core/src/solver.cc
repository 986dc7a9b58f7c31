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

#include "btb/solver.h"

#include <algorithm>
#include <string>

#include "btb/errors.h"

namespace btb {
namespace {

HiringPosture PostureFor(double hire_prob) {
  if (hire_prob >= 1.0) return HiringPosture::kAggressive;
  if (hire_prob <= 0.0) return HiringPosture::kConservative;
  return HiringPosture::kMixed;
}

Equilibrium Make(EquilibriumKind kind, double qualify, double hire,
                 double potential, const MarketParams& m) {
  Equilibrium eq{kind, {qualify, hire}, PostureFor(hire),
                 PosteriorGivenGarbled(qualify, potential, m)};
  if (kind == EquilibriumKind::kMixed) eq.posture = HiringPosture::kMixed;
  return eq;
}

int Rank(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::kFullQualification: return 0;
    case EquilibriumKind::kMixed: return 1;
    case EquilibriumKind::kZeroQualification: return 2;
  }
  return 3;
}

}  // namespace

std::string_view ToString(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::kFullQualification: return "FQE";
    case EquilibriumKind::kMixed: return "MSE";
    case EquilibriumKind::kZeroQualification: return "ZQE";
  }
  return "?";
}

std::string_view ToString(HiringPosture posture) {
  switch (posture) {
    case HiringPosture::kAggressive: return "aggressive";
    case HiringPosture::kConservative: return "conservative";
    case HiringPosture::kMixed: return "mixed";
  }
  return "?";
}

std::string Label(const Equilibrium& eq) {
  if (eq.kind != EquilibriumKind::kFullQualification) {
    return std::string(ToString(eq.kind));
  }
  return "FQE-" + std::string(ToString(eq.posture));
}

double QualificationGain(const MarketParams& m, double hire_prob) {
  const double decisive = hire_prob * m.reveal_unqualified +
                          (1.0 - hire_prob) * m.reveal_qualified;
  return m.wage * decisive - m.cost_low;
}

std::optional<StrategyProfile> MixedProfile(const MarketParams& m,
                                            double potential) {
  const double spread = m.reveal_qualified - m.reveal_unqualified;
  if (spread == 0.0) return std::nullopt;
  const double hire =
      (m.wage * m.reveal_qualified - m.cost_low) / (m.wage * spread);
  const double qualify = HiringThreshold(m) / potential;
  if (!(hire > 0.0 && hire < 1.0 && qualify > 0.0 && qualify < 1.0)) {
    return std::nullopt;
  }
  return StrategyProfile{qualify, hire};
}

std::vector<Equilibrium> EnumerateEquilibria(const MarketParams& m,
                                             double potential, double eps) {
  const double threshold = HiringThreshold(m);
  // Low-cost worker best response to a pure hiring rule on garbled results.
  const bool qualifies_if_conservative = QualifiedRevealEnough(m, eps);
  const bool qualifies_if_aggressive = UnqualifiedRevealEnough(m, eps);
  // Employer best response given the mass of qualified applicants p * chi.
  auto hires_garbled = [&](double qualified_mass) {
    return AtLeast(qualified_mass, threshold, eps);
  };

  std::vector<Equilibrium> out;

  // chi = 1: the employer's response is pinned by p against the threshold;
  // the profile survives if low-cost workers still want to qualify.
  const bool aggressive = hires_garbled(potential);
  if (aggressive ? qualifies_if_aggressive : qualifies_if_conservative) {
    out.push_back(Make(EquilibriumKind::kFullQualification, 1.0,
                       aggressive ? 1.0 : 0.0, potential, m));
  }

  // Interior mixing needs a hiring rate that leaves the worker indifferent
  // (the best response flips between the two pure rules) and enough
  // potential for some chi <= 1 to leave the employer indifferent.
  if (qualifies_if_conservative != qualifies_if_aggressive &&
      hires_garbled(potential)) {
    const double spread = m.reveal_qualified - m.reveal_unqualified;
    const double hire = std::clamp(
        (m.wage * m.reveal_qualified - m.cost_low) / (m.wage * spread), 0.0,
        1.0);
    const double qualify = std::min(threshold / potential, 1.0);
    out.push_back(Make(EquilibriumKind::kMixed, qualify, hire, potential, m));
  }

  // chi = 0: a garbled result then comes from an unqualified worker for
  // sure, so rejecting it is strict for any phi0 < 1 and no tie applies.
  // Needs qualifying to be unprofitable under conservative hiring.
  if (!qualifies_if_conservative) {
    out.push_back(
        Make(EquilibriumKind::kZeroQualification, 0.0, 0.0, potential, m));
  }
  return out;
}

PayoffTable EquilibriumPayoffs(const Equilibrium& eq, const MarketParams& m,
                               double p) {
  const double w = m.wage;
  const double surplus = m.benefit - w;
  const double phi0 = m.reveal_unqualified;
  const double phi1 = m.reveal_qualified;
  PayoffTable t;
  switch (eq.kind) {
    case EquilibriumKind::kMixed:
      t.worker_low = (1.0 - phi0) * (phi1 * w - m.cost_low) / (phi1 - phi0);
      t.worker_high = t.worker_low;
      t.employer = surplus * phi1 * HiringThreshold(m);
      break;
    case EquilibriumKind::kFullQualification:
      if (eq.posture == HiringPosture::kAggressive) {
        t.worker_low = w - m.cost_low;
        t.worker_high = w * (1.0 - phi0);
        t.employer = p * surplus - (1.0 - p) * w * (1.0 - phi0);
      } else {
        t.worker_low = phi1 * w - m.cost_low;
        t.worker_high = 0.0;
        t.employer = p * phi1 * surplus;
      }
      break;
    case EquilibriumKind::kZeroQualification:
      break;
  }
  t.worker_exante = p * t.worker_low + (1.0 - p) * t.worker_high;
  return t;
}

PayoffTable ExpectedPayoffs(const StrategyProfile& s, const MarketParams& m,
                            double p) {
  const double w = m.wage;
  const double chi = s.qualify_prob;
  const double eta = s.hire_prob;
  const double phi0 = m.reveal_unqualified;
  const double phi1 = m.reveal_qualified;
  const double hired_if_qualified = phi1 + (1.0 - phi1) * eta;
  const double hired_if_unqualified = (1.0 - phi0) * eta;

  PayoffTable t;
  const double unqualified = w * hired_if_unqualified;
  t.worker_low =
      chi * (w * hired_if_qualified - m.cost_low) + (1.0 - chi) * unqualified;
  t.worker_high = unqualified;
  t.worker_exante = p * t.worker_low + (1.0 - p) * t.worker_high;
  const double qualified_mass = p * chi;
  t.employer = qualified_mass * hired_if_qualified * (m.benefit - w) -
               (1.0 - qualified_mass) * hired_if_unqualified * w;
  return t;
}

std::size_t ParetoSelect(std::span<const Equilibrium> equilibria,
                         std::span<const PayoffTable> payoffs, double eps) {
  if (equilibria.empty() || equilibria.size() != payoffs.size()) {
    throw InconsistencyError("ParetoSelect: empty or mismatched input");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < equilibria.size(); ++i) {
    if (Rank(equilibria[i].kind) < Rank(equilibria[best].kind)) best = i;
  }
  const PayoffTable& top = payoffs[best];
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (i == best) continue;
    const PayoffTable& o = payoffs[i];
    const bool weakly = top.worker_low >= o.worker_low - eps &&
                        top.worker_high >= o.worker_high - eps &&
                        top.employer >= o.employer - eps;
    if (!weakly) {
      throw InconsistencyError("Pareto ranking violated: " +
                               Label(equilibria[best]) +
                               " does not dominate " + Label(equilibria[i]));
    }
  }
  return best;
}

SingleGroupSolution SolveSingleGroup(const MarketParams& m, double potential,
                                     double eps) {
  SingleGroupSolution s;
  s.equilibria = EnumerateEquilibria(m, potential, eps);
  s.payoffs.reserve(s.equilibria.size());
  for (const Equilibrium& eq : s.equilibria) {
    s.payoffs.push_back(EquilibriumPayoffs(eq, m, potential));
  }
  s.selected = ParetoSelect(s.equilibria, s.payoffs, eps);
  return s;
}

}  // namespace btb
