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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <random>

namespace btb {
namespace {

// Expected stage payoff of a worker with the given cost who picks q, when
// the employer hires with probability hire[theta - 1] after each result.
double WorkerValue(bool qualified, double cost, const std::array<double, 3>& hire,
                   const MarketParams& m) {
  const SignalDistribution dist = SignalDistributionFor(qualified, m);
  double v = 0.0;
  for (int k = 0; k < 3; ++k) {
    v += dist[k] * (hire[k] * StagePayoff(qualified, true, cost, m).worker +
                    (1.0 - hire[k]) * StagePayoff(qualified, false, cost, m).worker);
  }
  return v;
}

double BayesGarbled(double qualify_prob, double potential,
                    const MarketParams& m) {
  const double mass = potential * qualify_prob;
  const double joint_q = mass * SignalDistributionFor(true, m)[1];
  const double joint_u = (1.0 - mass) * SignalDistributionFor(false, m)[1];
  if (joint_q == 0.0) return 0.0;
  return joint_q / (joint_q + joint_u);
}

// Employer's expected payoff from hiring on a garbled result under belief mu.
double HireValue(double mu, const MarketParams& m) {
  return mu * StagePayoff(true, true, 0.0, m).employer +
         (1.0 - mu) * StagePayoff(false, true, 0.0, m).employer;
}

double LowCostGain(double hire_prob, const MarketParams& m) {
  const std::array<double, 3> hire{0.0, hire_prob, 1.0};
  return WorkerValue(true, m.cost_low, hire, m) -
         WorkerValue(false, m.cost_low, hire, m);
}

// Which pure actions are best responses somewhere on an interval of the
// opponent's strategy, given the payoff gain of action 1 at its two ends.
struct ResponseSet {
  bool zero;
  bool one;
};

ResponseSet ResponsesOver(double gain_a, double gain_b, double tol) {
  const double lo = std::min(gain_a, gain_b);
  const double hi = std::max(gain_a, gain_b);
  return {lo <= tol, hi >= -tol};
}

// A box [index - 1/2, index + 1/2] on the grid meets the best-response set
// when the set contains an endpoint lying in the box, or when both pure
// actions are best responses (the gain crosses zero and every mix is one).
bool BoxMeets(const ResponseSet& r, int index, int grid_n) {
  if (r.zero && r.one) return true;
  if (r.one && index == grid_n - 1) return true;
  if (r.zero && index == 0) return true;
  return false;
}

class Welford {
 public:
  void Add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  MonteCarloEstimate Finish(std::uint64_t seed) const {
    MonteCarloEstimate e;
    e.n = n_;
    e.seed = seed;
    e.mean = mean_;
    if (n_ > 1) {
      const double var = m2_ / static_cast<double>(n_ - 1);
      e.std_error = std::sqrt(var / static_cast<double>(n_));
    }
    return e;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DeviationReport CheckEquilibrium(const StrategyProfile& s,
                                 const MarketParams& m, double potential,
                                 double tol, std::optional<Belief> belief) {
  DeviationReport r;
  const std::array<double, 3> hire{0.0, s.hire_prob, 1.0};

  const double low_q = WorkerValue(true, m.cost_low, hire, m);
  const double low_u = WorkerValue(false, m.cost_low, hire, m);
  const double low_now = s.qualify_prob * low_q + (1.0 - s.qualify_prob) * low_u;
  const double high_q = WorkerValue(true, m.cost_high, hire, m);
  const double high_u = WorkerValue(false, m.cost_high, hire, m);
  r.worker_gain = std::max({0.0, std::max(low_q, low_u) - low_now,
                            high_q - high_u});

  const double bayes = BayesGarbled(s.qualify_prob, potential, m);
  const double mu = belief ? belief->prob_qualified
                           : PosteriorGivenGarbled(s.qualify_prob, potential, m)
                                 .prob_qualified;
  r.belief_error = std::abs(mu - bayes);

  const double v = HireValue(mu, m);
  r.employer_gain = std::max(0.0, std::max(v, 0.0) - s.hire_prob * v);

  r.passed = r.worker_gain <= tol && r.employer_gain <= tol &&
             r.belief_error <= tol;
  return r;
}

std::vector<GridCluster> GridSearchEquilibria(const MarketParams& m,
                                              double potential, int grid_n,
                                              double tol) {
  const double step = 1.0 / static_cast<double>(grid_n - 1);
  auto box = [&](int i) {
    const double c = i * step;
    return std::pair{std::max(0.0, c - 0.5 * step),
                     std::min(1.0, c + 0.5 * step)};
  };

  // Worker responses depend only on the hire-rate row, employer responses
  // only on the qualify-rate column.
  std::vector<ResponseSet> worker(grid_n), employer(grid_n);
  for (int k = 0; k < grid_n; ++k) {
    const auto [lo, hi] = box(k);
    worker[k] = ResponsesOver(LowCostGain(lo, m), LowCostGain(hi, m), tol);
    employer[k] = ResponsesOver(HireValue(BayesGarbled(lo, potential, m), m),
                                HireValue(BayesGarbled(hi, potential, m), m),
                                tol);
  }

  std::vector<char> pass(static_cast<std::size_t>(grid_n) * grid_n, 0);
  auto at = [&](int i, int j) -> char& {
    return pass[static_cast<std::size_t>(j) * grid_n + i];
  };
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      at(i, j) = BoxMeets(worker[j], i, grid_n) && BoxMeets(employer[i], j, grid_n);
    }
  }

  std::vector<GridCluster> clusters;
  std::vector<char> seen(pass.size(), 0);
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * grid_n + i;
      if (!pass[idx] || seen[idx]) continue;
      GridCluster c;
      std::deque<std::pair<int, int>> queue{{i, j}};
      seen[idx] = 1;
      double sum_q = 0.0, sum_h = 0.0;
      while (!queue.empty()) {
        const auto [ci, cj] = queue.front();
        queue.pop_front();
        c.cells.push_back({ci * step, cj * step});
        sum_q += ci * step;
        sum_h += cj * step;
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const int ni = ci + di, nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= grid_n || nj >= grid_n) continue;
            const std::size_t nidx = static_cast<std::size_t>(nj) * grid_n + ni;
            if (pass[nidx] && !seen[nidx]) {
              seen[nidx] = 1;
              queue.emplace_back(ni, nj);
            }
          }
        }
      }
      const double count = static_cast<double>(c.cells.size());
      c.centroid = {sum_q / count, sum_h / count};
      clusters.push_back(std::move(c));
    }
  }
  return clusters;
}

double GridDistance(const GridCluster& cluster, const StrategyProfile& s,
                    int grid_n) {
  const double steps = static_cast<double>(grid_n - 1);
  double best = std::numeric_limits<double>::infinity();
  for (const StrategyProfile& cell : cluster.cells) {
    const double d = std::max(std::abs(cell.qualify_prob - s.qualify_prob),
                              std::abs(cell.hire_prob - s.hire_prob));
    best = std::min(best, d * steps);
  }
  return best;
}

SimulatedPayoffs SimulatePayoffs(const StrategyProfile& s,
                                 const MarketParams& m, double potential,
                                 std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 gen(MixSeed(seed, 0));
  // 53-bit uniform on [0, 1); independent of the library's distributions so
  // streams are identical across standard library implementations.
  auto uniform = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };

  Welford worker, low, high, employer;
  for (std::uint64_t k = 0; k < n; ++k) {
    // Four draws per sample regardless of the branch taken, so two profiles
    // simulated from the same seed share their randomness sample by sample.
    const double u_cost = uniform();
    const double u_qualify = uniform();
    const double u_test = uniform();
    const double u_hire = uniform();

    const bool low_cost = u_cost < potential;
    const bool qualified = low_cost && u_qualify < s.qualify_prob;
    int theta = 2;
    if (qualified) {
      if (u_test < m.reveal_qualified) theta = 3;
    } else if (u_test < m.reveal_unqualified) {
      theta = 1;
    }
    const bool hired = theta == 3 || (theta == 2 && u_hire < s.hire_prob);
    const StagePayoffs pay = StagePayoff(
        qualified, hired, low_cost ? m.cost_low : m.cost_high, m);

    worker.Add(pay.worker);
    (low_cost ? low : high).Add(pay.worker);
    employer.Add(pay.employer);
  }
  return {worker.Finish(seed), low.Finish(seed), high.Finish(seed),
          employer.Finish(seed)};
}

ComparisonCheck VerifyComparison(const BtbComparison& cmp,
                                 const MarketParams& m,
                                 const PopulationParams& pop, std::uint64_t n,
                                 std::uint64_t seed, double tol, double z) {
  ComparisonCheck out;
  auto fail = [&](std::string what) {
    out.passed = false;
    out.failures.push_back(std::move(what));
  };
  auto agree = [&](const std::string& what, double simulated, double se,
                   double exact) {
    if (std::abs(simulated - exact) > z * se + tol) {
      fail(what + ": simulated " + Num(simulated) + " vs closed form " +
           Num(exact) + " (se " + Num(se) + ")");
      return;
    }
    const bool significant = std::abs(simulated) > z * se + tol;
    if (significant && std::abs(exact) > tol &&
        std::signbit(simulated) != std::signbit(exact)) {
      fail(what + ": sign disagrees");
    }
  };

  struct Sims {
    SimulatedPayoffs box, banned;
  };
  Sims sims[2];
  const MarketSolution* regimes[2] = {&cmp.with_box, &cmp.banned};
  const double potentials[2] = {pop.potential1, pop.potential2};
  for (int g = 0; g < 2; ++g) {
    const std::uint64_t group_seed = MixSeed(seed, static_cast<std::uint64_t>(g + 1));
    const GroupOutcome& box_out = g == 0 ? cmp.with_box.group1 : cmp.with_box.group2;
    const GroupOutcome& ban_out = g == 0 ? cmp.banned.group1 : cmp.banned.group2;
    sims[g].box = SimulatePayoffs(box_out.equilibrium.profile, m, potentials[g], n, group_seed);
    sims[g].banned = SimulatePayoffs(ban_out.equilibrium.profile, m, potentials[g], n, group_seed);
  }

  // Levels, per regime and actor.
  for (int r = 0; r < 2; ++r) {
    const std::string regime(ToString(regimes[r]->regime));
    for (int g = 0; g < 2; ++g) {
      const SimulatedPayoffs& sim = r == 0 ? sims[g].box : sims[g].banned;
      const PayoffTable& t =
          g == 0 ? regimes[r]->group1.payoffs : regimes[r]->group2.payoffs;
      const std::string who = "group" + std::to_string(g + 1);
      agree(regime + " " + who + " worker_low", sim.worker_low.mean,
            sim.worker_low.std_error, t.worker_low);
      agree(regime + " " + who + " worker_high", sim.worker_high.mean,
            sim.worker_high.std_error, t.worker_high);
      agree(regime + " " + who + " worker_exante", sim.worker.mean,
            sim.worker.std_error, t.worker_exante);
      agree(regime + " employer from " + who, sim.employer.mean,
            sim.employer.std_error, t.employer);
    }
  }

  // Deltas, banned minus with box.
  auto diff = [](const MonteCarloEstimate& banned, const MonteCarloEstimate& box) {
    return std::pair{banned.mean - box.mean,
                     std::hypot(banned.std_error, box.std_error)};
  };
  const WelfareDeltas& d = cmp.deltas;
  const double exact[2][3] = {{d.group1_low, d.group1_high, d.group1_exante},
                              {d.group2_low, d.group2_high, d.group2_exante}};
  for (int g = 0; g < 2; ++g) {
    const std::string who = "group" + std::to_string(g + 1);
    const auto [dl, sl] = diff(sims[g].banned.worker_low, sims[g].box.worker_low);
    const auto [dh, sh] = diff(sims[g].banned.worker_high, sims[g].box.worker_high);
    const auto [de, se] = diff(sims[g].banned.worker, sims[g].box.worker);
    agree("delta " + who + " worker_low", dl, sl, exact[g][0]);
    agree("delta " + who + " worker_high", dh, sh, exact[g][1]);
    agree("delta " + who + " worker_exante", de, se, exact[g][2]);
  }
  const double gamma = pop.share_group1;
  const auto [e1, s1] = diff(sims[0].banned.employer, sims[0].box.employer);
  const auto [e2, s2] = diff(sims[1].banned.employer, sims[1].box.employer);
  agree("delta employer", gamma * e1 + (1.0 - gamma) * e2,
        std::hypot(gamma * s1, (1.0 - gamma) * s2), d.employer);

  const bool degenerate = gamma <= tol || gamma >= 1.0 - tol;
  for (const std::string& v :
       ScenarioSignViolations(cmp.scenario, d, tol * (1.0 + m.benefit + m.wage),
                              degenerate)) {
    fail("scenario " + std::string(ToString(cmp.scenario)) + ": " + v);
  }
  return out;
}

}  // namespace btb
