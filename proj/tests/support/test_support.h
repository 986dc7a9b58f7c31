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

#ifndef BTB_TESTS_SUPPORT_TEST_SUPPORT_H_
#define BTB_TESTS_SUPPORT_TEST_SUPPORT_H_

// Shared test helpers: random parameter generators and reference formulas
// written directly from the model definitions, independent of the library's
// closed forms.

#include <random>
#include <set>
#include <string>

#include "btb/model.h"

namespace btb::testing {

class ParamGen {
 public:
  explicit ParamGen(std::uint64_t seed) : gen_(seed) {}

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  // A valid market with every probability in [0.02, 0.98].
  MarketParams Market() {
    MarketParams m;
    m.wage = Uniform(0.5, 2.0);
    m.benefit = m.wage * Uniform(1.05, 4.0);
    m.cost_low = m.wage * Uniform(0.02, 0.98);
    m.cost_high = m.wage * Uniform(1.02, 3.0);
    m.reveal_unqualified = Uniform(0.02, 0.98);
    m.reveal_qualified = Uniform(0.02, 0.98);
    return m;
  }

  double Probability() { return Uniform(0.02, 0.98); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Reference values computed from first principles.
namespace ref {

// Employer indifference on a garbled result with full qualification:
// solve p(1-phi1)(B-w) = (1-p)(1-phi0)w for p.
inline double Threshold(const MarketParams& m) {
  const double gain = (1.0 - m.reveal_qualified) * (m.benefit - m.wage);
  const double loss = (1.0 - m.reveal_unqualified) * m.wage;
  return loss / (gain + loss);
}

inline double Posterior(double chi, double p, const MarketParams& m) {
  const double q = p * chi * (1.0 - m.reveal_qualified);
  const double u = (1.0 - p * chi) * (1.0 - m.reveal_unqualified);
  return q / (q + u);
}

// The equilibrium table of the single-group game, keyed on whether each
// reveal probability clears c_L/w and whether p clears the threshold.
// Boundaries count as clearing (ties resolve toward qualifying and hiring).
inline std::set<std::string> ExpectedLabels(const MarketParams& m, double p,
                                            double eps) {
  const double ratio = m.cost_low / m.wage;
  const bool hi0 = m.reveal_unqualified >= ratio - eps;
  const bool hi1 = m.reveal_qualified >= ratio - eps;
  const bool p_high = p >= Threshold(m) - eps;
  if (p_high) {
    if (hi0 && hi1) return {"FQE-aggressive"};
    if (hi0) return {"FQE-aggressive", "MSE", "ZQE"};
    if (hi1) return {"MSE"};
    return {"ZQE"};
  }
  if (hi1) return {"FQE-conservative"};
  return {"ZQE"};
}

}  // namespace ref
}  // namespace btb::testing

#endif  // BTB_TESTS_SUPPORT_TEST_SUPPORT_H_
