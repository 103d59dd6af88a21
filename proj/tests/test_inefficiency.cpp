// Copyright 2026 The cournot-supply Authors
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

#include <cmath>

#include <catch_amalgamated.hpp>

#include "cournot/inefficiency.hpp"

using namespace cournot;
using Catch::Matchers::WithinAbs;

namespace {

InefficiencyReport report(const BayesProblem& p) { return inefficiency(p, solve_equilibrium(p)); }

}  // namespace

TEST_CASE("exponential attains the bound", "[inefficiency]") {
  for (double lambda : {0.5, 1.0, 4.0}) {
    const BayesProblem p{Exponential{lambda}, 1, 2, 2};
    const auto sol = solve_equilibrium(p);
    const auto rep = inefficiency(p, sol);
    REQUIRE(rep.p_conditional);
    CHECK_THAT(*rep.p_conditional, WithinAbs(kInefficiencyBound, 1e-9));
    CHECK_THAT(mrl_form_conditional(p, sol), WithinAbs(kInefficiencyBound, 1e-9));
    CHECK(bound_check(rep, true));
  }
}

TEST_CASE("uniform examples", "[inefficiency]") {
  auto rep = report({Uniform{1, 2}, 0, 0, 2});
  CHECK(rep.p_joint == 0.0);
  CHECK(*rep.p_conditional == 0.0);
  CHECK(bound_check(rep, true));

  const BayesProblem p{Uniform{0, 1}, 0, 0, 2};
  const auto sol = solve_equilibrium(p);
  rep = inefficiency(p, sol);
  CHECK_THAT(*rep.p_conditional, WithinAbs(1.0 / 3.0, 1e-12));
  CHECK_THAT(rep.p_joint, WithinAbs(1.0 / 3.0, 1e-12));
  CHECK_THAT(mrl_form_conditional(p, sol), WithinAbs(1.0 / 3.0, 1e-9));
  CHECK_THAT(rep.bound_slack, WithinAbs(kInefficiencyBound - 1.0 / 3.0, 1e-12));
}

TEST_CASE("beta family approaches the bound from below", "[inefficiency]") {
  for (double lambda : {1.0, 3.0, 10.0, 50.0}) {
    const BayesProblem p{BetaOneLambda{lambda}, 0, 0, 2};
    const auto sol = solve_equilibrium(p);
    const auto rep = inefficiency(p, sol);
    const double expected = 1.0 - std::pow(1.0 - 1.0 / (lambda + 2.0), lambda);
    CHECK_THAT(*rep.p_conditional, WithinAbs(expected, 1e-9));
    CHECK_THAT(mrl_form_conditional(p, sol), WithinAbs(expected, 1e-8));
    CHECK(*rep.p_conditional < kInefficiencyBound);
  }
  CHECK_THAT(*report({BetaOneLambda{1}, 0, 0, 2}).p_conditional, WithinAbs(1.0 / 3.0, 1e-12));
  // 1 - (51/52)^50 sits 0.0108609... below the bound.
  CHECK_THAT(kInefficiencyBound - *report({BetaOneLambda{50}, 0, 0, 2}).p_conditional,
             WithinAbs(0.0108609497991447, 1e-9));
}

TEST_CASE("far upper tail keeps full precision", "[inefficiency]") {
  const auto rep = report({Exponential{4}, 1, 2, 2});
  CHECK_THAT(*rep.p_conditional, WithinAbs(kInefficiencyBound, 1e-12));
}

TEST_CASE("no loss when demand spread is small", "[inefficiency]") {
  const auto rep = report({Uniform{5, 6}, 0, 1, 2});
  CHECK(rep.p_joint == 0.0);
  CHECK(*rep.p_conditional == 0.0);
}

TEST_CASE("zero margin gives an empty integral", "[inefficiency]") {
  const BayesProblem p{Uniform{0, 1}, 0, 0, 2};
  FixedPointResult zero;
  zero.r_star = 0.0;
  CHECK(mrl_form_conditional(p, zero) == 0.0);
}

TEST_CASE("cdf and mrl forms agree", "[inefficiency][property]") {
  const DemandBelief beliefs[] = {Uniform{0.2, 2}, BetaOneLambda{0.7}, Exponential{3},
                                  PiecewiseLinearCdf({{0, 0}, {1, 0.6}, {3, 1}})};
  for (const auto& b : beliefs) {
    for (double c : {0.0, 0.1}) {
      const BayesProblem p{b, 0.05, c, 3};
      const auto sol = solve_equilibrium(p);
      const auto rep = inefficiency(p, sol);
      CHECK_THAT(mrl_form_conditional(p, sol), WithinAbs(*rep.p_conditional, 1e-8));
      CHECK(bound_check(rep, sol.dmrl));
    }
  }
}

TEST_CASE("bound check ignores non-DMRL beliefs", "[inefficiency]") {
  InefficiencyReport rep;
  rep.p_conditional = 0.9;
  CHECK(bound_check(rep, false));
  CHECK_FALSE(bound_check(rep, true));
}
