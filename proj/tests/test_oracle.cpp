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
#include <random>

#include <catch_amalgamated.hpp>

#include "cournot/bayes.hpp"
#include "cournot/first_stage.hpp"
#include "cournot/oracle.hpp"

using namespace cournot;
using Catch::Matchers::WithinAbs;

TEST_CASE("nash check", "[oracle]") {
  const MarketParams p{1, 1, 0, 2};
  auto o = equilibrium_general(9, 1, p);
  CHECK(o.regime == Regime::G11);
  CHECK(oracle::verify_nash(9, 1, p, o).ok);
  o.r1.q += 0.1;
  const auto bad = oracle::verify_nash(9, 1, p, o);
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_gain > 0.0);
  // Retailer 1 recovers (0.1)^2 by undoing its own perturbation.
  CHECK_THAT(bad.max_gain, WithinAbs(0.01, 1e-5));
  CHECK(bad.retailer == 1);
  CHECK(oracle::verify_nash(0, 1, p, equilibrium_general(0, 1, p)).ok);
}

TEST_CASE("grid argmax", "[oracle]") {
  const double K = 3.7;
  auto best = oracle::grid_argmax_margin([&](double r) { return r * (K - r); }, 0, K);
  CHECK_THAT(best.r_best, WithinAbs(K / 2, 1e-6));
  const MarketParams p{1, 1, 1, 2};
  best = oracle::grid_argmax_margin([&](double r) { return supplier_payoff_on_path(r, 10, p); }, 0, 10);
  CHECK_THAT(best.r_best, WithinAbs(3.0, 1e-6));
  const BayesProblem u{Uniform{1, 2}, 0, 0, 2};
  best = oracle::grid_argmax_margin([&](double r) { return expected_payoff(u, r); }, 0, 2);
  CHECK_THAT(best.r_best, WithinAbs(0.75, 1e-4));
}

TEST_CASE("monte carlo payoff", "[oracle]") {
  oracle::OracleConfig cfg;
  cfg.mc_samples = 200000;
  auto mc = oracle::mc_expected_payoff(Exponential{1}, 0, 0, 2, 0.0, cfg);
  CHECK(mc.estimate == 0.0);
  CHECK(mc.std_error == 0.0);
  mc = oracle::mc_expected_payoff(Exponential{1}, 0, 0, 2, 1.0, cfg);
  CHECK(std::abs(mc.estimate - 2.0 / 3.0 * std::exp(-1.0)) <= 3 * mc.std_error);
  mc = oracle::mc_expected_payoff(Uniform{0, 1}, 0, 0, 2, 1.0, cfg);
  CHECK(mc.estimate == 0.0);
}

TEST_CASE("monte carlo is reproducible", "[oracle]") {
  oracle::OracleConfig cfg;
  cfg.mc_samples = 5000;
  cfg.seed = 42;
  const auto a = oracle::mc_expected_payoff(BetaOneLambda{3}, 0, 0, 2, 0.2, cfg);
  const auto b = oracle::mc_expected_payoff(BetaOneLambda{3}, 0, 0, 2, 0.2, cfg);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  cfg.seed = 43;
  CHECK(oracle::mc_expected_payoff(BetaOneLambda{3}, 0, 0, 2, 0.2, cfg).estimate != a.estimate);
}

TEST_CASE("monte carlo agrees with the analytic payoff", "[oracle][property]") {
  const DemandBelief beliefs[] = {Uniform{0, 4}, Exponential{0.5}, BetaOneLambda{2}, Pareto{1, 3},
                                  TwoIntervalUniform{0, 1, 2, 4}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  oracle::OracleConfig cfg;
  cfg.mc_samples = 100000;
  int seed = 0;
  for (const auto& b : beliefs) {
    for (int k = 0; k < 50; ++k) {
      const double T = 0.2 * U(rng), c = 0.2 * U(rng), r = b.quantile(0.6) * U(rng);
      cfg.seed = static_cast<std::uint64_t>(seed++);
      const auto mc = oracle::mc_expected_payoff(b, T, c, 2, r, cfg);
      const double exact = expected_payoff({b, T, c, 2}, r);
      INFO(to_string(b.kind()) << " T=" << T << " c=" << c << " r=" << r);
      CHECK(std::abs(mc.estimate - exact) <= 4 * mc.std_error + 1e-12);
    }
  }
}

TEST_CASE("counter uniform stays inside (0, 1)", "[oracle]") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = oracle::counter_uniform(9, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
