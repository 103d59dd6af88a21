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

#include "cournot/first_stage.hpp"
#include "cournot/oracle.hpp"

using namespace cournot;
using Catch::Matchers::WithinAbs;

namespace {

const double kDelta = 0.5 * (std::sqrt(3.0) + 3.0);

double grid_payoff(double alpha, const MarketParams& p) {
  oracle::OracleConfig cfg;
  cfg.grid_points = 10000;
  return oracle::grid_argmax_margin([&](double r) { return supplier_payoff_on_path(r, alpha, p); }, 0.0,
                                    std::max(alpha, 1.0), cfg)
      .payoff_best;
}

}  // namespace

TEST_CASE("symmetric margin", "[first_stage]") {
  auto s = optimal_margin_symmetric(10, 1, 1);
  CHECK_THAT(s.r_star, WithinAbs(3.0, 1e-15));
  CHECK_THAT(s.w_star, WithinAbs(4.0, 1e-15));
  CHECK_THAT(s.payoff, WithinAbs(6.0, 1e-12));
  CHECK(s.regime == MarginRegime::symmetric);
  s = optimal_margin_symmetric(3.5, 1, 1);
  CHECK(s.r_star == 0.0);
  CHECK(s.payoff == 0.0);
  CHECK(s.any_margin);
  CHECK(s.regime == MarginRegime::indifferent);
  CHECK_THAT(optimal_margin_symmetric(7, 0, 0).r_star, WithinAbs(3.5, 1e-15));
}

TEST_CASE("n-retailer margin", "[first_stage]") {
  CHECK_THAT(optimal_margin_n(9, 0.5, 1, 4).r_star, WithinAbs(2.75, 1e-15));
  CHECK(optimal_margin_n(3.5, 0.5, 1, 4).r_star == 0.0);
  const MarketParams p{0.5, 0.5, 1, 4};
  CHECK_THAT(optimal_margin(9, p).payoff, WithinAbs(grid_payoff(9, p), 1e-6));
}

TEST_CASE("payoff on path", "[first_stage]") {
  const MarketParams p{1, 1, 1, 2};
  CHECK(supplier_payoff_on_path(0, 10, p) == 0.0);
  CHECK_THAT(supplier_payoff_on_path(3, 10, p), WithinAbs(6.0, 1e-12));
  CHECK(supplier_payoff_on_path(6, 10, p) == 0.0);
  CHECK(supplier_payoff_on_path(7, 10, p) == 0.0);
}

TEST_CASE("general margin, case A", "[first_stage]") {
  const MarketParams p{2, 1, 0.5, 2};
  auto s = optimal_margin_general(10, p);
  CHECK(s.regime == MarginRegime::r11);
  CHECK_THAT(s.r_star, WithinAbs(2.5, 1e-14));
  s = optimal_margin_general(6, p);
  CHECK(s.regime == MarginRegime::r21);
  CHECK_THAT(s.r_star, WithinAbs(0.75, 1e-14));
  s = optimal_margin_general(4.5, p);
  CHECK(s.regime == MarginRegime::r31);
  CHECK_THAT(s.r_star, WithinAbs(0.125, 1e-14));
  CHECK(optimal_margin_general(3.9, p).regime == MarginRegime::indifferent);
  CHECK(s.diagnostics.at("case") == 0.0);
  CHECK_THAT(s.diagnostics.at("threshold_indifferent"), WithinAbs(4.0, 1e-14));
  CHECK_THAT(s.diagnostics.at("threshold_r21"), WithinAbs(3 + kDelta - (std::sqrt(3.0) - 1) / 4, 1e-12));
  CHECK_THAT(s.diagnostics.at("threshold_r11"), WithinAbs(3.5 + 2 * kDelta, 1e-12));
  CHECK_THAT(s.diagnostics.at("threshold_r21"), WithinAbs(5.183, 5e-4));
  CHECK_THAT(s.diagnostics.at("threshold_r11"), WithinAbs(8.232, 5e-4));
}

TEST_CASE("general margin, case B", "[first_stage]") {
  const MarketParams p{2, 1.5, 1, 2};
  CHECK(optimal_margin_general(5.9, p).regime == MarginRegime::indifferent);
  CHECK(optimal_margin_general(6.5, p).regime == MarginRegime::r21);
  CHECK(optimal_margin_general(20, p).regime == MarginRegime::r11);
  CHECK(optimal_margin_general(6.5, p).diagnostics.at("case") == 1.0);
}

TEST_CASE("identical capacities reduce to the symmetric formula", "[first_stage]") {
  const MarketParams p{1, 1, 0.5, 2};
  for (double alpha = 0; alpha <= 12; alpha += 0.125) {
    const auto g = optimal_margin_general(alpha, p);
    const auto s = optimal_margin_symmetric(alpha, 1, 0.5);
    CHECK_THAT(g.payoff, WithinAbs(s.payoff, 1e-12));
    CHECK_THAT(g.r_star, WithinAbs(s.r_star, 1e-12));
  }
}

TEST_CASE("closed form matches the grid oracle", "[first_stage][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 150; ++k) {
    const double T2 = 2 * U(rng), T1 = T2 + 2 * U(rng), c = 1.5 * U(rng), alpha = 14 * U(rng);
    const MarketParams p{T1, T2, c, 2};
    const auto s = optimal_margin_general(alpha, p);
    INFO("alpha=" << alpha << " T1=" << T1 << " T2=" << T2 << " c=" << c);
    CHECK_THAT(s.payoff, WithinAbs(grid_payoff(alpha, p), 1e-6));
    CHECK_THAT(s.payoff, WithinAbs(supplier_payoff_on_path(s.r_star, alpha, p), 1e-12));
  }
}

TEST_CASE("payoff is non-decreasing in alpha", "[first_stage][property]") {
  const MarketParams p{2, 1, 0.5, 2};
  double prev = 0.0;
  for (double alpha = 0; alpha <= 12; alpha += 0.01) {
    const double u = optimal_margin_general(alpha, p).payoff;
    CHECK(u >= prev - 1e-12);
    prev = u;
  }
}
