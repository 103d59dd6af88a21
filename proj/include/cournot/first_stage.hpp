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

// Supplier (first-stage) optimum when alpha is known: the subgame-perfect
// margin r*(alpha) in closed form.

#ifndef COURNOT_FIRST_STAGE_HPP
#define COURNOT_FIRST_STAGE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "cournot/second_stage.hpp"

namespace cournot {

enum class MarginRegime { indifferent, r31, r21, r11, symmetric };

inline const char* to_string(MarginRegime r) noexcept {
  switch (r) {
    case MarginRegime::indifferent: return "indifferent";
    case MarginRegime::r31: return "r31";
    case MarginRegime::r21: return "r21";
    case MarginRegime::r11: return "r11";
    case MarginRegime::symmetric: return "symmetric";
  }
  return "unknown";
}

struct SupplierSolution {
  /// Canonical representative 0 when the supplier is indifferent.
  double r_star = 0.0;
  double w_star = 0.0;
  MarginRegime regime = MarginRegime::indifferent;
  double payoff = 0.0;
  /// Every margin is optimal (payoff identically zero).
  bool any_margin = true;
  std::map<std::string, double> diagnostics;
};

/// r times the equilibrium order placed by the retailers at w = r + c.
inline double supplier_payoff_on_path(double r, double alpha, const MarketParams& p) {
  if (r < 0.0) throw std::domain_error("supplier_payoff_on_path: margin must be non-negative");
  return r * total_order(alpha, r + p.c, p);
}

namespace detail {

inline SupplierSolution make_solution(double r, MarginRegime regime, double payoff, double c) {
  SupplierSolution s;
  if (!(r > 0.0) || !(payoff > 0.0)) {
    s.r_star = 0.0;
    s.w_star = c;
    s.regime = MarginRegime::indifferent;
    s.payoff = 0.0;
    s.any_margin = true;
    return s;
  }
  s.r_star = r;
  s.w_star = c + r;
  s.regime = regime;
  s.payoff = payoff;
  s.any_margin = false;
  return s;
}

}  // namespace detail

/// Margin for n identical retailers: r* = (alpha - (n+1)T - c)^+ / 2.
inline SupplierSolution optimal_margin_n(double alpha, double T, double c, int n) {
  if (n < 2) throw std::domain_error("optimal_margin_n: n must be at least 2");
  if (alpha < 0.0 || T < 0.0 || c < 0.0) throw std::domain_error("optimal_margin_n: negative input");
  const double k = static_cast<double>(n + 1);
  const double excess = alpha - k * T - c;
  const double r = 0.5 * positive_part(excess);
  const double payoff = static_cast<double>(n) / k * r * positive_part(excess - r);
  auto s = detail::make_solution(r, MarginRegime::symmetric, payoff, c);
  s.diagnostics["threshold"] = k * T + c;
  return s;
}

inline SupplierSolution optimal_margin_symmetric(double alpha, double T, double c) {
  return optimal_margin_n(alpha, T, c, 2);
}

/// Closed-form optimum for two retailers with T1 >= T2 (swapped if not).
/// Case A (c <= D, D > 0) runs indifferent -> r31 -> r21 -> r11; case B
/// skips r31. At a threshold both neighbouring branches are evaluated and
/// the better one kept, ties going to the lower branch.
inline SupplierSolution optimal_margin_general(double alpha, MarketParams p) {
  if (alpha < 0.0) throw std::domain_error("optimal_margin_general: alpha must be non-negative");
  if (p.T1 < p.T2) std::swap(p.T1, p.T2);
  p.n = 2;
  p.validate();

  constexpr double kSlack = 1e-12;
  const double c = p.c;
  const double T1 = p.T1;
  const double T2 = p.T2;
  const double D = p.capacity_gap();
  const double delta = p.delta();
  const double sqrt3 = std::sqrt(3.0);

  const double r31 = 0.25 * (alpha - 2.0 * c - 3.0 * T2);
  const double r21 = 0.5 * (alpha - c - T1 - 2.0 * T2);
  const double r11 = 0.5 * (alpha - c - 1.5 * T1 - 1.5 * T2);

  const bool case_a = c <= D && D > 0.0;
  const double first = case_a ? 3.0 * T2 + 2.0 * c : T1 + 2.0 * T2 + c;
  const double to_r21 = case_a ? 3.0 * T2 + delta - 0.5 * (sqrt3 - 1.0) * c : first;
  const double to_r11 = 3.0 * T2 + 2.0 * delta + c;

  auto pay = [&](double r) { return r > 0.0 ? supplier_payoff_on_path(r, alpha, p) : 0.0; };
  auto pick = [&](double lo_r, MarginRegime lo_g, double hi_r, MarginRegime hi_g) {
    const double a = pay(lo_r);
    const double b = pay(hi_r);
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (b > a + kSlack * scale) return detail::make_solution(hi_r, hi_g, b, c);
    return detail::make_solution(lo_r, lo_g, a, c);
  };

  SupplierSolution s;
  if (alpha <= first) {
    s = detail::make_solution(0.0, MarginRegime::indifferent, 0.0, c);
  } else if (case_a && alpha < to_r21 - kSlack) {
    s = detail::make_solution(r31, MarginRegime::r31, pay(r31), c);
  } else if (case_a && alpha <= to_r21 + kSlack) {
    s = pick(r31, MarginRegime::r31, r21, MarginRegime::r21);
  } else if (alpha < to_r11 - kSlack) {
    s = detail::make_solution(r21, MarginRegime::r21, pay(r21), c);
  } else if (alpha <= to_r11 + kSlack) {
    s = pick(r21, MarginRegime::r21, r11, MarginRegime::r11);
  } else {
    s = detail::make_solution(r11, MarginRegime::r11, pay(r11), c);
  }
  s.diagnostics["case"] = case_a ? 0.0 : 1.0;
  s.diagnostics["threshold_indifferent"] = first;
  s.diagnostics["threshold_r21"] = to_r21;
  s.diagnostics["threshold_r11"] = to_r11;
  return s;
}

/// Identical capacities use the symmetric formula (any n); otherwise the
/// two-retailer closed form.
inline SupplierSolution optimal_margin(double alpha, const MarketParams& p) {
  p.validate();
  if (!p.identical()) return optimal_margin_general(alpha, p);
  return optimal_margin_n(alpha, p.T1, p.c, p.n);
}

}  // namespace cournot

#endif  // COURNOT_FIRST_STAGE_HPP
