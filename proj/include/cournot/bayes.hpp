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

// Supplier's problem when alpha is unknown to him but known to the n
// identical retailers. With offset K = (n+1)T + c the expected payoff is
//
//   U(r) = n/(n+1) * r * E(alpha - K - r)^+ = n/(n+1) * r * m(K + r) * S(K + r)
//
// and every interior optimum solves the fixed point r = m(r + K).

#ifndef COURNOT_BAYES_HPP
#define COURNOT_BAYES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cournot/distributions.hpp"

namespace cournot {

/// No margin yields a positive payoff (r_H <= 0); every price is optimal.
class TrivialMarket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expected payoff has no maximizer (it keeps increasing in r).
class NoMaximizer : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BayesProblem {
  DemandBelief belief;
  double T = 0.0;
  double c = 0.0;
  int n = 2;

  double payoff_factor() const noexcept {
    return static_cast<double>(n) / static_cast<double>(n + 1);
  }
  /// (n+1)T + c: alpha must exceed this for any order at margin 0.
  double offset() const noexcept { return static_cast<double>(n + 1) * T + c; }
  double r_low() const noexcept { return belief.lo() - offset(); }
  double r_high() const noexcept { return belief.hi() - offset(); }
  bool trivial() const noexcept { return !(r_high() > 0.0); }

  void validate() const {
    if (!(T >= 0.0 && std::isfinite(T))) throw std::domain_error("capacity T must be finite and non-negative");
    if (!(c >= 0.0 && std::isfinite(c))) throw std::domain_error("cost c must be finite and non-negative");
    if (n < 2) throw std::domain_error("at least two retailers are required");
  }
};

enum class FixedPointBranch { explicit_low_demand_spread, interior_fixed_point };
enum class SolveMethod { closed_form, bisection, grid_scan };

inline const char* to_string(FixedPointBranch b) noexcept {
  return b == FixedPointBranch::explicit_low_demand_spread ? "explicit_low_demand_spread"
                                                           : "interior_fixed_point";
}

inline const char* to_string(SolveMethod m) noexcept {
  switch (m) {
    case SolveMethod::closed_form: return "closed_form";
    case SolveMethod::bisection: return "bisection";
    case SolveMethod::grid_scan: return "grid_scan";
  }
  return "unknown";
}

struct FixedPointResult {
  double r_star = 0.0;
  /// |r* - m(r* + K)|.
  double residual = 0.0;
  FixedPointBranch branch = FixedPointBranch::interior_fixed_point;
  bool unique = true;
  SolveMethod method = SolveMethod::bisection;
  int iterations = 0;
  double payoff = 0.0;
  bool dmrl = true;
};

struct SolverOptions {
  double bracket_tolerance = 1e-12;
  std::size_t scan_points = 10000;
  /// Right end of the non-DMRL scan for unbounded support, as a quantile.
  double scan_upper_probability = 1.0 - 1e-8;
  int max_doublings = 60;
  DmrlGrid dmrl_grid{};
};

inline double expected_payoff(const BayesProblem& p, double r) {
  if (r < 0.0) throw std::domain_error("expected_payoff: margin must be non-negative");
  if (r == 0.0) return 0.0;
  return p.payoff_factor() * r * p.belief.partial_expectation(p.offset() + r);
}

/// dU/dr = n/(n+1) * (m(x) - r) * S(x), x = K + r, defined on (0, r_H).
inline double payoff_derivative(const BayesProblem& p, double r) {
  if (!(r > 0.0 && r < p.r_high())) {
    throw std::domain_error("payoff_derivative: margin outside (0, r_H)");
  }
  const double x = p.offset() + r;
  return p.payoff_factor() * (p.belief.mrl(x) - r) * p.belief.survival(x);
}

/// d2U/dr2 = n/(n+1) * (r h(x) - 2) * S(x), where the density exists.
inline double payoff_second_derivative(const BayesProblem& p, double r) {
  if (!(r > 0.0 && r < p.r_high())) {
    throw std::domain_error("payoff_second_derivative: margin outside (0, r_H)");
  }
  const double x = p.offset() + r;
  return p.payoff_factor() * (r * p.belief.density(x) - 2.0 * p.belief.survival(x));
}

/// g(r) = m(r + K) - r; its zeros are the candidate margins.
inline double fixed_point_gap(const BayesProblem& p, double r) {
  return p.belief.mrl(r + p.offset()) - r;
}

namespace detail {

struct Bisected {
  double r;
  int iterations;
};

// Requires g(a) > 0 >= g(b).
inline Bisected bisect_gap(const BayesProblem& p, double a, double b, double tol) {
  int it = 0;
  while (b - a > tol && it < 400) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    if (fixed_point_gap(p, mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
    ++it;
  }
  const double ga = std::abs(fixed_point_gap(p, a));
  const double gb = std::abs(fixed_point_gap(p, b));
  return {ga <= gb ? a : b, it};
}

// Doubles the bracket width until g turns non-positive. Returns the right
// end, or throws NoMaximizer once the cap is exhausted.
inline double expand_right(const BayesProblem& p, double left, double right, int max_doublings) {
  double span = std::max(right - left, 1.0);
  const double start = span;
  for (int k = 0; k <= max_doublings; ++k) {
    const double r = left + span;
    if (fixed_point_gap(p, r) <= 0.0) return r;
    span *= 2.0;
  }
  const double last = left + span / 2.0;
  const double before = left + span / 4.0;
  const bool rising = expected_payoff(p, last) > expected_payoff(p, before);
  std::ostringstream msg;
  msg << "expected payoff has no maximizer: m(r + K) > r up to r = " << last << " (" << start << " * 2^"
      << max_doublings << ")" << (rising ? ", payoff still increasing" : "");
  throw NoMaximizer(msg.str());
}

inline void finish(const BayesProblem& p, FixedPointResult& out) {
  out.residual = std::abs(fixed_point_gap(p, out.r_star));
  out.payoff = expected_payoff(p, out.r_star);
}

}  // namespace detail

/// Equilibrium margin r* = m(r* + (n+1)T + c).
///
/// DMRL beliefs: closed form when E(alpha) - alpha_L <= r_L, otherwise
/// bisection of g on (max(r_L, 0), r_H). Other beliefs: every sign change
/// of g on a grid is refined and the candidate with the highest expected
/// payoff wins.
///
/// Throws TrivialMarket when r_H <= 0 and NoMaximizer when the payoff keeps
/// rising past the expansion cap.
inline FixedPointResult solve_equilibrium(const BayesProblem& p, const SolverOptions& opt = {}) {
  p.validate();
  if (p.trivial()) {
    throw TrivialMarket("trivial market: r_H = alpha_H - (n+1)T - c <= 0, every margin is optimal");
  }
  const DemandBelief& b = p.belief;
  const double K = p.offset();
  const double rL = p.r_low();
  const double rH = p.r_high();

  FixedPointResult out;
  out.dmrl = is_dmrl(b, opt.dmrl_grid).dmrl;

  if (out.dmrl) {
    if (b.mean() - b.lo() <= rL) {
      out.r_star = 0.5 * (b.mean() - K);
      out.branch = FixedPointBranch::explicit_low_demand_spread;
      out.method = SolveMethod::closed_form;
      out.unique = true;
      detail::finish(p, out);
      return out;
    }
    const double left = std::max(rL, 0.0);
    const double right = std::isfinite(rH) ? rH : detail::expand_right(p, left, left + 1.0, opt.max_doublings);
    const auto root = detail::bisect_gap(p, left, right, opt.bracket_tolerance);
    out.r_star = root.r;
    out.iterations = root.iterations;
    out.branch = FixedPointBranch::interior_fixed_point;
    out.method = SolveMethod::bisection;
    out.unique = true;
    detail::finish(p, out);
    return out;
  }

  double hi = rH;
  if (!std::isfinite(hi)) {
    hi = b.quantile(opt.scan_upper_probability) - K;
    if (!(hi > 0.0)) hi = std::max(1.0, b.mean());
    if (fixed_point_gap(p, hi) > 0.0) hi = detail::expand_right(p, 0.0, hi, opt.max_doublings);
  }

  const std::size_t n = std::max<std::size_t>(opt.scan_points, 2);
  std::vector<double> candidates;
  int iterations = 0;
  double best_grid_r = 0.0;
  double best_grid_u = 0.0;
  double prev_r = 0.0;
  double prev_g = fixed_point_gap(p, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = hi * static_cast<double>(i) / static_cast<double>(n);
    const double g = fixed_point_gap(p, r);
    if (prev_g > 0.0 && g <= 0.0) {
      if (g == 0.0) {
        candidates.push_back(r);
      } else {
        const auto root = detail::bisect_gap(p, prev_r, r, opt.bracket_tolerance);
        candidates.push_back(root.r);
        iterations += root.iterations;
      }
    }
    const double u = expected_payoff(p, r);
    if (u > best_grid_u) {
      best_grid_u = u;
      best_grid_r = r;
    }
    prev_r = r;
    prev_g = g;
  }
  if (candidates.empty()) {
    throw NoMaximizer("expected payoff has no interior critical point on (0, " + std::to_string(hi) + ")");
  }

  double best_r = candidates.front();
  double best_u = expected_payoff(p, best_r);
  for (double r : candidates) {
    const double u = expected_payoff(p, r);
    if (u > best_u) {
      best_u = u;
      best_r = r;
    }
  }
  if (best_grid_u > best_u + 1e-12 * std::max(1.0, best_u)) best_r = best_grid_r;

  out.r_star = best_r;
  out.iterations = iterations;
  out.branch = FixedPointBranch::interior_fixed_point;
  out.method = SolveMethod::grid_scan;
  out.unique = candidates.size() == 1;
  detail::finish(p, out);
  return out;
}

enum class StaticsParameter { T, c };

struct StaticsRow {
  double param;
  double r_star;
  double w_star;
};

/// Re-solves the equilibrium for each value of T or c. Requires a DMRL
/// belief; solver errors propagate.
inline std::vector<StaticsRow> comparative_statics(const BayesProblem& p, StaticsParameter vary,
                                                   const std::vector<double>& grid,
                                                   const SolverOptions& opt = {}) {
  if (!is_dmrl(p.belief, opt.dmrl_grid).dmrl) {
    throw std::domain_error("comparative_statics requires a DMRL belief");
  }
  std::vector<StaticsRow> rows;
  rows.reserve(grid.size());
  for (double v : grid) {
    BayesProblem q = p;
    (vary == StaticsParameter::T ? q.T : q.c) = v;
    const auto sol = solve_equilibrium(q, opt);
    rows.push_back({v, sol.r_star, q.c + sol.r_star});
  }
  return rows;
}

}  // namespace cournot

#endif  // COURNOT_BAYES_HPP
