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

// Retailer (second-stage) quantity game. Each retailer i draws t_i <= T_i
// from its own capacity at zero cost and orders q_i from the supplier at
// price w; the market clears at p = alpha - Q.

#ifndef COURNOT_SECOND_STAGE_HPP
#define COURNOT_SECOND_STAGE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace cournot {

inline double positive_part(double x) noexcept { return x > 0.0 ? x : 0.0; }

/// Exogenous constants of the chain. c is the normalized supplier cost.
struct MarketParams {
  double T1 = 0.0;
  double T2 = 0.0;
  double c = 0.0;
  int n = 2;

  double capacity_sum() const noexcept { return T1 + T2; }
  double capacity_gap() const noexcept { return T1 - T2; }
  /// (sqrt(3) + 3) / 2 * (T1 - T2).
  double delta() const noexcept { return 0.5 * (std::sqrt(3.0) + 3.0) * capacity_gap(); }
  bool identical() const noexcept { return T1 == T2; }

  void validate() const {
    if (!(T1 >= 0.0 && T2 >= 0.0 && std::isfinite(T1) && std::isfinite(T2))) {
      throw std::domain_error("capacities must be finite and non-negative");
    }
    if (!(c >= 0.0 && std::isfinite(c))) throw std::domain_error("cost c must be finite and non-negative");
    if (n < 2) throw std::domain_error("at least two retailers are required");
    if (n > 2 && T1 != T2) throw std::domain_error("more than two retailers requires identical capacities");
  }
};

struct Strategy {
  double t = 0.0;
  double q = 0.0;
  double total() const noexcept { return t + q; }
};

/// Which parts (1)-(3) of the two best replies intersect.
enum class Regime { G11, G21, G22, G31, G32, G33 };

inline const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::G11: return "G11";
    case Regime::G21: return "G21";
    case Regime::G22: return "G22";
    case Regime::G31: return "G31";
    case Regime::G32: return "G32";
    case Regime::G33: return "G33";
  }
  return "unknown";
}

struct RetailerOutcome {
  Strategy r1;
  Strategy r2;
  Regime regime = Regime::G33;
  double total = 0.0;
  double clearing_price = 0.0;
  /// Input had T1 < T2; r1 still refers to the caller's first retailer.
  bool swapped = false;
};

/// Symmetric outcome with n identical retailers.
struct IdenticalOutcome {
  Strategy each;
  int n = 2;
  double total = 0.0;
  double clearing_price = 0.0;
};

/// Q_i (alpha - w - Q) + w t_i, the retailer's profit given the others' total.
inline double retailer_payoff(double alpha, double w, Strategy own, double q_other) noexcept {
  const double qi = own.total();
  return qi * (alpha - w - qi - q_other) + w * own.t;
}

/// Q_i (alpha - Q) - w q_i; algebraically equal to retailer_payoff.
inline double retailer_payoff_revenue_form(double alpha, double w, Strategy own,
                                           double q_other) noexcept {
  const double qi = own.total();
  return qi * (alpha - qi - q_other) - w * own.q;
}

/// Best reply of a retailer with capacity T to the others' total quantity.
inline Strategy best_reply(double alpha, double w, double T, double q_other) {
  if (alpha < 0.0 || w < 0.0 || T < 0.0 || q_other < 0.0) {
    throw std::domain_error("best_reply: inputs must be non-negative");
  }
  if (q_other > alpha) throw std::domain_error("best_reply: others' quantity exceeds alpha");
  if (q_other < alpha - w - 2.0 * T) return {T, 0.5 * (alpha - w - q_other) - T};
  if (q_other < alpha - 2.0 * T) return {T, 0.0};
  return {0.5 * (alpha - q_other), 0.0};
}

namespace detail {

inline RetailerOutcome finish(double alpha, Strategy a, Strategy b, Regime g, bool swapped) {
  RetailerOutcome out;
  out.r1 = swapped ? b : a;
  out.r2 = swapped ? a : b;
  out.regime = g;
  out.total = a.total() + b.total();
  out.clearing_price = alpha - out.total;
  out.swapped = swapped;
  return out;
}

}  // namespace detail

/// The unique second-stage equilibrium for capacities T1, T2 (either order).
/// Rows are tested lowest-alpha first with right-closed intervals, so a cut
/// point is labelled by the lower row; strategies agree there anyway.
inline RetailerOutcome equilibrium_general(double alpha, double w, double T1, double T2) {
  if (alpha < 0.0 || w < 0.0 || T1 < 0.0 || T2 < 0.0) {
    throw std::domain_error("equilibrium_general: inputs must be non-negative");
  }
  const bool swapped = T1 < T2;
  if (swapped) std::swap(T1, T2);

  if (alpha <= 3.0 * T2) {
    return detail::finish(alpha, {alpha / 3.0, 0.0}, {alpha / 3.0, 0.0}, Regime::G33, swapped);
  }
  if (alpha <= std::min(2.0 * T1 + T2, 3.0 * T2 + 2.0 * w)) {
    return detail::finish(alpha, {0.5 * (alpha - T2), 0.0}, {T2, 0.0}, Regime::G32, swapped);
  }
  if (alpha > 3.0 * T2 + 2.0 * w && alpha <= 3.0 * T1 - w) {
    return detail::finish(alpha, {(alpha + w) / 3.0, 0.0}, {T2, (alpha - 2.0 * w) / 3.0 - T2},
                          Regime::G31, swapped);
  }
  if (alpha > 2.0 * T1 + T2 && alpha <= T1 + 2.0 * T2 + w) {
    return detail::finish(alpha, {T1, 0.0}, {T2, 0.0}, Regime::G22, swapped);
  }
  if (alpha <= 3.0 * T1 + w) {
    return detail::finish(alpha, {T1, 0.0}, {T2, 0.5 * (alpha - w - T1) - T2}, Regime::G21, swapped);
  }
  return detail::finish(alpha, {T1, (alpha - w) / 3.0 - T1}, {T2, (alpha - w) / 3.0 - T2},
                        Regime::G11, swapped);
}

inline RetailerOutcome equilibrium_general(double alpha, double w, const MarketParams& p) {
  return equilibrium_general(alpha, w, p.T1, p.T2);
}

/// Symmetric equilibrium among n retailers with common capacity T.
inline IdenticalOutcome equilibrium_n_identical(double alpha, double w, double T, int n) {
  if (n < 2) throw std::domain_error("equilibrium_n_identical: n must be at least 2");
  if (alpha < 0.0 || w < 0.0 || T < 0.0) {
    throw std::domain_error("equilibrium_n_identical: inputs must be non-negative");
  }
  const double k = static_cast<double>(n + 1);
  IdenticalOutcome out;
  out.n = n;
  out.each.t = T - positive_part(k * T - alpha) / k;
  out.each.q = positive_part(alpha - k * T - w) / k;
  out.total = static_cast<double>(n) * out.each.total();
  out.clearing_price = alpha - out.total;
  return out;
}

/// Total supplier order q_1 + ... + q_n at price w on the equilibrium path.
inline double total_order(double alpha, double w, const MarketParams& p) {
  if (p.n == 2) {
    const auto out = equilibrium_general(alpha, w, p);
    return out.r1.q + out.r2.q;
  }
  if (p.T1 != p.T2) throw std::domain_error("more than two retailers requires identical capacities");
  return static_cast<double>(p.n) * equilibrium_n_identical(alpha, w, p.T1, p.n).each.q;
}

}  // namespace cournot

#endif  // COURNOT_SECOND_STAGE_HPP
