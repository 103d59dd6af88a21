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

// Brute-force checks that share no code path with the closed forms:
// grid best-response search, grid + golden-section maximization, Monte
// Carlo over alpha and direct quadrature of the survival function.

#ifndef COURNOT_ORACLE_HPP
#define COURNOT_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cournot/distributions.hpp"
#include "cournot/second_stage.hpp"

namespace cournot::oracle {

struct OracleConfig {
  std::size_t grid_points = 2000;
  std::size_t mc_samples = 1000000;
  std::uint64_t seed = 0;
  double tolerance_abs = 1e-6;

  void validate() const {
    if (grid_points < 2) throw std::invalid_argument("oracle grid needs at least 2 points");
    if (mc_samples < 1) throw std::invalid_argument("oracle needs at least 1 Monte Carlo sample");
  }
};

struct NashCheck {
  bool ok = true;
  double max_gain = 0.0;
  /// Deviation attaining max_gain.
  Strategy worst_deviation{};
  /// 1-based retailer index of the worst deviation.
  int retailer = 1;
};

namespace detail {

// Best gain over the dominance-reduced strategy set: (t, 0) with
// t <= min(alpha, T), plus (T, q) with q <= alpha - T when T <= alpha.
inline void scan_deviations(double alpha, double w, double T, Strategy current, double q_other,
                            std::size_t points, int index, NashCheck& out) {
  const double base = retailer_payoff(alpha, w, current, q_other);
  auto consider = [&](Strategy s) {
    const double gain = retailer_payoff(alpha, w, s, q_other) - base;
    if (gain > out.max_gain) {
      out.max_gain = gain;
      out.worst_deviation = s;
      out.retailer = index;
    }
  };
  const double t_max = std::min(alpha, T);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    consider({f * t_max, 0.0});
  }
  if (T <= alpha) {
    for (std::size_t i = 0; i < points; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(points - 1);
      consider({T, f * (alpha - T)});
    }
  }
}

}  // namespace detail

/// Largest unilateral gain either retailer can get on a grid.
inline NashCheck verify_nash(double alpha, double w, const MarketParams& p,
                             const RetailerOutcome& candidate, const OracleConfig& cfg = {}) {
  cfg.validate();
  NashCheck out;
  out.max_gain = -std::numeric_limits<double>::infinity();
  detail::scan_deviations(alpha, w, p.T1, candidate.r1, candidate.r2.total(), cfg.grid_points, 1, out);
  detail::scan_deviations(alpha, w, p.T2, candidate.r2, candidate.r1.total(), cfg.grid_points, 2, out);
  out.max_gain = std::max(out.max_gain, 0.0);
  out.ok = out.max_gain <= cfg.tolerance_abs;
  return out;
}

/// Same check for the symmetric profile of n identical retailers.
inline NashCheck verify_nash_identical(double alpha, double w, double T, int n, Strategy each,
                                       const OracleConfig& cfg = {}) {
  cfg.validate();
  NashCheck out;
  out.max_gain = -std::numeric_limits<double>::infinity();
  const double others = static_cast<double>(n - 1) * each.total();
  detail::scan_deviations(alpha, w, T, each, others, cfg.grid_points, 1, out);
  out.max_gain = std::max(out.max_gain, 0.0);
  out.ok = out.max_gain <= cfg.tolerance_abs;
  return out;
}

struct Argmax {
  double r_best;
  double payoff_best;
};

/// Maximum of `payoff` over [lo, hi]: uniform grid, then golden-section
/// search on the two cells around the best grid point.
inline Argmax grid_argmax_margin(const std::function<double(double)>& payoff, double lo, double hi,
                                 const OracleConfig& cfg = {}) {
  cfg.validate();
  if (!(lo < hi)) throw std::invalid_argument("grid_argmax_margin: need lo < hi");
  const std::size_t n = cfg.grid_points;
  auto at = [&](std::size_t i) { return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1); };
  std::size_t best = 0;
  double best_u = payoff(lo);
  for (std::size_t i = 1; i < n; ++i) {
    const double u = payoff(at(i));
    if (u > best_u) {
      best_u = u;
      best = i;
    }
  }
  double a = at(best == 0 ? 0 : best - 1);
  double b = at(std::min(best + 1, n - 1));
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = payoff(x1);
  double f2 = payoff(x2);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = payoff(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = payoff(x1);
    }
  }
  const double r = 0.5 * (a + b);
  const double u = payoff(r);
  if (u > best_u) return {r, u};
  return {at(best), best_u};
}

/// Counter-based uniform in (0, 1): sample `index` of stream `seed`.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t key = mix(seed + 0x9E3779B97F4A7C15ULL);
  const std::uint64_t z = mix(key + (index + 1) * 0x9E3779B97F4A7C15ULL);
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

struct McEstimate {
  double estimate;
  double std_error;
};

/// Sample mean of n/(n+1) r (alpha - (n+1)T - c - r)^+ with alpha drawn by
/// inverse cdf.
inline McEstimate mc_expected_payoff(const DemandBelief& belief, double T, double c, int n, double r,
                                     const OracleConfig& cfg = {}) {
  cfg.validate();
  const double factor = static_cast<double>(n) / static_cast<double>(n + 1) * r;
  const double cut = static_cast<double>(n + 1) * T + c + r;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < cfg.mc_samples; ++i) {
    const double alpha = belief.quantile(counter_uniform(cfg.seed, i));
    const double x = factor * positive_part(alpha - cut);
    const double d = x - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (x - mean);
  }
  const double ns = static_cast<double>(cfg.mc_samples);
  const double var = cfg.mc_samples > 1 ? m2 / (ns - 1.0) : 0.0;
  return {mean, std::sqrt(var / ns)};
}

/// E(alpha - t)^+ by numerical integration of the survival function,
/// split at the belief's breakpoints.
inline double integrate_survival(const DemandBelief& belief, double t) {
  std::vector<double> cuts{t};
  for (double x : belief.breakpoints()) {
    if (x > t) cuts.push_back(x);
  }
  auto s = [&](double x) { return belief.survival(x); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(s, cuts[i], cuts[i + 1], 25, 1e-13);
  }
  if (!belief.bounded()) {
    boost::math::quadrature::exp_sinh<double> tail;
    const double from = cuts.back();
    total += tail.integrate([&](double u) { return belief.survival(from + u); }, 0.0,
                            std::numeric_limits<double>::infinity());
  }
  return total;
}

}  // namespace cournot::oracle

#endif  // COURNOT_ORACLE_HPP
