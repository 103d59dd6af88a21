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

// Lost trades at the Bayesian equilibrium. U: a trade would happen with
// alpha known (alpha > K). V: no trade happens at margin r* (alpha <= K + r*).

#ifndef COURNOT_INEFFICIENCY_HPP
#define COURNOT_INEFFICIENCY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cournot/bayes.hpp"

namespace cournot {

/// 1 - 1/e, the worst case of P(V|U) over DMRL beliefs.
inline const double kInefficiencyBound = 1.0 - std::exp(-1.0);

struct InefficiencyReport {
  double p_joint = 0.0;
  /// Empty when S(K) = 0 (no trade would happen even with alpha known).
  std::optional<double> p_conditional;
  double bound_slack = 0.0;
  double threshold_complete = 0.0;
  double threshold_incomplete = 0.0;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P(V n U) = F(K + r*) - F(K) and P(V|U) = P(V n U) / S(K).
inline InefficiencyReport inefficiency(const BayesProblem& p, const FixedPointResult& sol) {
  if (p.trivial()) throw TrivialMarket("inefficiency: trivial market (r_H <= 0)");
  const auto& b = p.belief;
  InefficiencyReport rep;
  rep.threshold_complete = p.offset();
  rep.threshold_incomplete = p.offset() + sol.r_star;
  const double s = b.survival(rep.threshold_complete);
  const double s_top = b.survival(rep.threshold_incomplete);
  // Differences of F cancel in the upper tail; use S there.
  const bool upper = s < 0.5;
  rep.p_joint = std::max(0.0, upper ? s - s_top : b.cdf(rep.threshold_incomplete) - b.cdf(rep.threshold_complete));
  if (s > 0.0) {
    rep.p_conditional = std::clamp(upper ? 1.0 - s_top / s : rep.p_joint / s, 0.0, 1.0);
    rep.bound_slack = kInefficiencyBound - *rep.p_conditional;
  } else {
    rep.bound_slack = kInefficiencyBound;
  }
  return rep;
}

/// P(V|U) through the mean residual lifetime alone:
///   1 - m(K)/m(K + r*) * exp(-int_K^{K+r*} du / m(u)).
/// A cross-check on the cdf form; throws QuadratureError if the integral
/// does not converge.
inline double mrl_form_conditional(const BayesProblem& p, const FixedPointResult& sol,
                                   double rel_tol = 1e-9) {
  if (p.trivial()) throw TrivialMarket("mrl_form_conditional: trivial market (r_H <= 0)");
  if (!(sol.r_star > 0.0)) return 0.0;
  const auto& b = p.belief;
  const double a = p.offset();
  const double z = a + sol.r_star;
  const double m_top = b.mrl(z);
  if (!(m_top > 0.0)) throw QuadratureError("mrl vanishes at K + r*");

  // The integrand has kinks at support edges and knots; integrate the
  // pieces separately so each is smooth.
  std::vector<double> breaks{a};
  for (double e : b.breakpoints()) {
    if (e > a && e < z) breaks.push_back(e);
  }
  breaks.push_back(z);

  double integral = 0.0;
  auto inv = [&](double u) { return 1.0 / b.mrl(u); };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double err = 0.0;
    double l1 = 0.0;
    const double piece = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        inv, breaks[i], breaks[i + 1], 20, rel_tol, &err, &l1);
    if (!std::isfinite(piece) || err > 1e3 * rel_tol * std::max(1.0, l1)) {
      throw QuadratureError("1/m(u) quadrature did not converge");
    }
    integral += piece;
  }
  return 1.0 - b.mrl(a) / m_top * std::exp(-integral);
}

/// True unless the belief is DMRL and P(V|U) exceeds 1 - 1/e.
inline bool bound_check(const InefficiencyReport& rep, bool dmrl) {
  if (!dmrl) return true;
  if (!rep.p_conditional) return true;
  return *rep.p_conditional <= kInefficiencyBound + 1e-9;
}

}  // namespace cournot

#endif  // COURNOT_INEFFICIENCY_HPP
