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

// Beliefs about the demand intercept alpha. Every kind is non-atomic and
// carries exact closed forms for the cdf, the survival function, the
// partial expectation E(alpha - t)^+ and the mean residual lifetime.

#ifndef COURNOT_DISTRIBUTIONS_HPP
#define COURNOT_DISTRIBUTIONS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cournot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Uniform {
  double lo;
  double hi;
};

struct Exponential {
  double rate;
};

/// Beta(1, lambda): survival (1 - t)^lambda on [0, 1].
struct BetaOneLambda {
  double lambda;
};

/// Pareto with scale `lo` > 0 and shape k > 1 (finite mean).
struct Pareto {
  double lo;
  double shape;
};

struct Knot {
  double x;
  double F;
};

/// Continuous cdf, linear between knots. Flat stretches are gaps in the
/// support; jumps are impossible by construction.
class PiecewiseLinearCdf {
 public:
  explicit PiecewiseLinearCdf(std::vector<Knot> knots) {
    if (knots.size() < 2) {
      throw std::invalid_argument("piecewise cdf needs at least two knots");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const auto& k = knots[i];
      if (!std::isfinite(k.x) || !std::isfinite(k.F) || k.F < 0.0 || k.F > 1.0) {
        throw std::invalid_argument("piecewise cdf knot out of range");
      }
      if (i > 0 && !(k.x > knots[i - 1].x)) {
        throw std::invalid_argument("piecewise cdf knots must be strictly increasing in x");
      }
      if (i > 0 && k.F < knots[i - 1].F) {
        throw std::invalid_argument("piecewise cdf values must be non-decreasing");
      }
    }
    if (knots.front().F != 0.0 || knots.back().F != 1.0) {
      throw std::invalid_argument("piecewise cdf must start at 0 and end at 1");
    }
    if (knots.front().x < 0.0) {
      throw std::invalid_argument("demand intercept must be non-negative");
    }
    // Trim so that the first knot is the last F == 0 and the final knot is
    // the first F == 1; the support bounds then read off directly.
    std::size_t first = 0;
    while (first + 1 < knots.size() && knots[first + 1].F == 0.0) ++first;
    std::size_t last = knots.size() - 1;
    while (last > first + 1 && knots[last - 1].F == 1.0) --last;
    knots_.assign(knots.begin() + static_cast<std::ptrdiff_t>(first),
                  knots.begin() + static_cast<std::ptrdiff_t>(last) + 1);

    tail_.assign(knots_.size(), 0.0);
    for (std::size_t i = knots_.size() - 1; i-- > 0;) {
      const double len = knots_[i + 1].x - knots_[i].x;
      const double s0 = 1.0 - knots_[i].F;
      const double s1 = 1.0 - knots_[i + 1].F;
      tail_[i] = tail_[i + 1] + 0.5 * len * (s0 + s1);
    }
  }

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  double lo() const noexcept { return knots_.front().x; }
  double hi() const noexcept { return knots_.back().x; }
  double mean() const noexcept { return knots_.front().x + tail_.front(); }

  double cdf(double t) const noexcept {
    if (t <= lo()) return 0.0;
    if (t >= hi()) return 1.0;
    const std::size_t j = segment(t);
    const auto& a = knots_[j];
    const auto& b = knots_[j + 1];
    return a.F + (b.F - a.F) * (t - a.x) / (b.x - a.x);
  }

  double density(double t) const noexcept {
    if (t < lo() || t >= hi()) return 0.0;
    const std::size_t j = segment(t);
    return (knots_[j + 1].F - knots_[j].F) / (knots_[j + 1].x - knots_[j].x);
  }

  /// Integral of the survival function over [t, hi]; requires lo <= t < hi.
  double partial_in_support(double t) const noexcept {
    const std::size_t j = segment(t);
    const double s_t = 1.0 - cdf(t);
    const double s_next = 1.0 - knots_[j + 1].F;
    return 0.5 * (knots_[j + 1].x - t) * (s_t + s_next) + tail_[j + 1];
  }

  double quantile(double p) const noexcept {
    if (p <= 0.0) return lo();
    if (p >= 1.0) return hi();
    auto it = std::lower_bound(knots_.begin(), knots_.end(), p,
                               [](const Knot& k, double v) { return k.F < v; });
    const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
    // knots_[j].F >= p > knots_[j-1].F, so the segment is strictly rising.
    const auto& a = knots_[j - 1];
    const auto& b = knots_[j];
    return a.x + (p - a.F) / (b.F - a.F) * (b.x - a.x);
  }

 private:
  // Index j with knots_[j].x <= t < knots_[j+1].x, for lo <= t < hi.
  std::size_t segment(double t) const noexcept {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const Knot& k) { return v < k.x; });
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
  }

  std::vector<Knot> knots_;
  std::vector<double> tail_;
};

/// Uniform density on [a1, b1] u [a2, b2]; mass proportional to length.
struct TwoIntervalUniform {
  double a1, b1, a2, b2;
};

namespace detail {

inline PiecewiseLinearCdf two_interval_cdf(const TwoIntervalUniform& u) {
  if (!(0.0 <= u.a1 && u.a1 < u.b1 && u.b1 <= u.a2 && u.a2 < u.b2)) {
    throw std::invalid_argument("two-interval uniform requires 0 <= a1 < b1 <= a2 < b2");
  }
  const double p = (u.b1 - u.a1) / ((u.b1 - u.a1) + (u.b2 - u.a2));
  std::vector<Knot> knots{{u.a1, 0.0}, {u.b1, p}};
  if (u.a2 > u.b1) knots.push_back({u.a2, p});
  knots.push_back({u.b2, 1.0});
  return PiecewiseLinearCdf(std::move(knots));
}

}  // namespace detail

enum class BeliefKind { uniform, exponential, beta_one_lambda, pareto, two_interval_uniform, piecewise };

/// The supplier's belief about alpha. Immutable after construction.
class DemandBelief {
 public:
  using Params = std::variant<Uniform, Exponential, BetaOneLambda, Pareto, TwoIntervalUniform,
                              PiecewiseLinearCdf>;

  DemandBelief(Uniform u) : params_(u), lo_(u.lo), hi_(u.hi), mean_(0.5 * (u.lo + u.hi)) {
    if (!(std::isfinite(u.lo) && std::isfinite(u.hi) && 0.0 <= u.lo && u.lo < u.hi)) {
      throw std::invalid_argument("uniform belief requires 0 <= aL < aH < inf");
    }
  }
  DemandBelief(Exponential e) : params_(e), lo_(0.0), hi_(kInf), mean_(1.0 / e.rate) {
    if (!(e.rate > 0.0 && std::isfinite(e.rate))) {
      throw std::invalid_argument("exponential belief requires rate > 0");
    }
  }
  DemandBelief(BetaOneLambda b) : params_(b), lo_(0.0), hi_(1.0), mean_(1.0 / (1.0 + b.lambda)) {
    if (!(b.lambda > 0.0 && std::isfinite(b.lambda))) {
      throw std::invalid_argument("Beta(1, lambda) belief requires lambda > 0");
    }
  }
  DemandBelief(Pareto p) : params_(p), lo_(p.lo), hi_(kInf), mean_(p.shape * p.lo / (p.shape - 1.0)) {
    if (!(p.lo > 0.0 && std::isfinite(p.lo))) {
      throw std::invalid_argument("pareto belief requires scale > 0");
    }
    if (!(p.shape > 1.0 && std::isfinite(p.shape))) {
      throw std::invalid_argument("pareto belief requires shape k > 1 (finite mean)");
    }
  }
  DemandBelief(TwoIntervalUniform u) : DemandBelief(detail::two_interval_cdf(u)) {
    params_ = u;
  }
  DemandBelief(PiecewiseLinearCdf p)
      : params_(p), lo_(p.lo()), hi_(p.hi()), mean_(p.mean()), piecewise_(std::move(p)) {}

  BeliefKind kind() const noexcept { return static_cast<BeliefKind>(params_.index()); }
  const Params& params() const noexcept { return params_; }

  /// alpha_L, the upper lower bound of the support.
  double lo() const noexcept { return lo_; }
  /// alpha_H, the lower upper bound of the support; may be +inf.
  double hi() const noexcept { return hi_; }
  double mean() const noexcept { return mean_; }
  bool bounded() const noexcept { return std::isfinite(hi_); }

  double cdf(double t) const noexcept {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    return 1.0 - survival(t);
  }

  double survival(double t) const noexcept {
    if (t <= lo_) return 1.0;
    if (t >= hi_) return 0.0;
    switch (kind()) {
      case BeliefKind::uniform:
        return (hi_ - t) / (hi_ - lo_);
      case BeliefKind::exponential:
        return std::exp(-std::get<Exponential>(params_).rate * t);
      case BeliefKind::beta_one_lambda:
        return std::pow(1.0 - t, std::get<BetaOneLambda>(params_).lambda);
      case BeliefKind::pareto:
        return std::pow(lo_ / t, std::get<Pareto>(params_).shape);
      default:
        return 1.0 - piecewise_->cdf(t);
    }
  }

  double density(double t) const noexcept {
    if (t < lo_ || t >= hi_) return 0.0;
    switch (kind()) {
      case BeliefKind::uniform:
        return 1.0 / (hi_ - lo_);
      case BeliefKind::exponential: {
        const double rate = std::get<Exponential>(params_).rate;
        return rate * std::exp(-rate * t);
      }
      case BeliefKind::beta_one_lambda: {
        const double lambda = std::get<BetaOneLambda>(params_).lambda;
        return lambda * std::pow(1.0 - t, lambda - 1.0);
      }
      case BeliefKind::pareto: {
        const double k = std::get<Pareto>(params_).shape;
        return k / t * std::pow(lo_ / t, k);
      }
      default:
        return piecewise_->density(t);
    }
  }

  /// E(alpha - t)^+, the integral of the survival function over [t, inf).
  double partial_expectation(double t) const noexcept {
    if (t <= lo_) return mean_ - t;
    if (t >= hi_) return 0.0;
    switch (kind()) {
      case BeliefKind::uniform:
        return 0.5 * (hi_ - t) * (hi_ - t) / (hi_ - lo_);
      case BeliefKind::exponential: {
        const double rate = std::get<Exponential>(params_).rate;
        return std::exp(-rate * t) / rate;
      }
      case BeliefKind::beta_one_lambda: {
        const double lambda = std::get<BetaOneLambda>(params_).lambda;
        return std::pow(1.0 - t, lambda + 1.0) / (lambda + 1.0);
      }
      case BeliefKind::pareto: {
        const double k = std::get<Pareto>(params_).shape;
        return t * std::pow(lo_ / t, k) / (k - 1.0);
      }
      default:
        return piecewise_->partial_in_support(t);
    }
  }

  /// Mean residual lifetime E(alpha - t | alpha > t); 0 past the support and
  /// mean - t below it.
  double mrl(double t) const noexcept {
    if (t <= lo_) return mean_ - t;
    if (t >= hi_) return 0.0;
    switch (kind()) {
      case BeliefKind::uniform:
        return 0.5 * (hi_ - t);
      case BeliefKind::exponential:
        return 1.0 / std::get<Exponential>(params_).rate;
      case BeliefKind::beta_one_lambda:
        return (1.0 - t) / (1.0 + std::get<BetaOneLambda>(params_).lambda);
      case BeliefKind::pareto:
        return t / (std::get<Pareto>(params_).shape - 1.0);
      default: {
        const double s = survival(t);
        return s > 0.0 ? piecewise_->partial_in_support(t) / s : 0.0;
      }
    }
  }

  /// Points where cdf, mrl or density may have kinks, in increasing order.
  std::vector<double> breakpoints() const {
    if (piecewise_) {
      std::vector<double> xs;
      for (const auto& k : piecewise_->knots()) xs.push_back(k.x);
      return xs;
    }
    if (bounded()) return {lo_, hi_};
    return {lo_};
  }

  double quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile probability outside [0, 1]");
    if (p == 0.0) return lo_;
    if (p == 1.0) return hi_;
    switch (kind()) {
      case BeliefKind::uniform:
        return lo_ + p * (hi_ - lo_);
      case BeliefKind::exponential:
        return -std::log1p(-p) / std::get<Exponential>(params_).rate;
      case BeliefKind::beta_one_lambda:
        return -std::expm1(std::log1p(-p) / std::get<BetaOneLambda>(params_).lambda);
      case BeliefKind::pareto:
        return lo_ * std::exp(-std::log1p(-p) / std::get<Pareto>(params_).shape);
      default:
        return piecewise_->quantile(p);
    }
  }

 private:
  Params params_;
  double lo_;
  double hi_;
  double mean_;
  std::optional<PiecewiseLinearCdf> piecewise_;
};

inline const char* to_string(BeliefKind k) noexcept {
  switch (k) {
    case BeliefKind::uniform: return "uniform";
    case BeliefKind::exponential: return "exponential";
    case BeliefKind::beta_one_lambda: return "beta_one_lambda";
    case BeliefKind::pareto: return "pareto";
    case BeliefKind::two_interval_uniform: return "two_interval_uniform";
    case BeliefKind::piecewise: return "piecewise";
  }
  return "unknown";
}

inline double cdf(const DemandBelief& b, double t) noexcept { return b.cdf(t); }
inline double survival(const DemandBelief& b, double t) noexcept { return b.survival(t); }
inline double mrl(const DemandBelief& b, double t) noexcept { return b.mrl(t); }
inline double partial_expectation(const DemandBelief& b, double t) noexcept {
  return b.partial_expectation(t);
}

enum class DmrlBasis { analytic, numeric };

struct DmrlVerdict {
  DmrlBasis basis;
  bool dmrl;
};

struct DmrlGrid {
  std::size_t points = 10000;
  double upper_probability = 1.0 - 1e-6;
  double tolerance = 1e-9;
};

/// Whether the mean residual lifetime is non-increasing. Closed-form kinds
/// are decided analytically; knot-based kinds are checked on a grid.
inline DmrlVerdict is_dmrl(const DemandBelief& b, const DmrlGrid& grid = {}) {
  switch (b.kind()) {
    case BeliefKind::uniform:
    case BeliefKind::exponential:
    case BeliefKind::beta_one_lambda:
      return {DmrlBasis::analytic, true};
    case BeliefKind::pareto:
      return {DmrlBasis::analytic, false};
    default:
      break;
  }
  const double lo = b.lo();
  const double hi = b.quantile(grid.upper_probability);
  const std::size_t n = std::max<std::size_t>(grid.points, 2);
  double prev = b.mrl(lo);
  for (std::size_t i = 1; i < n; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double m = b.mrl(t);
    if (m > prev + grid.tolerance) return {DmrlBasis::numeric, false};
    prev = m;
  }
  return {DmrlBasis::numeric, true};
}

}  // namespace cournot

#endif  // COURNOT_DISTRIBUTIONS_HPP
