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

// JSON mapping for market configs and results. Solve output reuses the
// config keys, so a result document parses back as the config it came from.

#ifndef COURNOT_JSON_IO_HPP
#define COURNOT_JSON_IO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cournot/bayes.hpp"
#include "cournot/distributions.hpp"
#include "cournot/first_stage.hpp"
#include "cournot/inefficiency.hpp"
#include "cournot/second_stage.hpp"

namespace cournot {

using json = nlohmann::json;

/// Schema violation or unreadable config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double number_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string(where) + ": field '" + key + "' must be finite");
  return x;
}

inline void only_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* a : keys) known = known || k == a;
    if (!known) throw ConfigError(std::string(where) + ": unknown field '" + k + "'");
  }
}

// JSON has no infinity; unbounded values are written as null.
inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace detail

inline json belief_to_json(const DemandBelief& b) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Uniform>) {
          return {{"kind", "uniform"}, {"aL", p.lo}, {"aH", p.hi}};
        } else if constexpr (std::is_same_v<P, Exponential>) {
          return {{"kind", "exponential"}, {"lambda", p.rate}};
        } else if constexpr (std::is_same_v<P, BetaOneLambda>) {
          return {{"kind", "beta_one_lambda"}, {"lambda", p.lambda}};
        } else if constexpr (std::is_same_v<P, Pareto>) {
          return {{"kind", "pareto"}, {"aL", p.lo}, {"k", p.shape}};
        } else if constexpr (std::is_same_v<P, TwoIntervalUniform>) {
          return {{"kind", "two_interval_uniform"}, {"a1", p.a1}, {"b1", p.b1}, {"a2", p.a2}, {"b2", p.b2}};
        } else {
          json knots = json::array();
          for (const auto& k : p.knots()) knots.push_back({k.x, k.F});
          return {{"kind", "piecewise"}, {"knots", knots}};
        }
      },
      b.params());
}

inline DemandBelief belief_from_json(const json& j) {
  constexpr const char* where = "belief";
  if (!j.is_object()) throw ConfigError("belief must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("belief: missing string field 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "uniform") {
      detail::only_keys(j, {"kind", "aL", "aH"}, where);
      return Uniform{detail::number_field(j, "aL", where), detail::number_field(j, "aH", where)};
    }
    if (kind == "exponential") {
      detail::only_keys(j, {"kind", "lambda"}, where);
      return Exponential{detail::number_field(j, "lambda", where)};
    }
    if (kind == "beta_one_lambda") {
      detail::only_keys(j, {"kind", "lambda"}, where);
      return BetaOneLambda{detail::number_field(j, "lambda", where)};
    }
    if (kind == "pareto") {
      detail::only_keys(j, {"kind", "aL", "k"}, where);
      return Pareto{detail::number_field(j, "aL", where), detail::number_field(j, "k", where)};
    }
    if (kind == "two_interval_uniform") {
      detail::only_keys(j, {"kind", "a1", "b1", "a2", "b2"}, where);
      return TwoIntervalUniform{detail::number_field(j, "a1", where), detail::number_field(j, "b1", where),
                                detail::number_field(j, "a2", where), detail::number_field(j, "b2", where)};
    }
    if (kind == "piecewise") {
      detail::only_keys(j, {"kind", "knots"}, where);
      if (!j.contains("knots") || !j.at("knots").is_array()) throw ConfigError("belief: 'knots' must be an array");
      std::vector<Knot> knots;
      for (const auto& k : j.at("knots")) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ConfigError("belief: each knot must be [x, F]");
        }
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
      return PiecewiseLinearCdf(std::move(knots));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("belief: ") + e.what());
  }
  throw ConfigError("belief: unknown kind '" + kind + "'");
}

inline json params_to_json(const MarketParams& p) {
  return {{"T1", p.T1}, {"T2", p.T2}, {"c", p.c}, {"n", p.n}};
}

/// Accepts {T1, T2, c, n} or {T, c, n}; n defaults to 2.
inline MarketParams params_from_json(const json& j) {
  constexpr const char* where = "market";
  if (!j.is_object()) throw ConfigError("market must be an object");
  detail::only_keys(j, {"T", "T1", "T2", "c", "n"}, where);
  MarketParams p;
  if (j.contains("T")) {
    if (j.contains("T1") || j.contains("T2")) throw ConfigError("market: give either T or T1/T2, not both");
    p.T1 = p.T2 = detail::number_field(j, "T", where);
  } else {
    p.T1 = detail::number_field(j, "T1", where);
    p.T2 = detail::number_field(j, "T2", where);
  }
  p.c = detail::number_field(j, "c", where);
  if (j.contains("n")) {
    if (!j.at("n").is_number_integer()) throw ConfigError("market: 'n' must be an integer");
    p.n = j.at("n").get<int>();
  }
  try {
    p.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("market: ") + e.what());
  }
  return p;
}

inline json to_json(Strategy s) { return {{"t", s.t}, {"q", s.q}}; }

inline json to_json(const RetailerOutcome& o) {
  return {{"r1", to_json(o.r1)},      {"r2", to_json(o.r2)},
          {"regime", to_string(o.regime)}, {"total", o.total},
          {"clearing_price", o.clearing_price}, {"swapped", o.swapped}};
}

inline json to_json(const IdenticalOutcome& o) {
  return {{"each", to_json(o.each)}, {"n", o.n}, {"total", o.total}, {"clearing_price", o.clearing_price}};
}

inline json to_json(const SupplierSolution& s) {
  json d = json::object();
  for (const auto& [k, v] : s.diagnostics) d[k] = detail::finite_or_null(v);
  return {{"r_star", s.r_star},         {"w_star", s.w_star}, {"regime", to_string(s.regime)},
          {"payoff", s.payoff},         {"any_margin", s.any_margin}, {"diagnostics", d}};
}

inline json to_json(const FixedPointResult& r, double c) {
  return {{"r_star", r.r_star},
          {"w_star", c + r.r_star},
          {"residual", r.residual},
          {"branch", to_string(r.branch)},
          {"unique", r.unique},
          {"method", to_string(r.method)},
          {"iterations", r.iterations},
          {"payoff", r.payoff},
          {"dmrl", r.dmrl}};
}

inline json to_json(const InefficiencyReport& r) {
  return {{"p_joint", r.p_joint},
          {"p_conditional", r.p_conditional ? json(*r.p_conditional) : json(nullptr)},
          {"bound_slack", r.bound_slack},
          {"threshold_complete", r.threshold_complete},
          {"threshold_incomplete", r.threshold_incomplete}};
}

enum class SweepVariable { alpha, T, c };

inline const char* to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::alpha: return "alpha";
    case SweepVariable::T: return "T";
    case SweepVariable::c: return "c";
  }
  return "unknown";
}

struct SweepSpec {
  SweepVariable vary = SweepVariable::alpha;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;

  double at(int i) const noexcept {
    if (i == steps - 1) return to;
    return from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

/// A parsed config. Exactly one of alpha / belief is set.
struct MarketConfig {
  MarketParams market;
  std::optional<double> alpha;
  std::optional<DemandBelief> belief;
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 0;
  /// Margin to check instead of the solver's, for cmd_verify.
  std::optional<double> r_star;

  bool complete_information() const noexcept { return alpha.has_value(); }
};

inline json sweep_to_json(const SweepSpec& s) {
  return {{"vary", to_string(s.vary)}, {"from", s.from}, {"to", s.to}, {"steps", s.steps}};
}

inline SweepSpec sweep_from_json(const json& j) {
  constexpr const char* where = "sweep";
  if (!j.is_object()) throw ConfigError("sweep must be an object");
  detail::only_keys(j, {"vary", "from", "to", "steps"}, where);
  SweepSpec s;
  if (!j.contains("vary") || !j.at("vary").is_string()) throw ConfigError("sweep: missing string field 'vary'");
  const auto v = j.at("vary").get<std::string>();
  if (v == "alpha") {
    s.vary = SweepVariable::alpha;
  } else if (v == "T") {
    s.vary = SweepVariable::T;
  } else if (v == "c") {
    s.vary = SweepVariable::c;
  } else {
    throw ConfigError("sweep: 'vary' must be one of alpha, T, c");
  }
  s.from = detail::number_field(j, "from", where);
  s.to = detail::number_field(j, "to", where);
  if (!j.contains("steps") || !j.at("steps").is_number_integer()) {
    throw ConfigError("sweep: 'steps' must be an integer");
  }
  s.steps = j.at("steps").get<int>();
  if (s.steps < 2) throw ConfigError("sweep: 'steps' must be at least 2");
  return s;
}

/// Top-level keys written by cmd_solve; ignored on input so results
/// parse back as configs.
inline constexpr const char* kResultKeys[] = {"supplier", "retailers", "inefficiency", "retailers_alpha"};

inline MarketConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool known = k == "market" || k == "alpha" || k == "belief" || k == "sweep" || k == "seed" || k == "r_star";
    for (const char* r : kResultKeys) known = known || k == r;
    if (!known) throw ConfigError("config: unknown field '" + k + "'");
  }
  if (!j.contains("market")) throw ConfigError("config: missing 'market'");
  MarketConfig cfg;
  cfg.market = params_from_json(j.at("market"));
  const bool has_alpha = j.contains("alpha");
  const bool has_belief = j.contains("belief");
  if (has_alpha == has_belief) throw ConfigError("config: exactly one of 'alpha' and 'belief' is required");
  if (has_alpha) {
    const double a = detail::number_field(j, "alpha", "config");
    if (a < 0.0) throw ConfigError("config: 'alpha' must be non-negative");
    cfg.alpha = a;
  } else {
    cfg.belief = belief_from_json(j.at("belief"));
    if (!cfg.market.identical()) {
      throw ConfigError("config: a belief requires identical capacities (use T)");
    }
  }
  if (j.contains("sweep")) {
    cfg.sweep = sweep_from_json(j.at("sweep"));
    if (cfg.sweep->vary == SweepVariable::alpha && !has_alpha) {
      throw ConfigError("sweep: varying alpha requires complete information (give 'alpha')");
    }
    if (cfg.sweep->vary == SweepVariable::T && !cfg.market.identical()) {
      throw ConfigError("sweep: varying T requires identical capacities");
    }
    const double lo = std::min(cfg.sweep->from, cfg.sweep->to);
    if (lo < 0.0) throw ConfigError("sweep: bounds must be non-negative");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("config: 'seed' must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("r_star")) {
    const double r = detail::number_field(j, "r_star", "config");
    if (r < 0.0) throw ConfigError("config: 'r_star' must be non-negative");
    cfg.r_star = r;
  }
  return cfg;
}

inline json config_to_json(const MarketConfig& cfg) {
  json j;
  j["market"] = params_to_json(cfg.market);
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  if (cfg.belief) j["belief"] = belief_to_json(*cfg.belief);
  if (cfg.sweep) j["sweep"] = sweep_to_json(*cfg.sweep);
  j["seed"] = cfg.seed;
  if (cfg.r_star) j["r_star"] = *cfg.r_star;
  return j;
}

inline MarketConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace cournot

#endif  // COURNOT_JSON_IO_HPP
