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

// solve / sweep / verify commands. Each takes a config path and streams and
// returns the process exit code, so the tool's main() is a thin shell.

#ifndef COURNOT_CLI_HPP
#define COURNOT_CLI_HPP

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "cournot/bayes.hpp"
#include "cournot/first_stage.hpp"
#include "cournot/inefficiency.hpp"
#include "cournot/json_io.hpp"
#include "cournot/oracle.hpp"
#include "cournot/second_stage.hpp"

namespace cournot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitTrivial = 2;
inline constexpr int kExitNoMaximizer = 3;
inline constexpr int kExitMismatch = 4;

struct CliOptions {
  int jobs = 1;
  /// Overrides the config's seed.
  std::optional<std::uint64_t> seed;
  /// Absolute tolerance of the verify checks.
  std::optional<double> tolerance;
};

/// Shortest round-trip decimal, independent of the global locale.
inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

namespace detail {

inline MarketConfig load_or_report(const std::string& path, std::ostream& err, int& code) {
  try {
    code = kExitOk;
    return load_config(path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
  }
  code = kExitConfig;
  return {};
}

inline BayesProblem bayes_problem(const MarketConfig& cfg) {
  return BayesProblem{*cfg.belief, cfg.market.T1, cfg.market.c, cfg.market.n};
}

inline json retailers_json(double alpha, double w, const MarketParams& p) {
  if (p.n == 2) return to_json(equilibrium_general(alpha, w, p));
  return to_json(equilibrium_n_identical(alpha, w, p.T1, p.n));
}

}  // namespace detail

/// Solves the configured market and writes the result document to `out`.
/// Exit 0 on success, 1 on config errors, 2 when the supplier is
/// indifferent (trivial market), 3 when no maximizer exists.
inline int cmd_solve(const std::string& path, std::ostream& out, std::ostream& err,
                     const CliOptions& opts = {}) {
  (void)opts;
  int code = kExitOk;
  const MarketConfig cfg = detail::load_or_report(path, err, code);
  if (code != kExitOk) return code;

  json doc = config_to_json(cfg);
  doc.erase("sweep");
  doc.erase("r_star");
  const MarketParams& p = cfg.market;

  if (cfg.complete_information()) {
    const double alpha = *cfg.alpha;
    const auto sol = optimal_margin(alpha, p);
    doc["supplier"] = to_json(sol);
    doc["retailers"] = detail::retailers_json(alpha, sol.w_star, p);
    out << doc.dump(2) << '\n';
    if (sol.regime == MarginRegime::indifferent) {
      err << "trivial market: the supplier is indifferent over all margins at alpha = "
          << format_number(alpha) << '\n';
      return kExitTrivial;
    }
    return kExitOk;
  }

  const BayesProblem bp = detail::bayes_problem(cfg);
  try {
    const auto sol = solve_equilibrium(bp);
    const double w = p.c + sol.r_star;
    const double alpha_eval = bp.belief.mean();
    doc["supplier"] = to_json(sol, p.c);
    doc["retailers_alpha"] = alpha_eval;
    doc["retailers"] = detail::retailers_json(alpha_eval, w, p);
    doc["inefficiency"] = to_json(inefficiency(bp, sol));
    out << doc.dump(2) << '\n';
    return kExitOk;
  } catch (const TrivialMarket& e) {
    err << e.what() << '\n';
    return kExitTrivial;
  } catch (const NoMaximizer& e) {
    err << e.what() << '\n';
    return kExitNoMaximizer;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

struct SweepRow {
  double param = 0.0;
  bool ok = false;
  double r_star = 0.0;
  double w_star = 0.0;
  double payoff = 0.0;
  std::string regime = "error";
  std::optional<double> p_conditional;
  std::string message;
};

/// One grid point of a sweep. Failures are recorded, never thrown.
inline SweepRow sweep_point(const MarketConfig& cfg, double v) {
  SweepRow row;
  row.param = v;
  MarketParams p = cfg.market;
  double alpha = cfg.alpha.value_or(0.0);
  switch (cfg.sweep->vary) {
    case SweepVariable::alpha: alpha = v; break;
    case SweepVariable::T: p.T1 = p.T2 = v; break;
    case SweepVariable::c: p.c = v; break;
  }
  try {
    if (cfg.complete_information()) {
      const auto sol = optimal_margin(alpha, p);
      row.r_star = sol.r_star;
      row.w_star = sol.w_star;
      row.payoff = sol.payoff;
      row.regime = to_string(sol.regime);
    } else {
      const BayesProblem bp{*cfg.belief, p.T1, p.c, p.n};
      const auto sol = solve_equilibrium(bp);
      row.r_star = sol.r_star;
      row.w_star = p.c + sol.r_star;
      row.payoff = sol.payoff;
      row.regime = to_string(sol.branch);
      row.p_conditional = inefficiency(bp, sol).p_conditional;
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row = SweepRow{};
    row.param = v;
    row.message = e.what();
  }
  return row;
}

/// Evaluates every sweep point on up to `jobs` threads; rows come back in
/// grid order.
inline std::vector<SweepRow> run_sweep(const MarketConfig& cfg, int jobs) {
  const int steps = cfg.sweep->steps;
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < steps; i = next++) rows[static_cast<std::size_t>(i)] = sweep_point(cfg, cfg.sweep->at(i));
  };
  const int n = std::clamp(jobs, 1, steps);
  std::vector<std::jthread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "param,r_star,w_star,payoff,regime,p_conditional\n";
  for (const auto& r : rows) {
    os << format_number(r.param) << ',';
    if (r.ok) {
      os << format_number(r.r_star) << ',' << format_number(r.w_star) << ',' << format_number(r.payoff);
    } else {
      os << ",,";
    }
    os << ',' << r.regime << ',';
    if (r.p_conditional) os << format_number(*r.p_conditional);
    os << '\n';
  }
}

/// Writes the sweep table to `out_csv` ("-" for `out`). Failed points get
/// regime=error and a note on `err`; the exit code is 0 once the table is
/// written.
inline int cmd_sweep(const std::string& path, const std::string& out_csv, std::ostream& out,
                     std::ostream& err, const CliOptions& opts = {}) {
  int code = kExitOk;
  const MarketConfig cfg = detail::load_or_report(path, err, code);
  if (code != kExitOk) return code;
  if (!cfg.sweep) {
    err << "config error: sweep requires a 'sweep' block\n";
    return kExitConfig;
  }
  const auto rows = run_sweep(cfg, opts.jobs);
  for (const auto& r : rows) {
    if (!r.ok) err << "point " << format_number(r.param) << ": " << r.message << '\n';
  }
  if (out_csv.empty() || out_csv == "-") {
    write_sweep_csv(out, rows);
    return kExitOk;
  }
  std::ofstream f(out_csv, std::ios::binary);
  if (!f) {
    err << "cannot open '" << out_csv << "' for writing\n";
    return kExitConfig;
  }
  write_sweep_csv(f, rows);
  f.flush();
  if (!f) {
    err << "write to '" << out_csv << "' failed\n";
    return kExitConfig;
  }
  return kExitOk;
}

struct CheckResult {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

inline json to_json(const CheckResult& c) {
  json j = {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

namespace detail {

inline std::vector<CheckResult> verify_complete(const MarketConfig& cfg, double tol) {
  const MarketParams& p = cfg.market;
  const double alpha = *cfg.alpha;
  const auto sol = optimal_margin(alpha, p);
  const double r = cfg.r_star.value_or(sol.r_star);
  std::vector<CheckResult> checks;

  oracle::OracleConfig oc;
  oc.grid_points = 10000;
  oc.tolerance_abs = tol;
  const auto best = oracle::grid_argmax_margin([&](double x) { return supplier_payoff_on_path(x, alpha, p); },
                                               0.0, std::max(alpha, 1.0), oc);
  const double gap = best.payoff_best - supplier_payoff_on_path(r, alpha, p);
  checks.push_back({"margin_optimality", gap <= tol, gap, tol, "grid argmax payoff minus payoff at r*"});

  const double w = p.c + r;
  oracle::NashCheck nash;
  if (p.n == 2) {
    nash = oracle::verify_nash(alpha, w, p, equilibrium_general(alpha, w, p), oc);
  } else {
    nash = oracle::verify_nash_identical(alpha, w, p.T1, p.n, equilibrium_n_identical(alpha, w, p.T1, p.n).each, oc);
  }
  checks.push_back({"nash", nash.ok, nash.max_gain, tol, "largest unilateral deviation gain"});
  return checks;
}

inline std::vector<CheckResult> verify_incomplete(const MarketConfig& cfg, const FixedPointResult& sol,
                                                  double tol, std::uint64_t seed) {
  const BayesProblem bp = bayes_problem(cfg);
  const DemandBelief& b = bp.belief;
  const double K = bp.offset();
  const double rH = bp.r_high();
  const double r = cfg.r_star.value_or(sol.r_star);
  std::vector<CheckResult> checks;

  const double residual = std::abs(fixed_point_gap(bp, r));
  const double res_tol = sol.residual + 1e-9;
  checks.push_back({"fixed_point", residual <= res_tol, residual, res_tol, "|m(r + K) - r|"});

  oracle::OracleConfig oc;
  oc.grid_points = 10000;
  oc.tolerance_abs = tol;
  oc.seed = seed;
  const double hi = std::isfinite(rH) ? rH : std::max(b.quantile(1.0 - 1e-9) - K, 2.0 * r + 1.0);
  const auto best = oracle::grid_argmax_margin([&](double x) { return expected_payoff(bp, x); }, 0.0, hi, oc);
  const double gap = best.payoff_best - expected_payoff(bp, r);
  checks.push_back({"margin_optimality", gap <= tol, gap, tol, "grid argmax payoff minus payoff at r*"});

  // Central differences at interior points, away from kinks of U.
  const double h = 1e-6;
  const double d_hi = std::isfinite(rH) ? rH : std::max(b.quantile(0.999) - K, 2.0 * r + 1.0);
  std::vector<double> kinks;
  for (double x : b.breakpoints()) kinks.push_back(x - K);
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double x = d_hi * static_cast<double>(i) / 101.0;
    const bool near_kink = std::any_of(kinks.begin(), kinks.end(), [&](double k) { return std::abs(x - k) < 10 * h; });
    if (near_kink || x - h <= 0.0 || x + h >= rH) continue;
    const double fd = (expected_payoff(bp, x + h) - expected_payoff(bp, x - h)) / (2.0 * h);
    const double an = payoff_derivative(bp, x);
    worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-12));
  }
  checks.push_back({"derivative", worst <= 1e-5, worst, 1e-5, "relative error of dU/dr vs central differences"});

  const auto mc = oracle::mc_expected_payoff(b, bp.T, bp.c, bp.n, r, oc);
  const double mc_gap = std::abs(mc.estimate - expected_payoff(bp, r));
  const double mc_tol = 4.0 * mc.std_error + 1e-12;
  checks.push_back({"monte_carlo", mc_gap <= mc_tol, mc_gap, mc_tol, "|MC - U(r*)| vs 4 standard errors"});

  FixedPointResult at = sol;
  at.r_star = r;
  const auto rep = inefficiency(bp, at);
  const double pc = rep.p_conditional.value_or(0.0);
  CheckResult bound{"bound", bound_check(rep, sol.dmrl), pc, kInefficiencyBound, ""};
  if (!sol.dmrl) {
    bound.note = "belief is not DMRL; bound not asserted";
  } else if (std::abs(pc - kInefficiencyBound) <= 1e-9) {
    bound.note = "equality: P(V|U) = 1 - 1/e";
  } else {
    bound.note = "P(V|U) below 1 - 1/e";
  }
  checks.push_back(bound);

  const double alpha = b.mean();
  const double w = bp.c + r;
  const auto eq = equilibrium_n_identical(alpha, w, bp.T, bp.n);
  const auto nash = oracle::verify_nash_identical(alpha, w, bp.T, bp.n, eq.each, oc);
  checks.push_back({"nash", nash.ok, nash.max_gain, tol, "retailers at alpha = E[alpha]"});
  return checks;
}

}  // namespace detail

/// Runs the oracle suite on the configured market and writes a JSON report.
/// Exit 0 iff every check passes, 4 on any mismatch (named on `err`).
inline int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err,
                      const CliOptions& opts = {}) {
  int code = kExitOk;
  const MarketConfig cfg = detail::load_or_report(path, err, code);
  if (code != kExitOk) return code;
  const double tol = opts.tolerance.value_or(1e-6);
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);

  std::vector<CheckResult> checks;
  try {
    if (cfg.complete_information()) {
      checks = detail::verify_complete(cfg, tol);
    } else {
      const auto sol = solve_equilibrium(detail::bayes_problem(cfg));
      checks = detail::verify_incomplete(cfg, sol, tol, seed);
    }
  } catch (const TrivialMarket& e) {
    err << e.what() << '\n';
    return kExitTrivial;
  } catch (const NoMaximizer& e) {
    err << e.what() << '\n';
    return kExitNoMaximizer;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  bool all = true;
  json report = {{"checks", json::array()}};
  for (const auto& c : checks) {
    report["checks"].push_back(to_json(c));
    if (!c.pass) {
      all = false;
      err << "check '" << c.name << "' failed: value " << format_number(c.value) << " vs threshold "
          << format_number(c.threshold) << '\n';
    }
  }
  report["pass"] = all;
  out << report.dump(2) << '\n';
  return all ? kExitOk : kExitMismatch;
}

}  // namespace cournot::cli

#endif  // COURNOT_CLI_HPP
