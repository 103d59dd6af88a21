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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cournot/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Supply-chain Cournot solver"};
  app.require_subcommand(1);

  std::string config;
  std::string out_path = "-";
  int jobs = 1;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;

  auto* solve = app.add_subcommand("solve", "Solve one market and print JSON");
  auto* sweep = app.add_subcommand("sweep", "Sweep alpha, T or c and write CSV");
  auto* verify = app.add_subcommand("verify", "Check a market against the brute-force oracles");
  for (auto* sub : {solve, sweep, verify}) {
    sub->add_option("config", config, "Market config (JSON)")->required()->check(CLI::ExistingFile);
  }
  sweep->add_option("--out", out_path, "CSV output path, - for stdout");
  sweep->add_option("--jobs", jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
  auto* seed_opt = verify->add_option("--seed", seed, "Monte Carlo seed (overrides config)");
  auto* tol_opt = verify->add_option("--tolerance", tolerance, "Absolute tolerance of the checks")
                      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cournot::cli::kExitConfig;
  }

  cournot::cli::CliOptions opts;
  opts.jobs = jobs;
  if (*seed_opt) opts.seed = seed;
  if (*tol_opt) opts.tolerance = tolerance;

  if (*solve) return cournot::cli::cmd_solve(config, std::cout, std::cerr, opts);
  if (*sweep) return cournot::cli::cmd_sweep(config, out_path, std::cout, std::cerr, opts);
  return cournot::cli::cmd_verify(config, std::cout, std::cerr, opts);
}
