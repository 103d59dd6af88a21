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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "cournot/cli.hpp"

using namespace cournot;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kDir = COURNOT_CONFIG_DIR;

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("cournot_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& row) {
  std::vector<std::string> out;
  std::istringstream is(row);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  if (!row.empty() && row.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("solve uniform belief", "[cli]") {
  std::ostringstream out, err;
  REQUIRE(cli::cmd_solve(kDir + "/uniform_1_2.json", out, err) == cli::kExitOk);
  const json doc = json::parse(out.str());
  CHECK_THAT(doc["supplier"]["r_star"].get<double>(), WithinAbs(0.75, 1e-12));
  CHECK(doc["inefficiency"]["p_joint"].get<double>() == 0.0);
  // The result document parses back as its config.
  const auto cfg = config_from_json(doc);
  CHECK(cfg.belief->kind() == BeliefKind::uniform);
}

TEST_CASE("solve exit codes", "[cli]") {
  std::ostringstream out, err;
  CHECK(cli::cmd_solve(kDir + "/trivial.json", out, err) == cli::kExitTrivial);
  CHECK(json::parse(out.str())["supplier"]["regime"] == "indifferent");
  out.str("");
  CHECK(cli::cmd_solve(kDir + "/pareto_divergent.json", out, err) == cli::kExitNoMaximizer);
  CHECK(cli::cmd_solve(kDir + "/does_not_exist.json", out, err) == cli::kExitConfig);
  CHECK(cli::cmd_solve(write_temp("garbage.json", "{not json"), out, err) == cli::kExitConfig);
  out.str("");
  CHECK(cli::cmd_solve(kDir + "/two_retailers.json", out, err) == cli::kExitOk);
  CHECK(json::parse(out.str())["supplier"]["regime"] == "r21");
}

TEST_CASE("sweep alpha crosses every case A regime", "[cli]") {
  const auto cfg = write_temp(
      "sweep_alpha.json",
      R"({"market": {"T1": 2, "T2": 1, "c": 0.5}, "alpha": 0, "sweep": {"vary": "alpha", "from": 0, "to": 12, "steps": 121}})");
  const auto csv = (std::filesystem::temp_directory_path() / "cournot_test_sweep.csv").string();
  std::ostringstream out, err;
  REQUIRE(cli::cmd_sweep(cfg, csv, out, err, {4, {}, {}}) == cli::kExitOk);
  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = lines(ss.str());
  REQUIRE(rows.size() == 122);
  CHECK(rows[0] == "param,r_star,w_star,payoff,regime,p_conditional");
  std::vector<std::string> seq;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 6);
    if (seq.empty() || seq.back() != f[4]) seq.push_back(f[4]);
  }
  CHECK(seq == std::vector<std::string>{"indifferent", "r31", "r21", "r11"});
  CHECK(ss.str().find('\r') == std::string::npos);
}

TEST_CASE("sweep T for exponential keeps r_star constant", "[cli]") {
  std::ostringstream out, err;
  REQUIRE(cli::cmd_sweep(kDir + "/sweep_T_exponential.json", "-", out, err) == cli::kExitOk);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 22);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    CHECK_THAT(std::stod(f[1]), WithinAbs(1.0, 1e-10));
    CHECK_THAT(std::stod(f[5]), WithinAbs(kInefficiencyBound, 1e-9));
  }
}

TEST_CASE("sweep edge cases", "[cli]") {
  std::ostringstream out, err;
  auto cfg = write_temp("steps2.json",
                        R"({"market": {"T": 0, "c": 0}, "alpha": 1, "sweep": {"vary": "alpha", "from": 1, "to": 2, "steps": 2}})");
  REQUIRE(cli::cmd_sweep(cfg, "-", out, err) == cli::kExitOk);
  CHECK(lines(out.str()).size() == 3);

  out.str("");
  cfg = write_temp("sweep_errors.json",
                   R"({"market": {"T": 0, "c": 0}, "belief": {"kind": "uniform", "aL": 1, "aH": 2}, "sweep": {"vary": "c", "from": 1, "to": 3, "steps": 3}})");
  REQUIRE(cli::cmd_sweep(cfg, "-", out, err) == cli::kExitOk);
  const auto rows = lines(out.str());
  CHECK(split(rows[3])[4] == "error");
  CHECK(split(rows[1])[4] != "error");

  CHECK(cli::cmd_sweep(kDir + "/uniform_1_2.json", "-", out, err) == cli::kExitConfig);
  CHECK(cli::cmd_sweep(kDir + "/sweep_alpha.json", "/nonexistent_dir/x.csv", out, err) == cli::kExitConfig);
}

TEST_CASE("sweep output is independent of jobs", "[cli]") {
  std::ostringstream a, b, err;
  REQUIRE(cli::cmd_sweep(kDir + "/sweep_T_exponential.json", "-", a, err, {1, {}, {}}) == cli::kExitOk);
  REQUIRE(cli::cmd_sweep(kDir + "/sweep_T_exponential.json", "-", b, err, {8, {}, {}}) == cli::kExitOk);
  CHECK(a.str() == b.str());
}

TEST_CASE("verify", "[cli]") {
  std::ostringstream out, err;
  CHECK(cli::cmd_verify(kDir + "/uniform_1_2.json", out, err) == cli::kExitOk);
  out.str("");
  CHECK(cli::cmd_verify(kDir + "/two_retailers.json", out, err) == cli::kExitOk);
  out.str("");
  REQUIRE(cli::cmd_verify(kDir + "/exponential.json", out, err) == cli::kExitOk);
  const json rep = json::parse(out.str());
  bool found = false;
  for (const auto& c : rep["checks"]) {
    if (c["name"] == "bound") {
      found = true;
      CHECK(c["note"].get<std::string>().find("equality") != std::string::npos);
    }
  }
  CHECK(found);

  std::ostringstream err2;
  CHECK(cli::cmd_verify(kDir + "/injected_r_star.json", out, err2) == cli::kExitMismatch);
  CHECK(err2.str().find("fixed_point") != std::string::npos);
}

TEST_CASE("numbers are formatted without locale", "[cli]") {
  CHECK(cli::format_number(0.5) == "0.5");
  CHECK(cli::format_number(1234567.0) == "1234567");
  CHECK(cli::format_number(0.1) == "0.1");
}
