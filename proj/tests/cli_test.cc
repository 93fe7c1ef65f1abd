// Copyright 2026 The MARL Lab Authors.
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

#include "doctest.h"
#include "json.hpp"
#include "marl/config.h"
#include "marl/dynamics.h"
#include "marl/errors.h"
#include "marl/runner.h"

namespace marl {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string FirstLine(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("marl_lab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> Problems(const std::string& text) {
  try {
    ParseConfig(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

TEST_SUITE("cli") {

TEST_CASE("minimal arena config gets defaults") {
  const auto c = ParseConfig(
      R"({"mode": "arena", "arena": {"game": "matching-pennies", "algorithm": "wpl"}})");
  REQUIRE(c.arena.has_value());
  CHECK(c.mode == Mode::kArena);
  CHECK(c.arena->eta == 0.002);
  CHECK(c.arena->alpha == 0.1);
  CHECK(c.arena->epsilon == 0.1);
  CHECK(c.arena->algorithms == std::vector<Algorithm>{Algorithm::kWpl});
  CHECK_FALSE(c.dynamics.has_value());
  const ArenaConfig a = ToArenaConfig(*c.arena);
  CHECK(a.learners.size() == 2);
  CHECK(a.steps == 40000);
}

TEST_CASE("validation errors are aggregated") {
  const auto p = Problems(
      R"({"mode": "arena", "arena": {"steps": -5, "runs": 0, "alpha": 3,
          "colour": "red"}})");
  CHECK(p.size() == 4);
  CHECK(Problems(R"({"mode": "arena", "arena": {}, "dtap": {}})").size() == 1);
  CHECK(Problems(R"({"mode": "warp"})").size() >= 1);
  CHECK(Problems(R"({"arena": {"game": "chess"}})").size() == 1);
  CHECK(Problems(R"({"mode": "dtap", "dtap": {"width": 0, "tau": 0}})").size() ==
        3);
}

TEST_CASE("syntax errors carry a line number") {
  try {
    ParseConfig("{\n  \"mode\": \"arena\",\n  \"arena\": {\n    \"steps\": ,\n  }\n}\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("dynamics constants report their equilibrium") {
  const auto c = ParseConfig(
      R"({"mode": "dynamics", "dynamics": {"kind": "trajectory",
          "u": [0.5, -0.45, -0.5, 0.45], "horizon": 5}})");
  REQUIRE(c.dynamics.has_value());
  const auto [p, q] = MixedEquilibrium(c.dynamics->u);
  CHECK(p == doctest::Approx(0.9));
  CHECK(q == doctest::Approx(0.9));
  const auto dir = TempDir("ne");
  const auto summary = RunAndEmit(c, dir.string());
  CHECK(summary["equilibrium"][0].get<double>() == doctest::Approx(0.9));
  CHECK(summary["equilibrium"][1].get<double>() == doctest::Approx(0.9));
  CHECK(FirstLine(dir / "dynamics.csv") == "t,p,q,algorithm");
  fs::remove_all(dir);

  const auto by_ne = ParseConfig(
      R"({"mode": "dynamics", "dynamics": {"ne": [0.9, 0.9]}})");
  CHECK(by_ne.dynamics->u == c.dynamics->u);
  CHECK(Problems(R"({"mode": "dynamics", "dynamics": {"ne": [0.5, 0.5],
                     "u": [1, 2, 3, 4]}})").size() == 1);
}

TEST_CASE("every preset round trips") {
  const auto names = PresetNames();
  CHECK(names.size() >= 17);
  for (const auto& name : names) {
    const auto c = Preset(name);
    CHECK(ParseConfig(SerializeConfig(c)) == c);
  }
  CHECK(Preset("fig12b").arena->game == "matching-pennies");
  CHECK(Preset("fig8").dynamics->kind == DynamicsKind::kGrid);
  CHECK(Preset("fig21").mode == Mode::kSweep);
  CHECK(Preset("fig21").sweep->base["dtap"]["alpha"] == 1.0);
  CHECK(Preset("fig21").sweep->base["dtap"]["eta"] == 0.0001);
  CHECK_THROWS_AS(Preset("fig99"), LookupError);
}

TEST_CASE("seed override") {
  auto c = Preset("fig12b");
  OverrideSeed(c, 42);
  CHECK(c.arena->seed == 42);
  auto s = Preset("fig21");
  OverrideSeed(s, 42);
  CHECK(s.sweep->base["dtap"]["seed"] == 42);
}

TEST_CASE("identical configs write identical files") {
  auto c = ParseConfig(
      R"({"mode": "arena", "arena": {"game": "tricky",
          "algorithms": ["wpl", "giga-wolf"], "steps": 300, "runs": 2}})");
  const auto a = TempDir("a"), b = TempDir("b");
  RunAndEmit(c, a.string());
  RunAndEmit(c, b.string());
  CHECK(FirstLine(a / "arena.csv") == "step,run,player,action,prob,sampled,reward");
  CHECK(Slurp(a / "arena.csv") == Slurp(b / "arena.csv"));
  CHECK(Slurp(a / "summary.json") == Slurp(b / "summary.json"));
  const auto j = TempDir("j");
  RunAndEmit(c, j.string(), OutputFormat::kJson);
  CHECK(fs::exists(j / "arena.json"));
  for (const auto& d : {a, b, j}) fs::remove_all(d);
}

TEST_CASE("dtap output schema") {
  const auto c = ParseConfig(
      R"({"mode": "dtap", "dtap": {"width": 3, "height": 3,
          "source": {"x": 1, "y": 1, "width": 1, "height": 1},
          "arrival_rate": 0.05, "horizon": 2000, "tau": 500}})");
  const auto dir = TempDir("dtap");
  RunAndEmit(c, dir.string());
  CHECK(FirstLine(dir / "dtap.csv") == "window_end,atst,completed,max_hops");
  fs::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(FormatNumber(0.1) == "0.1");
  CHECK(FormatNumber(1.0 / 3) == "0.333333333");
  CHECK(FormatNumber(-2) == "-2");
}

TEST_CASE("validate passes and catches a broken projection") {
  for (const auto& r : Validate()) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
  }
  ValidateOptions broken;
  broken.project = [](std::span<const double> x, double) {
    return Project(x, 0.0);
  };
  bool projection_failed = false;
  for (const auto& r : Validate(broken)) {
    if (r.name.find("projection") != std::string::npos) {
      projection_failed = !r.passed;
    }
  }
  CHECK(projection_failed);
}

}  // TEST_SUITE

}  // namespace
}  // namespace marl
