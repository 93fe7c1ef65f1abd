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

#include <random>
#include <vector>

#include "doctest.h"
#include "marl/errors.h"
#include "marl/games.h"
#include "oracles.h"

namespace marl {
namespace {

using Joint = std::vector<std::vector<double>>;

double Ev(const Game& g, int player, const Joint& joint) {
  JointPolicy pi;
  for (const auto& p : joint) pi.emplace_back(p);
  return ExpectedValue(g, player, pi);
}

TEST_SUITE("games") {

TEST_CASE("benchmark lookups") {
  const int hh[2] = {0, 0};
  CHECK(Benchmark("matching-pennies").Reward(hh, 0) == 1);
  CHECK(Benchmark("matching-pennies").Reward(hh, 1) == -1);
  const int a1a2[2] = {0, 1};
  const Game b = Benchmark("biased");
  const auto biased = b.Rewards(a1a2);
  CHECK(biased[0] == doctest::Approx(1.85));
  CHECK(biased[1] == doctest::Approx(1.0));
  const Game s = Benchmark("shapleys");
  const auto shapley = s.Rewards(hh);
  CHECK(shapley[0] == 0);
  CHECK(shapley[1] == 0);
  CHECK_THROWS_AS(Benchmark("no-such-game"), LookupError);
  for (const auto& name : BenchmarkNames()) {
    const Game g = Benchmark(name);
    CHECK(g.num_players() == 2);
    CHECK(g.num_cells() == static_cast<std::size_t>(g.num_actions(0) *
                                                    g.num_actions(1)));
  }
}

TEST_CASE("expected value examples") {
  CHECK(Ev(Benchmark("matching-pennies"), 0, {{.5, .5}, {.5, .5}}) ==
        doctest::Approx(0).epsilon(1e-15));
  CHECK(Ev(Benchmark("coordination"), 0, {{1, 0}, {1, 0}}) == 2);
  CHECK(Ev(Benchmark("tricky"), 0, {{1, 0}, {0, 1}}) == 3);
}

TEST_CASE("expected value matches enumeration and is multilinear") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_policy = [&](int k) {
    std::vector<double> p(k);
    double s = 0;
    for (auto& x : p) s += (x = unit(rng) + 1e-3);
    for (auto& x : p) x /= s;
    return p;
  };
  for (const auto& name : BenchmarkNames()) {
    const Game g = Benchmark(name);
    for (int trial = 0; trial < 50; ++trial) {
      const int player = trial % 2;
      Joint joint = {random_policy(g.num_actions(0)),
                     random_policy(g.num_actions(1))};
      CHECK(Ev(g, player, joint) ==
            doctest::Approx(oracle::Value(g, player, joint)).epsilon(1e-12));
      Joint a = joint, b = joint, mix = joint;
      a[player] = random_policy(g.num_actions(player));
      b[player] = random_policy(g.num_actions(player));
      const double w = unit(rng);
      for (std::size_t i = 0; i < mix[player].size(); ++i) {
        mix[player][i] = w * a[player][i] + (1 - w) * b[player][i];
      }
      CHECK(std::abs(Ev(g, player, mix) - (w * Ev(g, player, a) +
                                           (1 - w) * Ev(g, player, b))) <
            1e-12);
    }
  }
}

TEST_CASE("gradient constants") {
  CHECK(ComputeGradientConstants(Benchmark("matching-pennies")) ==
        GradientConstants{4, -2, -4, 2});
  CHECK(ComputeGradientConstants(Benchmark("coordination")) ==
        GradientConstants{3, -1, 3, -2});
  CHECK(ComputeGradientConstants(Benchmark("tricky")) ==
        GradientConstants{-2, 1, 2, -1});
  CHECK_THROWS_AS(ComputeGradientConstants(Benchmark("shapleys")), ShapeError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pay(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> payoffs(8);
    for (auto& x : payoffs) x = pay(rng);
    const Game g("random", {2, 2}, payoffs);
    const auto got = ComputeGradientConstants(g);
    const auto want = oracle::Constants(g);
    CHECK(got.u1 == doctest::Approx(want.u1).epsilon(1e-12));
    CHECK(got.u2 == doctest::Approx(want.u2).epsilon(1e-12));
    CHECK(got.u3 == doctest::Approx(want.u3).epsilon(1e-12));
    CHECK(got.u4 == doctest::Approx(want.u4).epsilon(1e-12));
  }
}

TEST_CASE("gradient_2x2") {
  const Game mp = Benchmark("matching-pennies");
  CHECK(Gradient2x2(mp, 0, 0.5) == doctest::Approx(0));
  CHECK(Gradient2x2(mp, 0, 1.0) == doctest::Approx(2));
  CHECK(Gradient2x2(Benchmark("coordination"), 0, 0.0) == doctest::Approx(-1));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const char* name : {"matching-pennies", "coordination", "tricky",
                           "biased"}) {
    const Game g = Benchmark(name);
    for (int trial = 0; trial < 100; ++trial) {
      const double q = unit(rng);
      const double diff =
          oracle::Value(g, 0, {{1, 0}, {q, 1 - q}}) -
          oracle::Value(g, 0, {{0, 1}, {q, 1 - q}});
      CHECK(Gradient2x2(g, 0, q) == doctest::Approx(diff).epsilon(1e-12));
      const double col =
          oracle::Value(g, 1, {{q, 1 - q}, {1, 0}}) -
          oracle::Value(g, 1, {{q, 1 - q}, {0, 1}});
      CHECK(Gradient2x2(g, 1, q) == doctest::Approx(col).epsilon(1e-12));
    }
  }
}

TEST_CASE("nash_2x2 examples") {
  auto mp = Nash2x2(Benchmark("matching-pennies"));
  REQUIRE(mp.size() == 1);
  CHECK(mp[0].kind == NashKind::kMixed);
  CHECK(mp[0].policy[0][0] == doctest::Approx(0.5));
  CHECK(mp[0].policy[1][0] == doctest::Approx(0.5));

  auto coord = Nash2x2(Benchmark("coordination"));
  REQUIRE(coord.size() == 2);
  for (const auto& ne : coord) {
    CHECK(ne.kind == NashKind::kPure);
    CHECK(ne.policy[0][0] == ne.policy[1][0]);
  }

  auto biased = Nash2x2(Benchmark("biased"));
  REQUIRE(biased.size() == 1);
  CHECK(biased[0].policy[0][0] == doctest::Approx(0.15));
  CHECK(biased[0].policy[1][0] == doctest::Approx(0.85));
}

TEST_CASE("every reported equilibrium survives a deviation sweep") {
  for (const auto& name : BenchmarkNames()) {
    const Game g = Benchmark(name);
    for (const auto& ne : ReferenceEquilibria(g)) {
      // Independent sweep: 101 points per 2-action policy, pure actions
      // otherwise (value is linear in the own policy).
      for (int player = 0; player < 2; ++player) {
        Joint joint = {ne.policy[0].vec(), ne.policy[1].vec()};
        const double base = oracle::Value(g, player, joint);
        const int k = g.num_actions(player);
        if (k == 2) {
          for (int i = 0; i <= 100; ++i) {
            joint[player] = {i / 100.0, 1 - i / 100.0};
            CHECK(oracle::Value(g, player, joint) - base <= 1e-9);
          }
        } else {
          for (int a = 0; a < k; ++a) {
            joint[player].assign(k, 0.0);
            joint[player][a] = 1.0;
            CHECK(oracle::Value(g, player, joint) - base <= 1e-9);
          }
        }
      }
      CHECK(MaxDeviationGain(g, ne.policy) <= 1e-9);
    }
  }
}

TEST_CASE("game construction checks shape") {
  CHECK_THROWS_AS(Game("bad", {2, 2}, std::vector<double>(7, 0.0)),
                  ShapeError);
  CHECK_THROWS_AS(Game("bad", {1, 2}, std::vector<double>(4, 0.0)),
                  ShapeError);
  CHECK_THROWS_AS(Game("bad", {2}, std::vector<double>(2, 0.0)), ShapeError);
  const int out_of_range[2] = {2, 0};
  CHECK_THROWS_AS(Benchmark("tricky").Rewards(out_of_range), LookupError);
}

TEST_CASE("game text round trip and errors") {
  for (const auto& name : BenchmarkNames()) {
    const Game g = Benchmark(name);
    const Game back = ParseGame(SerializeGame(g));
    CHECK(back.actions_per_player() == g.actions_per_player());
    CHECK(SerializeGame(back) == SerializeGame(g));
  }
  try {
    ParseGame("players = 2\nactions = 2 2\npayoff 0 0 = 1 1\nbogus = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 1);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    ParseGame("players = 2\nactions = 2 2\npayoff 0 0 = 1 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("3 joint actions") != std::string::npos);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace marl
