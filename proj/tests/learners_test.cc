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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "marl/errors.h"
#include "marl/games.h"
#include "marl/learners.h"
#include "oracles.h"

namespace marl {
namespace {

LearnerState Make(Algorithm algorithm, std::vector<double> policy,
                  double eta = 0.002, double epsilon = 0.0) {
  LearnerParams params;
  params.algorithm = algorithm;
  params.eta = eta;
  params.epsilon = epsilon;
  return MakeLearner(params, Policy(std::move(policy)));
}

TEST_SUITE("learners") {

TEST_CASE("algorithm names round trip") {
  for (Algorithm a : {Algorithm::kIga, Algorithm::kGiga, Algorithm::kIgaWolf,
                      Algorithm::kPhcWolf, Algorithm::kGigaWolf,
                      Algorithm::kWpl, Algorithm::kFixed}) {
    CHECK(ParseAlgorithm(AlgorithmName(a)) == a);
  }
  CHECK_THROWS_AS(ParseAlgorithm("sarsa"), LookupError);
}

TEST_CASE("learner parameter validation aggregates problems") {
  LearnerParams params;
  params.eta = -1;
  params.alpha = 2;
  try {
    MakeLearner(params, Policy::Uniform(2));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 2);
  }
}

TEST_CASE("update_value") {
  ValueEstimate v{{3.0, -7.0}, 1.0};
  CHECK(UpdateValue(v, 1, 5.0).r_hat[1] == 5.0);
  v = {{0.0, 0.0}, 0.1};
  CHECK(UpdateValue(v, 0, 1.0).r_hat[0] == doctest::Approx(0.1));
  v = {{1.0, 0.0}, 0.1};
  CHECK(UpdateValue(v, 0, 1.0).r_hat[0] == 1.0);
  CHECK(UpdateValue(v, 0, 1.0).r_hat[1] == 0.0);
  CHECK_THROWS_AS(UpdateValue(v, 2, 1.0), LookupError);

  // Constant stream c: the error shrinks by exactly (1 - alpha) per update.
  for (double alpha : {0.01, 0.1, 0.5, 1.0}) {
    ValueEstimate e{{10.0}, alpha};
    const double c = -2.5;
    for (int i = 0; i < 20; ++i) {
      const double before = std::abs(e.r_hat[0] - c);
      e = UpdateValue(e, 0, c);
      CHECK(std::abs(e.r_hat[0] - c) ==
            doctest::Approx((1 - alpha) * before).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_gradient") {
  auto s = Make(Algorithm::kWpl, {0.2, 0.3, 0.5});
  s.value.r_hat = {4.0, 4.0, 4.0};
  for (double g : EstimateGradient(s).g) CHECK(g == doctest::Approx(0.0));

  s = Make(Algorithm::kWpl, {0.5, 0.5});
  s.value.r_hat = {1, -1};
  CHECK(EstimateGradient(s).g == std::vector<double>{1, -1});

  s = Make(Algorithm::kWpl, {0.9, 0.1});
  s.value.r_hat = {2, 1};
  const auto g = EstimateGradient(s).g;
  CHECK(g[0] == doctest::Approx(0.1));
  CHECK(g[1] == doctest::Approx(-0.9));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 3;
    std::vector<double> p(k);
    double sum = 0;
    for (auto& x : p) sum += (x = unit(rng));
    for (auto& x : p) x /= sum;
    auto st = Make(Algorithm::kWpl, p);
    for (auto& r : st.value.r_hat) r = 10 * unit(rng) - 5;
    const auto est = EstimateGradient(st).g;
    double dot = 0;
    for (int a = 0; a < k; ++a) dot += st.policy[a] * est[a];
    CHECK(std::abs(dot) < 1e-12);
  }
}

TEST_CASE("exact_gradient examples and finite differences") {
  const Game mp = Benchmark("matching-pennies");
  auto g = ExactGradient(mp, 0, {Policy::Uniform(2), Policy::Uniform(2)}).g;
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(0.0));
  g = ExactGradient(Benchmark("coordination"), 0,
                    {Policy::Uniform(2), Policy::Pure(2, 0)}).g;
  CHECK(g[0] == doctest::Approx(2.0));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (const auto& name : BenchmarkNames()) {
    const Game game = Benchmark(name);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<double>> joint(2);
      JointPolicy pi;
      for (int i = 0; i < 2; ++i) {
        const int k = game.num_actions(i);
        joint[i].resize(k);
        if (trial < 2 * k && trial % k == 0) {
          // Pure opponent policies.
          joint[i].assign(k, 0.0);
          joint[i][(trial / k) % k] = 1.0;
        } else {
          double s = 0;
          for (auto& x : joint[i]) s += (x = unit(rng));
          for (auto& x : joint[i]) x /= s;
        }
        pi.emplace_back(joint[i]);
      }
      for (int player = 0; player < 2; ++player) {
        const auto exact = ExactGradient(game, player, pi).g;
        const int k = game.num_actions(player);
        for (int a = 0; a < k; ++a) {
          std::vector<double> dir(k);
          if (k == 2) {
            dir[a] = 1;
            dir[1 - a] = -1;
          } else {
            for (int b = 0; b < k; ++b) dir[b] = -joint[player][b];
            dir[a] += 1;
          }
          const double fd =
              oracle::DirectionalDerivative(game, player, joint, dir);
          CHECK(std::abs(exact[a] - fd) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("wpl_step") {
  auto s = Make(Algorithm::kWpl, {0.5, 0.5}, 0.002, 0.1);
  auto next = WplStep(s, {{0.4, -0.4}});
  CHECK(next.policy[0] - 0.5 == doctest::Approx(0.0004).epsilon(1e-9));
  CHECK(WplStep(s, {{0.0, 0.0}}).policy == s.policy);

  s = Make(Algorithm::kWpl, {1.0, 0.0});
  CHECK(WplStep(s, {{1.0, -1.0}}).policy == s.policy);

  CHECK_THROWS_AS(WplStep(s, {{1.0}}), ShapeError);

  // Sign preservation and magnitude bound, on antisymmetric 2-action
  // gradients where the projection is inactive.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = 0.1 + 0.8 * unit(rng);
    const double d = 4 * unit(rng) - 2;
    auto st = Make(Algorithm::kWpl, {p, 1 - p}, 0.01, 0.0);
    const auto out = WplStep(st, {{d, -d}});
    for (int a = 0; a < 2; ++a) {
      const double ga = a == 0 ? d : -d;
      const double delta = out.policy[a] - st.policy[a];
      if (ga > 0) CHECK(delta > 0);
      if (ga < 0) CHECK(delta < 0);
      CHECK(std::abs(delta) <= 0.01 * std::abs(ga) + 1e-15);
    }
  }

  // Both branches agree as g -> 0.
  s = Make(Algorithm::kWpl, {0.3, 0.7});
  const auto up = WplStep(s, {{1e-12, -1e-12}});
  const auto down = WplStep(s, {{-1e-12, 1e-12}});
  CHECK(std::abs(up.policy[0] - s.policy[0]) < 1e-14);
  CHECK(std::abs(down.policy[0] - s.policy[0]) < 1e-14);
}

TEST_CASE("iga_step") {
  auto s = Make(Algorithm::kIga, {0.5, 0.5}, 0.002, 0.1);
  CHECK(IgaStep(s, {{0.0, 0.0}}).policy == s.policy);
  CHECK(IgaStep(s, {{0.4, -0.4}}).policy[0] ==
        doctest::Approx(0.5008).epsilon(1e-12));
  const auto out = IgaStep(s, {{500.0, -500.0}});
  CHECK(IsValidPolicy(out.policy.probs(), 0.1));
  CHECK(out.policy[0] == doctest::Approx(0.9));
}

TEST_CASE("giga_wolf_step") {
  auto s = Make(Algorithm::kGigaWolf, {0.5, 0.5}, 0.03);
  CHECK(s.z.has_value());
  auto out = GigaWolfStep(s, {{1.0, -1.0}});
  CHECK(out.policy[0] == doctest::Approx(0.52));
  CHECK(out.policy[1] == doctest::Approx(0.48));
  CHECK((*out.z)[0] == doctest::Approx(0.51));

  // z pinned at a vertex: z does not move, so pi = pi_hat.
  s.z = Policy({1.0, 0.0});
  out = GigaWolfStep(s, {{1.0, -1.0}});
  CHECK(out.policy[0] == doctest::Approx(0.53));
  CHECK(*out.z == *s.z);

  // z_new lands on pi_hat: degenerate denominator, pi = pi_hat.
  s.z = Policy({0.5 + 0.02, 0.5 - 0.02});
  out = GigaWolfStep(s, {{1.0, -1.0}});
  CHECK(out.policy[0] == doctest::Approx(0.53));

  out = GigaWolfStep(s, {{0.0, 0.0}});
  CHECK(out.policy == s.policy);
  CHECK(*out.z == *s.z);
}

TEST_CASE("phc_wolf_step") {
  auto s = Make(Algorithm::kPhcWolf, {0.5, 0.5}, 0.002);
  s.value.r_hat = {1.0, 0.0};
  // First step: average equals policy, tie, slow rate.
  auto out = PhcWolfStep(s, {{0.5, -0.5}});
  CHECK(out.policy[0] == doctest::Approx(0.5 + 0.002 * 0.5));
  CHECK(out.update_count == 1);

  // Policy (0.9, 0.1) against average (0.5, 0.5) under r_hat (0, 1):
  // 0.1 < 0.5, so the fast rate applies.
  s = Make(Algorithm::kPhcWolf, {0.9, 0.1}, 0.002);
  s.average_policy = {0.5, 0.5};
  s.update_count = 1000000000;
  s.value.r_hat = {0.0, 1.0};
  out = PhcWolfStep(s, {{-0.1, 0.1}});
  CHECK(out.policy[0] == doctest::Approx(0.9 - 2 * 0.002 * 0.1));

  // Current better than average: slow rate.
  s.value.r_hat = {1.0, 0.0};
  out = PhcWolfStep(s, {{-0.1, 0.1}});
  CHECK(out.policy[0] == doctest::Approx(0.9 - 0.002 * 0.1));
}

TEST_CASE("iga_wolf_step") {
  const Game mp = Benchmark("matching-pennies");
  auto s = Make(Algorithm::kIgaWolf, {0.5, 0.5}, 0.002);
  s.oracle_ne = Policy::Uniform(2);
  JointPolicy joint{s.policy, Policy({0.9, 0.1})};
  // At the equilibrium policy: tie, win rate.
  auto out = IgaWolfStep(s, {{1.0, -1.0}}, mp, 0, joint);
  CHECK(out.policy[0] == doctest::Approx(0.5 + 0.002));

  s = Make(Algorithm::kIgaWolf, {0.1, 0.9}, 0.002);
  s.oracle_ne = Policy::Uniform(2);
  joint[0] = s.policy;
  // V(0.1, 0.9) = -0.64 < V(0.5, 0.9) = 0: losing.
  CHECK(oracle::Value(mp, 0, {{0.1, 0.9}, {0.9, 0.1}}) <
        oracle::Value(mp, 0, {{0.5, 0.5}, {0.9, 0.1}}));
  out = IgaWolfStep(s, {{1.0, -1.0}}, mp, 0, joint);
  CHECK(out.policy[0] == doctest::Approx(0.1 + 2 * 0.002));
  CHECK(IgaWolfStep(s, {{0.0, 0.0}}, mp, 0, joint).policy == s.policy);

  s.oracle_ne.reset();
  CHECK_THROWS_AS(IgaWolfStep(s, {{1.0, -1.0}}, mp, 0, joint), ConfigError);
}

TEST_CASE("every step keeps the policy valid") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Algorithm algorithms[] = {Algorithm::kIga, Algorithm::kGiga,
                                  Algorithm::kPhcWolf, Algorithm::kGigaWolf,
                                  Algorithm::kWpl};
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 2 + trial % 3;
    const double eps = 0.2 / k * unit(rng);
    std::vector<double> p(k);
    double sum = 0;
    for (auto& x : p) sum += (x = unit(rng));
    for (auto& x : p) x /= sum;
    auto s = Make(algorithms[trial % 5], p, 0.5 * unit(rng), eps);
    for (auto& r : s.value.r_hat) r = 20 * unit(rng) - 10;
    GradientEstimate g{std::vector<double>(k)};
    for (auto& x : g.g) x = 20 * unit(rng) - 10;
    for (int i = 0; i < 3; ++i) {
      s = Step(std::move(s), g);
      CHECK(IsValidPolicy(s.policy.probs(), eps));
    }
    ++checked;
  }
  CHECK(checked == 10000);
}

}  // TEST_SUITE

}  // namespace
}  // namespace marl
