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

#include <map>
#include <utility>
#include <vector>

#include "doctest.h"
#include "marl/dtap.h"
#include "marl/errors.h"

namespace marl {
namespace {

DtapConfig Small(int width, int height) {
  DtapConfig c;
  c.width = width;
  c.height = height;
  c.source_x = 0;
  c.source_y = 0;
  c.source_width = width;
  c.source_height = height;
  c.arrival_rate = 0.0;
  c.horizon = 100;
  c.tau = 50;
  c.record_events = true;
  return c;
}

const DtapEvent* Find(const DtapWorld& w, EventKind kind, int agent) {
  for (const auto& e : w.events()) {
    if (e.kind == kind && e.agent == agent) return &e;
  }
  return nullptr;
}

TEST_SUITE("dtap") {

TEST_CASE("grid topology") {
  const auto g = BuildGrid(10, 10, 2);
  CHECK(g.num_agents() == 100);
  CHECK(g.neighbors[0].size() == 2);
  CHECK(g.neighbors[99].size() == 2);
  CHECK(g.neighbors[5].size() == 3);
  CHECK(g.neighbors[55].size() == 4);
  for (int i = 0; i < 100; ++i) {
    for (int j : g.neighbors[i]) CHECK(g.Delay(i, j) == 2);
  }
  CHECK(g.Delay(0, 11) == 3);  // ceil(2 * sqrt(2))
  CHECK(g.Delay(0, 99) == 26);
  CHECK(BuildGrid(1, 1, 2).neighbors[0].empty());
}

TEST_CASE("config validation") {
  DtapConfig c = Small(2, 2);
  c.source_width = 3;
  c.tau = 0;
  c.learner.algorithm = Algorithm::kIgaWolf;
  try {
    DtapWorld w(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 3);
  }
}

TEST_CASE("single agent: tst equals the service time") {
  DtapWorld w(Small(1, 1));
  CHECK(w.learner(0).policy.size() == 1);
  w.InjectTask(0);
  w.Run(200);
  REQUIRE(w.completed() == 1);
  const auto* start = Find(w, EventKind::kServiceStart, 0);
  REQUIRE(start != nullptr);
  const int d = static_cast<int>(start->value);
  const auto& done = w.completed_log()[0];
  CHECK(done.tst == d);
  CHECK(done.routing == 0);
  CHECK(done.wait == 0);
  CHECK(done.hops == 0);
  const auto* reward = Find(w, EventKind::kReward, 0);
  REQUIRE(reward != nullptr);
  CHECK(reward->value == -d);
}

TEST_CASE("two agents: forwarded task") {
  DtapConfig c = Small(2, 1);
  c.learner.algorithm = Algorithm::kFixed;
  DtapWorld w(c);
  w.mutable_learner(0).policy = Policy::Pure(2, 1);  // forward to B
  w.mutable_learner(1).policy = Policy::Pure(2, 0);  // execute locally
  w.Run(4);
  w.InjectTask(0);
  w.Run(300);
  REQUIRE(w.completed() == 1);

  const auto* sent = Find(w, EventKind::kRequestSent, 0);
  const auto* delivered = Find(w, EventKind::kRequestDelivered, 1);
  REQUIRE(sent != nullptr);
  REQUIRE(delivered != nullptr);
  CHECK(sent->tick == 5);
  CHECK(delivered->tick == 7);

  const int d = static_cast<int>(Find(w, EventKind::kServiceStart, 1)->value);
  const auto& done = w.completed_log()[0];
  CHECK(done.tst == 2 + d);
  CHECK(done.routing == 2);
  CHECK(done.hops == 1);
  CHECK(Find(w, EventKind::kReward, 1)->value == -d);
  const auto* reward_a = Find(w, EventKind::kReward, 0);
  REQUIRE(reward_a != nullptr);
  CHECK(reward_a->value == -(2 + d));
  CHECK(reward_a->peer == 1);
  CHECK(Find(w, EventKind::kUpdateSent, 1)->value == d);
  CHECK(w.InFlight() == 0);
}

TEST_CASE("zero arrivals change only the clock") {
  DtapConfig c = Small(3, 3);
  DtapWorld w(c);
  const auto before = w.learner(4).policy;
  w.Run(1000);
  CHECK(w.clock() == 1000);
  CHECK(w.generated() == 0);
  CHECK(w.events().empty());
  CHECK(w.learner(4).policy == before);
  CHECK_FALSE(w.Atst(1000).has_value());
  CHECK_THROWS_AS(w.Atst(1001), DomainError);
  const auto r = RunDtap(c);
  for (const auto& win : r.windows) CHECK_FALSE(win.atst.has_value());
  CHECK_FALSE(SteadyAtst(r).has_value());
}

TEST_CASE("busy world keeps its invariants") {
  DtapConfig c = Small(4, 4);
  c.source_x = 1;
  c.source_y = 1;
  c.source_width = 2;
  c.source_height = 2;
  c.arrival_rate = 0.3;
  c.learner.eta = 0.001;
  DtapWorld w(c);
  for (int t = 0; t < 3000; ++t) {
    w.Step();
    REQUIRE(w.generated() == w.completed() + w.InFlight());
    if (t % 100 == 0) {
      for (int i = 0; i < 16; ++i) {
        REQUIRE(IsValidPolicy(w.learner(i).policy.probs(), 0.0));
      }
    }
  }
  CHECK(w.completed() > 500);
  CHECK(w.timing_violations() == 0);
  CHECK(w.fifo_violations() == 0);
  CHECK(w.decomposition_failures() == 0);
  for (const auto& t : w.completed_log()) {
    REQUIRE(t.tst == t.routing + t.wait + t.service);
  }

  // Message timing and UPDATE contents, rebuilt from the event log.
  std::map<std::pair<long long, int>, std::vector<long long>> received;
  std::map<long long, long long> completion;
  std::map<std::pair<long long, int>, std::vector<long long>> sent;
  for (const auto& e : w.events()) {
    if (e.kind == EventKind::kArrival || e.kind == EventKind::kRequestDelivered) {
      received[{e.task, e.agent}].push_back(e.tick);
    }
    if (e.kind == EventKind::kComplete) completion[e.task] = e.tick;
    if (e.kind == EventKind::kRequestSent) {
      sent[{e.task, e.peer}].push_back(e.tick);
    }
  }
  int updates = 0;
  for (const auto& e : w.events()) {
    if (e.kind == EventKind::kRequestDelivered) {
      const auto& ticks = sent.at({e.task, e.agent});
      bool match = false;
      for (long long s : ticks) {
        match |= e.tick - s == w.topology().Delay(e.peer, e.agent);
      }
      CHECK(match);
    }
    if (e.kind == EventKind::kUpdateSent) {
      const auto& r = received.at({e.task, e.agent});
      if (r.size() == 1) {
        CHECK(e.value == completion.at(e.task) - r[0]);
        ++updates;
      }
    }
  }
  CHECK(updates > 100);

  // Windowed mean against the completion log.
  const long long end = 2500;
  double sum = 0;
  int n = 0;
  for (const auto& t : w.completed_log()) {
    if (t.completion_tick > end - c.tau && t.completion_tick <= end) {
      sum += t.tst;
      ++n;
    }
  }
  REQUIRE(n > 0);
  CHECK(*w.Atst(end) == doctest::Approx(sum / n));
}

TEST_CASE("identical seeds give identical event logs") {
  DtapConfig c = Small(3, 3);
  c.arrival_rate = 0.1;
  c.horizon = 2000;
  const auto a = RunDtap(c);
  const auto b = RunDtap(c);
  CHECK(a.digest == b.digest);
  CHECK(a.completed == b.completed);
  c.seed = 2;
  CHECK(RunDtap(c).digest != a.digest);

  DtapWorld w1(c), w2(c);
  w1.Run(500);
  w2.Run(500);
  REQUIRE(w1.events().size() == w2.events().size());
  for (std::size_t i = 0; i < w1.events().size(); ++i) {
    CHECK(w1.events()[i].tick == w2.events()[i].tick);
    CHECK(w1.events()[i].task == w2.events()[i].task);
    CHECK(w1.events()[i].value == w2.events()[i].value);
  }
}

TEST_CASE("steady atst weights windows by task count") {
  DtapResult r;
  r.windows = {{100, 1000.0, 5, 0}, {200, 10.0, 1, 0}, {300, 30.0, 3, 0},
               {400, std::nullopt, 0, 0}};
  // Final 25% is the last window only, which has no samples.
  CHECK_FALSE(SteadyAtst(r).has_value());
  // Final half: (30 * 3) / 3.
  CHECK(*SteadyAtst(r, 0.5) == doctest::Approx(30.0));
  // Final three windows: (10 + 90) / 4.
  CHECK(*SteadyAtst(r, 0.75) == doctest::Approx(25.0));
}

}  // TEST_SUITE

}  // namespace
}  // namespace marl
