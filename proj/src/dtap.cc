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

#include "marl/dtap.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "marl/errors.h"

namespace marl {

int GridTopology::Delay(int from, int to) const {
  const int dx = from % width - to % width;
  const int dy = from / width - to / width;
  return static_cast<int>(
      std::ceil(adjacent_delay * std::sqrt(double(dx * dx + dy * dy)) - 1e-9));
}

GridTopology BuildGrid(int width, int height, int adjacent_delay) {
  if (width < 1 || height < 1) throw DomainError("grid must be at least 1x1");
  if (adjacent_delay < 1) throw DomainError("adjacent delay must be >= 1");
  GridTopology g;
  g.width = width;
  g.height = height;
  g.adjacent_delay = adjacent_delay;
  g.neighbors.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      auto& n = g.neighbors[y * width + x];
      if (x > 0) n.push_back(y * width + x - 1);
      if (x + 1 < width) n.push_back(y * width + x + 1);
      if (y > 0) n.push_back((y - 1) * width + x);
      if (y + 1 < height) n.push_back((y + 1) * width + x);
    }
  }
  return g;
}

void ValidateDtapConfig(const DtapConfig& c) {
  std::vector<std::string> problems;
  if (c.width < 1 || c.height < 1) problems.push_back("grid must be at least 1x1");
  if (c.adjacent_delay < 1) problems.push_back("adjacent_delay must be >= 1");
  if (!(c.service_rate > 0.0)) problems.push_back("service_rate must be > 0");
  if (!(c.arrival_rate >= 0.0)) problems.push_back("arrival_rate must be >= 0");
  if (c.source_width < 0 || c.source_height < 0 || c.source_x < 0 ||
      c.source_y < 0 || c.source_x + c.source_width > c.width ||
      c.source_y + c.source_height > c.height) {
    problems.push_back("source rectangle must lie inside the grid");
  }
  if (c.horizon < 0) problems.push_back("horizon must be >= 0");
  if (c.tau < 1) problems.push_back("tau must be >= 1");
  if (c.learner.algorithm == Algorithm::kIgaWolf) {
    problems.push_back("iga-wolf needs a known equilibrium; not available here");
  }
  if (!(c.learner.eta > 0.0)) problems.push_back("eta must be > 0");
  if (!(c.learner.alpha > 0.0 && c.learner.alpha <= 1.0)) {
    problems.push_back("alpha must be in (0, 1]");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

DtapWorld::DtapWorld(const DtapConfig& config)
    : config_(config),
      topology_(BuildGrid(config.width, config.height, config.adjacent_delay)) {
  ValidateDtapConfig(config);
  const int n = topology_.num_agents();
  agents_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int k = 1 + static_cast<int>(topology_.neighbors[i].size());
    LearnerParams params = config.learner;
    // A lone agent has a single action; no floor can bind.
    if (k * params.epsilon > 1.0) params.epsilon = 1.0 / k;
    agents_.push_back(Agent{MakeLearner(params, Policy::Uniform(k)), {}, -1, 0,
                            0, -1, {}, Rng(config.seed, 0, i)});
  }
  for (int y = config.source_y; y < config.source_y + config.source_height; ++y) {
    for (int x = config.source_x; x < config.source_x + config.source_width;
         ++x) {
      sources_.push_back(y * config.width + x);
    }
  }
}

void DtapWorld::Emit(EventKind kind, int agent, int peer, long long task,
                     double value) {
  const DtapEvent e{clock_, kind, agent, peer, task, value};
  // FNV-1a over the event fields.
  auto mix = [this](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      digest_ = (digest_ ^ bytes[i]) * 0x100000001b3ULL;
    }
  };
  const int k = static_cast<int>(kind);
  mix(&e.tick, sizeof e.tick);
  mix(&k, sizeof k);
  mix(&e.agent, sizeof e.agent);
  mix(&e.peer, sizeof e.peer);
  mix(&e.task, sizeof e.task);
  mix(&e.value, sizeof e.value);
  if (config_.record_events) events_.push_back(e);
}

void DtapWorld::Send(Message m) {
  m.sent = clock_;
  m.deliver = clock_ + topology_.Delay(m.from, m.to);
  m.order = next_order_++;
  if (m.kind == MessageKind::kRequest) {
    ++requests_in_transit_;
    Emit(EventKind::kRequestSent, m.from, m.to, m.task, 0.0);
  } else {
    Emit(EventKind::kUpdateSent, m.from, m.to, m.task, double(m.r));
  }
  messages_.push(m);
}

void DtapWorld::Reward(int agent, int action, double reward) {
  Emit(EventKind::kReward, agent, action, -1, reward);
  LearnerState& s = agents_[agent].learner;
  if (s.algorithm == Algorithm::kFixed) return;
  s.value = UpdateValue(std::move(s.value), action, reward);
  const GradientEstimate g = EstimateGradient(s);
  s = marl::Step(std::move(s), g);
}

void DtapWorld::Deliver(const Message& m) {
  if (m.deliver - m.sent != topology_.Delay(m.from, m.to)) ++timing_violations_;
  if (m.kind == MessageKind::kRequest) {
    --requests_in_transit_;
    Emit(EventKind::kRequestDelivered, m.to, m.from, m.task, 0.0);
    agents_[m.to].inbox.push_back(m.task);
    return;
  }
  Emit(EventKind::kUpdateDelivered, m.to, m.from, m.task, double(m.r));
  Task& task = tasks_.at(m.task);
  const Hop& hop = task.hops[m.hop];
  Reward(m.to, hop.action, -double(topology_.Delay(m.to, m.from) + m.r));
  if (m.hop > 0) {
    Message up;
    up.kind = MessageKind::kUpdate;
    up.from = m.to;
    up.to = task.hops[m.hop - 1].agent;
    up.task = m.task;
    up.hop = m.hop - 1;
    up.completion = m.completion;
    up.r = m.completion - hop.received;
    Send(up);
  } else {
    tasks_.erase(m.task);
  }
}

void DtapWorld::Decide(int agent, long long id) {
  Agent& a = agents_[agent];
  Task& task = tasks_.at(id);
  const int action = a.rng.Categorical(a.learner.policy.probs());
  task.hops.push_back({agent, action, clock_});
  if (action == 0) {
    task.enqueued = clock_;
    task.sequence = a.next_sequence++;
    a.queue.push_back(id);
    Emit(EventKind::kEnqueue, agent, -1, id, 0.0);
    return;
  }
  Message m;
  m.kind = MessageKind::kRequest;
  m.from = agent;
  m.to = topology_.neighbors[agent][action - 1];
  m.task = id;
  task.routing += topology_.Delay(m.from, m.to);
  Send(m);
}

void DtapWorld::Complete(int agent) {
  Agent& a = agents_[agent];
  const long long id = a.serving;
  a.serving = -1;
  Task& task = tasks_.at(id);
  CompletedTask done;
  done.id = id;
  done.completion_tick = clock_;
  done.tst = static_cast<int>(clock_ - task.birth);
  done.hops = static_cast<int>(task.hops.size()) - 1;
  done.routing = static_cast<int>(task.routing);
  done.wait = static_cast<int>(task.started - task.enqueued);
  done.service = static_cast<int>(clock_ - task.started);
  if (done.tst != done.routing + done.wait + done.service) {
    ++decomposition_failures_;
  }
  max_hops_ = std::max(max_hops_, done.hops);
  log_.push_back(done);
  Emit(EventKind::kComplete, agent, -1, id, double(done.tst));

  const Hop& last = task.hops.back();
  const long long r = clock_ - last.received;
  Reward(agent, 0, -double(r));
  if (task.hops.size() > 1) {
    Message up;
    up.kind = MessageKind::kUpdate;
    up.from = agent;
    up.hop = static_cast<int>(task.hops.size()) - 2;
    up.to = task.hops[up.hop].agent;
    up.task = id;
    up.completion = clock_;
    up.r = r;
    Send(up);
  } else {
    tasks_.erase(id);
  }
}

void DtapWorld::InjectTask(int agent) {
  if (agent < 0 || agent >= topology_.num_agents()) {
    throw LookupError("no agent " + std::to_string(agent));
  }
  injected_.push_back(agent);
}

void DtapWorld::Step() {
  ++clock_;
  while (!messages_.empty() && messages_.top().deliver <= clock_) {
    const Message m = messages_.top();
    messages_.pop();
    Deliver(m);
  }

  auto arrive = [this](int agent) {
    const long long id = next_task_++;
    tasks_[id].birth = clock_;
    ++generated_;
    Emit(EventKind::kArrival, agent, -1, id, 0.0);
    agents_[agent].inbox.push_back(id);
  };
  for (int s : sources_) {
    const int n = agents_[s].rng.Poisson(config_.arrival_rate);
    for (int i = 0; i < n; ++i) arrive(s);
  }
  for (int agent : injected_) arrive(agent);
  injected_.clear();

  for (int i = 0; i < topology_.num_agents(); ++i) {
    auto inbox = std::move(agents_[i].inbox);
    agents_[i].inbox.clear();
    for (long long id : inbox) Decide(i, id);
  }

  for (int i = 0; i < topology_.num_agents(); ++i) {
    Agent& a = agents_[i];
    if (a.serving >= 0 && a.service_end == clock_) Complete(i);
    if (a.serving < 0 && !a.queue.empty()) {
      const long long id = a.queue.front();
      a.queue.pop_front();
      Task& task = tasks_.at(id);
      if (task.sequence <= a.last_started_sequence) ++fifo_violations_;
      a.last_started_sequence = task.sequence;
      task.started = clock_;
      const long long d = std::max<long long>(
          1, static_cast<long long>(
                 std::ceil(a.rng.Exponential(config_.service_rate))));
      a.serving = id;
      a.service_end = clock_ + d;
      Emit(EventKind::kServiceStart, i, -1, id, double(d));
    }
  }
}

void DtapWorld::Run(long long ticks) {
  for (long long t = 0; t < ticks; ++t) Step();
}

long long DtapWorld::InFlight() const {
  long long n = requests_in_transit_;
  for (const Agent& a : agents_) {
    n += static_cast<long long>(a.queue.size() + a.inbox.size());
    if (a.serving >= 0) ++n;
  }
  return n;
}

std::optional<double> DtapWorld::Atst(long long window_end) const {
  if (window_end > clock_) throw DomainError("window end is in the future");
  auto by_tick = [](const CompletedTask& c, long long t) {
    return c.completion_tick < t;
  };
  auto lo = std::lower_bound(log_.begin(), log_.end(),
                             window_end - config_.tau + 1, by_tick);
  auto hi = std::lower_bound(log_.begin(), log_.end(), window_end + 1, by_tick);
  if (lo == hi) return std::nullopt;
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) sum += it->tst;
  return sum / static_cast<double>(hi - lo);
}

DtapResult RunDtap(const DtapConfig& config) {
  DtapWorld world(config);
  DtapResult result;
  const auto& log = world.completed_log();
  std::size_t seen = 0;
  for (long long end = config.tau; end <= config.horizon; end += config.tau) {
    world.Run(end - world.clock());
    DtapWindow w;
    w.window_end = end;
    w.atst = world.Atst(end);
    w.completed = static_cast<long long>(log.size() - seen);
    for (; seen < log.size(); ++seen) w.max_hops = std::max(w.max_hops, log[seen].hops);
    result.windows.push_back(w);
  }
  world.Run(config.horizon - world.clock());
  result.generated = world.generated();
  result.completed = world.completed();
  result.digest = world.digest();
  return result;
}

std::optional<double> SteadyAtst(const DtapResult& result, double fraction) {
  if (result.windows.empty()) return std::nullopt;
  const double cutoff =
      double(result.windows.back().window_end) * (1.0 - fraction);
  double sum = 0.0;
  long long count = 0;
  for (const auto& w : result.windows) {
    if (double(w.window_end) <= cutoff || !w.atst) continue;
    sum += *w.atst * double(w.completed);
    count += w.completed;
  }
  if (count == 0) return std::nullopt;
  return sum / double(count);
}

}  // namespace marl
