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

#ifndef MARL_DTAP_H_
#define MARL_DTAP_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "marl/learners.h"
#include "marl/rng.h"

namespace marl {

// Agents on a width x height grid with 4-adjacency. Agent id = y * width + x.
// Neighbour order: left, right, up, down (absent ones skipped).
struct GridTopology {
  int width = 0;
  int height = 0;
  int adjacent_delay = 2;
  std::vector<std::vector<int>> neighbors;

  int num_agents() const { return width * height; }
  // adjacent_delay times the Euclidean grid distance, rounded up.
  int Delay(int from, int to) const;
};

// Throws DomainError for non-positive sizes or delay.
GridTopology BuildGrid(int width, int height, int adjacent_delay);

struct DtapConfig {
  int width = 10;
  int height = 10;
  int adjacent_delay = 2;
  double service_rate = 0.1;  // tasks per tick per agent
  // Rectangle of source agents (grid coordinates, inclusive corner + size).
  int source_x = 3;
  int source_y = 3;
  int source_width = 4;
  int source_height = 4;
  double arrival_rate = 0.5;  // Poisson mean per source agent per tick
  LearnerParams learner{Algorithm::kWpl, 0.0001, 1.0, 0.05};
  long long horizon = 200000;
  long long tau = 500;  // ATST window
  std::uint64_t seed = 1;
  bool record_events = false;

  friend bool operator==(const DtapConfig&, const DtapConfig&) = default;
};

// Throws ConfigError listing every problem.
void ValidateDtapConfig(const DtapConfig& config);

enum class EventKind {
  kArrival,
  kRequestSent,
  kRequestDelivered,
  kEnqueue,
  kServiceStart,
  kComplete,
  kUpdateSent,
  kUpdateDelivered,
  kReward,
};

struct DtapEvent {
  long long tick = 0;
  EventKind kind = EventKind::kArrival;
  int agent = 0;
  int peer = -1;      // other end of a message
  long long task = 0;
  double value = 0.0;  // reward, R, or service duration
};

struct CompletedTask {
  long long id = 0;
  long long completion_tick = 0;
  int tst = 0;
  int hops = 0;  // forwarding decisions
  int routing = 0;
  int wait = 0;
  int service = 0;
};

class DtapWorld {
 public:
  explicit DtapWorld(const DtapConfig& config);

  // Advances the clock by one tick and processes it: deliver messages, draw
  // arrivals, route requests, advance service, apply rewards.
  void Step();
  void Run(long long ticks);

  // Last processed tick (0 before the first Step).
  long long clock() const { return clock_; }
  const DtapConfig& config() const { return config_; }
  const GridTopology& topology() const { return topology_; }

  const LearnerState& learner(int agent) const { return agents_.at(agent).learner; }
  LearnerState& mutable_learner(int agent) { return agents_.at(agent).learner; }
  std::size_t queue_length(int agent) const {
    return agents_.at(agent).queue.size();
  }

  // Adds a task that arrives at `agent` during the next Step.
  void InjectTask(int agent);

  long long generated() const { return generated_; }
  long long completed() const { return static_cast<long long>(log_.size()); }
  // Tasks in queues, in service, or carried by an undelivered REQUEST,
  // counted directly from the world state.
  long long InFlight() const;
  int max_hops() const { return max_hops_; }
  long long decomposition_failures() const { return decomposition_failures_; }
  long long timing_violations() const { return timing_violations_; }
  long long fifo_violations() const { return fifo_violations_; }
  std::uint64_t digest() const { return digest_; }

  const std::vector<CompletedTask>& completed_log() const { return log_; }
  const std::vector<DtapEvent>& events() const { return events_; }

  // Mean TST of tasks completed in (window_end - tau, window_end]; nullopt
  // when none. Throws DomainError if window_end > clock().
  std::optional<double> Atst(long long window_end) const;

 private:
  struct Hop {
    int agent = 0;
    int action = 0;
    long long received = 0;
  };
  struct Task {
    long long birth = 0;
    std::vector<Hop> hops;
    long long routing = 0;
    long long enqueued = 0;
    long long started = 0;
    long long sequence = 0;  // enqueue order at the executing agent
  };
  enum class MessageKind { kRequest, kUpdate };
  struct Message {
    MessageKind kind = MessageKind::kRequest;
    int from = 0;
    int to = 0;
    long long task = 0;
    long long sent = 0;
    long long deliver = 0;
    int hop = 0;             // UPDATE: index of the receiving hop
    long long completion = 0;  // UPDATE
    long long r = 0;          // UPDATE
    long long order = 0;     // tie-break for equal delivery ticks
  };
  struct Later {
    bool operator()(const Message& a, const Message& b) const {
      return a.deliver != b.deliver ? a.deliver > b.deliver : a.order > b.order;
    }
  };
  struct Agent {
    LearnerState learner;
    std::deque<long long> queue;
    long long serving = -1;
    long long service_end = 0;
    long long next_sequence = 0;
    long long last_started_sequence = -1;
    std::vector<long long> inbox;
    Rng rng;
  };

  void Emit(EventKind kind, int agent, int peer, long long task, double value);
  void Send(Message message);
  void Reward(int agent, int action, double reward);
  void Deliver(const Message& message);
  void Decide(int agent, long long task_id);
  void Complete(int agent);

  DtapConfig config_;
  GridTopology topology_;
  std::vector<Agent> agents_;
  std::vector<int> sources_;
  std::vector<int> injected_;
  std::unordered_map<long long, Task> tasks_;
  std::priority_queue<Message, std::vector<Message>, Later> messages_;
  std::vector<CompletedTask> log_;
  std::vector<DtapEvent> events_;
  long long clock_ = 0;
  long long next_task_ = 0;
  long long next_order_ = 0;
  long long generated_ = 0;
  long long requests_in_transit_ = 0;
  int max_hops_ = 0;
  long long decomposition_failures_ = 0;
  long long timing_violations_ = 0;
  long long fifo_violations_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

struct DtapWindow {
  long long window_end = 0;
  std::optional<double> atst;
  long long completed = 0;
  int max_hops = 0;  // most forwarding decisions among tasks in the window
};

struct DtapResult {
  std::vector<DtapWindow> windows;
  long long generated = 0;
  long long completed = 0;
  std::uint64_t digest = 0;
};

// Runs the scenario for config.horizon ticks, one window every tau ticks.
DtapResult RunDtap(const DtapConfig& config);

// Task-weighted mean ATST over windows ending in the final `fraction` of
// the run; nullopt if no task completed there.
std::optional<double> SteadyAtst(const DtapResult& result, double fraction = 0.25);

}  // namespace marl

#endif  // MARL_DTAP_H_
