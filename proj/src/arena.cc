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

#include "marl/arena.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "marl/errors.h"
#include "marl/parallel.h"
#include "marl/rng.h"

namespace marl {
namespace {

JointPolicy InitialPolicies(const ArenaConfig& config) {
  if (!config.initial.empty()) return config.initial;
  JointPolicy out;
  for (int a : config.game.actions_per_player()) {
    out.push_back(Policy::Uniform(a));
  }
  return out;
}

std::optional<Policy> OracleEquilibrium(const Game& game, int player) {
  const auto equilibria = ReferenceEquilibria(game);
  for (const auto& ne : equilibria) {
    if (ne.kind == NashKind::kMixed) return ne.policy[player];
  }
  if (!equilibria.empty()) return equilibria.front().policy[player];
  return std::nullopt;
}

}  // namespace

void ValidateArenaConfig(const ArenaConfig& config) {
  std::vector<std::string> problems;
  const Game& game = config.game;
  if (config.steps < 1) problems.push_back("steps must be >= 1");
  if (config.runs < 1) problems.push_back("runs must be >= 1");
  if (static_cast<int>(config.learners.size()) != game.num_players()) {
    problems.push_back("need one learner per player (" +
                       std::to_string(game.num_players()) + "), got " +
                       std::to_string(config.learners.size()));
  }
  if (!config.initial.empty()) {
    if (static_cast<int>(config.initial.size()) != game.num_players()) {
      problems.push_back("initial joint policy has wrong number of players");
    } else {
      for (int i = 0; i < game.num_players(); ++i) {
        if (config.initial[i].size() != game.num_actions(i)) {
          problems.push_back("initial policy of player " + std::to_string(i) +
                             " has wrong length");
        }
      }
    }
  }
  for (std::size_t i = 0; i < config.learners.size(); ++i) {
    const auto& l = config.learners[i];
    const std::string who = "player " + std::to_string(i) + ": ";
    if (!(l.eta > 0.0)) problems.push_back(who + "eta must be > 0");
    if (!(l.alpha > 0.0 && l.alpha <= 1.0)) {
      problems.push_back(who + "alpha must lie in (0, 1]");
    }
    if (static_cast<int>(i) < game.num_players() &&
        (!(l.epsilon >= 0.0) || l.epsilon * game.num_actions(i) > 1.0)) {
      problems.push_back(who + "epsilon infeasible for the action count");
    }
    if (l.algorithm == Algorithm::kIgaWolf && !game.Is2x2() &&
        game.name() != "rock-paper-scissors" && game.name() != "shapleys") {
      problems.push_back(who + "iga-wolf needs a game with a known equilibrium");
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
}

Trajectory::Trajectory(std::vector<int> actions_per_player, long long steps)
    : actions_(std::move(actions_per_player)), steps_(steps) {
  for (int a : actions_) {
    offsets_.push_back(row_width_);
    row_width_ += a;
  }
  probs_.resize(static_cast<std::size_t>(steps_) * row_width_);
  sampled_.resize(static_cast<std::size_t>(steps_) * actions_.size());
  rewards_.resize(static_cast<std::size_t>(steps_) * actions_.size());
}

std::span<const double> Trajectory::Probs(long long row, int player) const {
  return std::span<const double>(probs_).subspan(
      row * row_width_ + offsets_[player], actions_[player]);
}

void Trajectory::Record(long long row, const JointPolicy& policies,
                        std::span<const int> sampled,
                        std::span<const double> rewards) {
  double* out = probs_.data() + row * row_width_;
  for (const auto& p : policies) out = std::copy(p.vec().begin(), p.vec().end(), out);
  std::copy(sampled.begin(), sampled.end(),
            sampled_.begin() + row * num_players());
  std::copy(rewards.begin(), rewards.end(),
            rewards_.begin() + row * num_players());
}

Trajectory RunArenaOnce(const ArenaConfig& config, int run) {
  const Game& game = config.game;
  const int n = game.num_players();
  const JointPolicy initial = InitialPolicies(config);

  std::vector<LearnerState> states;
  std::vector<Rng> rngs;
  for (int i = 0; i < n; ++i) {
    LearnerState s = MakeLearner(config.learners[i], initial[i]);
    if (s.algorithm == Algorithm::kIgaWolf) s.oracle_ne = OracleEquilibrium(game, i);
    states.push_back(std::move(s));
    rngs.emplace_back(config.seed, run, i);
  }

  Trajectory traj(game.actions_per_player(), config.steps);
  JointPolicy joint(n);
  std::vector<int> actions(n);
  std::vector<double> rewards(n);
  for (long long t = 0; t < config.steps; ++t) {
    for (int i = 0; i < n; ++i) {
      joint[i] = states[i].policy;
      actions[i] = rngs[i].Categorical(joint[i].probs());
    }
    const auto r = game.Rewards(actions);
    std::copy(r.begin(), r.end(), rewards.begin());
    // Synchronous play: every update sees the same pre-step joint policy.
    for (int i = 0; i < n; ++i) {
      LearnerState& s = states[i];
      if (s.algorithm == Algorithm::kFixed) continue;
      s.value = UpdateValue(std::move(s.value), actions[i], rewards[i]);
      const GradientEstimate g = config.gradient_mode == GradientMode::kExact
                                     ? ExactGradient(game, i, joint)
                                     : EstimateGradient(s);
      s = Step(std::move(s), g, WolfOracle{&game, i, &joint});
    }
    for (int i = 0; i < n; ++i) joint[i] = states[i].policy;
    traj.Record(t, joint, actions, rewards);
  }
  return traj;
}

std::vector<Trajectory> RunArena(const ArenaConfig& config) {
  ValidateArenaConfig(config);
  std::vector<std::optional<Trajectory>> slots(config.runs);
  ParallelFor(config.runs,
              [&](int run) { slots[run].emplace(RunArenaOnce(config, run)); });
  std::vector<Trajectory> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double ConvergenceReport::MaxAmplitude() const {
  double m = 0.0;
  for (const auto& player : trailing_amplitude) {
    for (double a : player) m = std::max(m, a);
  }
  return m;
}

double ConvergenceReport::Amplitude(int player) const {
  const auto& a = trailing_amplitude.at(player);
  return *std::max_element(a.begin(), a.end());
}

ConvergenceReport Aggregate(std::span<const Trajectory> trajectories,
                            const std::vector<NashPoint>& equilibria) {
  if (trajectories.empty()) throw DomainError("no trajectories to aggregate");
  const Trajectory& first = trajectories.front();
  for (const auto& t : trajectories) {
    if (t.steps() != first.steps() || t.num_players() != first.num_players()) {
      throw DomainError("trajectories differ in length or player count");
    }
  }
  const long long steps = first.steps();
  const int n = first.num_players();
  const double runs = static_cast<double>(trajectories.size());

  ConvergenceReport report;
  report.steps = steps;
  report.window = std::max<long long>(1, (steps + 9) / 10);
  const long long start = steps - report.window;

  int width = 0;
  for (int i = 0; i < n; ++i) width += first.num_actions(i);
  report.mean.assign(steps, std::vector<double>(width, 0.0));
  report.stddev.assign(steps, std::vector<double>(width, 0.0));
  for (long long s = 0; s < steps; ++s) {
    auto& mean = report.mean[s];
    auto& sd = report.stddev[s];
    for (const auto& t : trajectories) {
      int k = 0;
      for (int i = 0; i < n; ++i) {
        for (double p : t.Probs(s, i)) mean[k++] += p;
      }
    }
    for (double& m : mean) m /= runs;
    for (const auto& t : trajectories) {
      int k = 0;
      for (int i = 0; i < n; ++i) {
        for (double p : t.Probs(s, i)) {
          sd[k] += (p - mean[k]) * (p - mean[k]);
          ++k;
        }
      }
    }
    for (double& v : sd) v = std::sqrt(v / runs);
  }

  report.trailing_mean.resize(n);
  report.trailing_amplitude.resize(n);
  report.run_amplitude.resize(n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    const int actions = first.num_actions(i);
    report.trailing_mean[i].assign(actions, 0.0);
    report.trailing_amplitude[i].assign(actions, 0.0);
    report.run_amplitude[i].assign(actions, 0.0);
    for (int a = 0; a < actions; ++a, ++k) {
      double sum = 0.0;
      for (long long s = start; s < steps; ++s) sum += report.mean[s][k];
      report.trailing_mean[i][a] = sum / static_cast<double>(report.window);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (long long s = start; s < steps; ++s) {
        lo = std::min(lo, report.mean[s][k]);
        hi = std::max(hi, report.mean[s][k]);
      }
      report.trailing_amplitude[i][a] = hi - lo;
      double per_run = 0.0;
      for (const auto& t : trajectories) {
        double rlo = std::numeric_limits<double>::infinity();
        double rhi = -rlo;
        for (long long s = start; s < steps; ++s) {
          const double p = t.Probs(s, i)[a];
          rlo = std::min(rlo, p);
          rhi = std::max(rhi, p);
        }
        per_run += rhi - rlo;
      }
      report.run_amplitude[i][a] = per_run / runs;
    }
  }

  if (!equilibria.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ne : equilibria) {
      double d = 0.0;
      for (int i = 0; i < n && i < static_cast<int>(ne.policy.size()); ++i) {
        d = std::max(d, LinfDistance(report.trailing_mean[i], ne.policy[i].probs()));
      }
      best = std::min(best, d);
    }
    report.distance_to_ne = best;
  }
  return report;
}

bool Converged(const ConvergenceReport& report, const JointPolicy& ne,
               double tol, std::optional<double> amplitude_tol) {
  if (ne.size() != report.trailing_mean.size()) {
    throw ShapeError("equilibrium has wrong number of players");
  }
  for (std::size_t i = 0; i < ne.size(); ++i) {
    if (LinfDistance(report.trailing_mean[i], ne[i].probs()) > tol) return false;
  }
  return report.MaxAmplitude() < amplitude_tol.value_or(tol);
}

}  // namespace marl
