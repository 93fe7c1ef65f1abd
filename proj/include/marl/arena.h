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

#ifndef MARL_ARENA_H_
#define MARL_ARENA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "marl/games.h"
#include "marl/learners.h"

namespace marl {

enum class GradientMode {
  kEstimated,  // bandit feedback: each player sees only its own reward
  kExact,      // oracle: gradients from the game and the opponents' policies
};

struct ArenaConfig {
  Game game;
  std::vector<LearnerParams> learners;  // one per player
  JointPolicy initial;                  // empty means uniform
  long long steps = 1;
  int runs = 1;
  std::uint64_t seed = 0;
  GradientMode gradient_mode = GradientMode::kEstimated;
};

// Throws ConfigError listing every problem.
void ValidateArenaConfig(const ArenaConfig& config);

// One run of repeated play. Row s holds the state after step s + 1: every
// player's full policy (after its update), the sampled actions and rewards.
class Trajectory {
 public:
  Trajectory(std::vector<int> actions_per_player, long long steps);

  long long steps() const { return steps_; }
  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const { return actions_[player]; }

  std::span<const double> Probs(long long row, int player) const;
  int Sampled(long long row, int player) const {
    return sampled_[row * num_players() + player];
  }
  double Reward(long long row, int player) const {
    return rewards_[row * num_players() + player];
  }

  void Record(long long row, const JointPolicy& policies,
              std::span<const int> sampled, std::span<const double> rewards);

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<int> actions_;
  std::vector<int> offsets_;  // start of each player's block within a row
  int row_width_ = 0;
  long long steps_ = 0;
  std::vector<double> probs_;
  std::vector<int> sampled_;
  std::vector<double> rewards_;
};

// Plays config.runs independent runs. Run r, player i draws from the stream
// Rng(seed, r, i), so results do not depend on scheduling.
std::vector<Trajectory> RunArena(const ArenaConfig& config);

// Single run, exposed for replay and tests.
Trajectory RunArenaOnce(const ArenaConfig& config, int run);

struct ConvergenceReport {
  long long steps = 0;
  long long window = 0;  // trailing window length (final 10% of steps)
  // [player][action]
  std::vector<std::vector<double>> trailing_mean;
  // max - min over the window of the run-averaged action probability.
  std::vector<std::vector<double>> trailing_amplitude;
  // Mean over runs of the per-run (max - min); includes sampling noise.
  std::vector<std::vector<double>> run_amplitude;
  // Linf distance of the trailing mean to the nearest reference equilibrium;
  // unset when no equilibria were supplied.
  std::optional<double> distance_to_ne;
  // Per-step statistics across runs, [step][flattened (player, action)];
  // population standard deviation.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;

  double MaxAmplitude() const;
  double Amplitude(int player) const;
};

// Throws DomainError for empty or ragged input.
ConvergenceReport Aggregate(std::span<const Trajectory> trajectories,
                            const std::vector<NashPoint>& equilibria = {});

// Trailing mean within Linf `tol` of `ne` for every player and trailing
// amplitude below `amplitude_tol` (defaults to `tol`).
bool Converged(const ConvergenceReport& report, const JointPolicy& ne,
               double tol, std::optional<double> amplitude_tol = std::nullopt);

}  // namespace marl

#endif  // MARL_ARENA_H_
