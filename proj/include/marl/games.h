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

#ifndef MARL_GAMES_H_
#define MARL_GAMES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marl/policy.h"

namespace marl {

using JointPolicy = std::vector<Policy>;

// A normal-form game with deterministic payoffs.
//
// Payoffs are a dense tensor: for every joint action (one action index per
// player, first player most significant) there is one reward per player.
// Instances are immutable once built.
class Game {
 public:
  // `payoffs` holds num_cells * num_players rewards, cell-major.
  Game(std::string name, std::vector<int> actions_per_player,
       std::vector<double> payoffs);

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const { return actions_.at(player); }
  const std::vector<int>& actions_per_player() const { return actions_; }
  std::size_t num_cells() const { return num_cells_; }

  // Row-major cell index of a joint action. Throws LookupError.
  std::size_t CellIndex(std::span<const int> joint_action) const;
  // Rewards for every player at a joint action.
  std::span<const double> Rewards(std::span<const int> joint_action) const;
  double Reward(std::span<const int> joint_action, int player) const {
    return Rewards(joint_action)[player];
  }

  bool Is2x2() const {
    return num_players() == 2 && actions_[0] == 2 && actions_[1] == 2;
  }

 private:
  std::string name_;
  std::vector<int> actions_;
  std::vector<double> payoffs_;
  std::size_t num_cells_ = 0;
};

// Names accepted by Benchmark().
std::vector<std::string> BenchmarkNames();

// Catalog games: coordination, matching-pennies, tricky,
// rock-paper-scissors, shapleys, biased. Throws LookupError otherwise.
Game Benchmark(std::string_view name);

// Game definition text:
//
//   # comment
//   name = my-game            (optional)
//   players = 2
//   actions = 2 2
//   payoff 0 0 = 1 -1
//   payoff 0 1 = -1 1
//   ...
//
// Every joint action needs exactly one payoff line. Throws ConfigError with
// line numbers.
Game ParseGame(std::string_view text);
std::string SerializeGame(const Game& game);
Game LoadGameFile(const std::string& path);

// V_i(pi): reward of `player` averaged over the joint policy.
double ExpectedValue(const Game& game, int player, const JointPolicy& joint);

// V_i(a, pi_{-i}): value of a pure own action against the others' policies.
double ActionValue(const Game& game, int player, int action,
                   const JointPolicy& joint);

// Constants reducing a 2x2 game's gradients to affine functions:
// dV_row/dp = u1 q + u2 and dV_col/dq = u3 p + u4.
struct GradientConstants {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  double u4 = 0.0;

  friend bool operator==(const GradientConstants&,
                         const GradientConstants&) = default;
};

GradientConstants ComputeGradientConstants(const Game& game);

// V(1, .) - V(0, .) for `player` (0 = row, 1 = column) given the opponent's
// first-action probability. Throws DomainError for a probability outside
// [0, 1].
double Gradient2x2(const Game& game, int player, double opponent_first_prob);

enum class NashKind { kPure, kMixed };

struct NashPoint {
  JointPolicy policy;
  NashKind kind = NashKind::kPure;
};

// Pure equilibria by cell enumeration plus the interior mixed equilibrium
// (-u4/u3, -u2/u1) for cyclic games (u1 * u3 < 0).
std::vector<NashPoint> Nash2x2(const Game& game);

// Reference equilibria used by the metrics: Nash2x2 for 2x2 games, the
// uniform equilibrium for the 3-action catalog games. Throws LookupError for
// larger games outside the catalog.
std::vector<NashPoint> ReferenceEquilibria(const Game& game);

// Largest gain any player gets by deviating to a policy on a `grid`-point
// mesh of its simplex (pure actions always included).
double MaxDeviationGain(const Game& game, const JointPolicy& joint,
                        int grid = 101);

}  // namespace marl

#endif  // MARL_GAMES_H_
