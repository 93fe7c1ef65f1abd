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

#include "marl/games.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "marl/errors.h"

namespace marl {
namespace {

// Advances a mixed-radix counter; returns false after the last joint action.
bool NextJointAction(const std::vector<int>& radix, std::vector<int>& joint) {
  for (int i = static_cast<int>(joint.size()) - 1; i >= 0; --i) {
    if (++joint[i] < radix[i]) return true;
    joint[i] = 0;
  }
  return false;
}

void CheckJointPolicy(const Game& game, const JointPolicy& joint) {
  if (static_cast<int>(joint.size()) != game.num_players()) {
    throw ShapeError("joint policy has " + std::to_string(joint.size()) +
                     " policies for a " + std::to_string(game.num_players()) +
                     "-player game");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (joint[i].size() != game.num_actions(i)) {
      throw ShapeError("policy of player " + std::to_string(i) + " has " +
                       std::to_string(joint[i].size()) + " entries, game has " +
                       std::to_string(game.num_actions(i)) + " actions");
    }
  }
}

void Check2x2(const Game& game) {
  if (!game.Is2x2()) {
    throw ShapeError("game '" + game.name() + "' is not a 2-player 2-action game");
  }
}

Game Make2x2(std::string name, double r11, double c11, double r12, double c12,
             double r21, double c21, double r22, double c22) {
  return Game(std::move(name), {2, 2},
              {r11, c11, r12, c12, r21, c21, r22, c22});
}

Game Make3x3(std::string name, const double (&cells)[9][2]) {
  std::vector<double> payoffs;
  for (const auto& cell : cells) {
    payoffs.push_back(cell[0]);
    payoffs.push_back(cell[1]);
  }
  return Game(std::move(name), {3, 3}, std::move(payoffs));
}

}  // namespace

Game::Game(std::string name, std::vector<int> actions_per_player,
           std::vector<double> payoffs)
    : name_(std::move(name)),
      actions_(std::move(actions_per_player)),
      payoffs_(std::move(payoffs)) {
  if (actions_.size() < 2) throw ShapeError("a game needs at least 2 players");
  num_cells_ = 1;
  for (int a : actions_) {
    if (a < 2) throw ShapeError("every player needs at least 2 actions");
    num_cells_ *= static_cast<std::size_t>(a);
  }
  if (payoffs_.size() != num_cells_ * actions_.size()) {
    throw ShapeError("payoff tensor has " + std::to_string(payoffs_.size()) +
                     " entries, expected " +
                     std::to_string(num_cells_ * actions_.size()));
  }
}

std::size_t Game::CellIndex(std::span<const int> joint_action) const {
  if (joint_action.size() != actions_.size()) {
    throw ShapeError("joint action has wrong number of players");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (joint_action[i] < 0 || joint_action[i] >= actions_[i]) {
      throw LookupError("action " + std::to_string(joint_action[i]) +
                        " out of range for player " + std::to_string(i));
    }
    index = index * actions_[i] + joint_action[i];
  }
  return index;
}

std::span<const double> Game::Rewards(std::span<const int> joint_action) const {
  const std::size_t n = actions_.size();
  return std::span<const double>(payoffs_).subspan(CellIndex(joint_action) * n,
                                                   n);
}

std::vector<std::string> BenchmarkNames() {
  return {"coordination", "matching-pennies",    "tricky",
          "rock-paper-scissors", "shapleys", "biased"};
}

Game Benchmark(std::string_view name) {
  if (name == "coordination") {
    return Make2x2("coordination", 2, 1, 0, 0, 0, 0, 1, 2);
  }
  if (name == "matching-pennies") {
    return Make2x2("matching-pennies", 1, -1, -1, 1, -1, 1, 1, -1);
  }
  if (name == "tricky") {
    return Make2x2("tricky", 0, 3, 3, 2, 1, 0, 2, 1);
  }
  if (name == "biased") {
    return Make2x2("biased", 1.0, 1.85, 1.85, 1.0, 1.15, 1.0, 1.0, 1.15);
  }
  if (name == "rock-paper-scissors") {
    const double cells[9][2] = {{0, 0},  {-1, 1}, {1, -1}, {1, -1}, {0, 0},
                                {-1, 1}, {-1, 1}, {1, -1}, {0, 0}};
    return Make3x3("rock-paper-scissors", cells);
  }
  if (name == "shapleys") {
    const double cells[9][2] = {{0, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 0},
                                {1, 0}, {1, 0}, {0, 1}, {0, 0}};
    return Make3x3("shapleys", cells);
  }
  throw LookupError("unknown benchmark game '" + std::string(name) + "'");
}

Game ParseGame(std::string_view text) {
  std::vector<std::string> problems;
  std::string name = "custom";
  int players = -1;
  std::vector<int> actions;
  std::map<std::vector<int>, std::pair<std::vector<double>, int>> cells;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::string key;
    if (!(tokens >> key)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (key == "payoff") {
      std::vector<int> joint;
      std::string tok;
      bool saw_equals = false;
      while (tokens >> tok) {
        if (tok == "=") {
          saw_equals = true;
          break;
        }
        try {
          std::size_t used = 0;
          joint.push_back(std::stoi(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          problems.push_back(where + "bad action index '" + tok + "'");
        }
      }
      std::vector<double> rewards;
      double r;
      while (tokens >> r) rewards.push_back(r);
      if (!saw_equals || !tokens.eof()) {
        problems.push_back(where + "expected 'payoff <actions> = <rewards>'");
        continue;
      }
      if (cells.count(joint)) {
        problems.push_back(where + "duplicate payoff for joint action");
        continue;
      }
      cells[joint] = {rewards, line_no};
      continue;
    }
    std::string eq;
    if (!(tokens >> eq) || eq != "=") {
      problems.push_back(where + "expected '" + key + " = ...'");
      continue;
    }
    if (key == "name") {
      tokens >> name;
    } else if (key == "players") {
      if (!(tokens >> players)) problems.push_back(where + "bad player count");
    } else if (key == "actions") {
      int a;
      while (tokens >> a) actions.push_back(a);
      if (!tokens.eof()) problems.push_back(where + "bad action count");
    } else {
      problems.push_back(where + "unknown key '" + key + "'");
    }
  }

  if (players < 0) problems.push_back("missing 'players'");
  if (actions.empty()) problems.push_back("missing 'actions'");
  if (players >= 0 && !actions.empty() &&
      static_cast<int>(actions.size()) != players) {
    problems.push_back("'actions' lists " + std::to_string(actions.size()) +
                       " counts for " + std::to_string(players) + " players");
  }
  if (!problems.empty()) throw ConfigError(problems);

  std::size_t num_cells = 1;
  for (int a : actions) {
    if (a < 2) throw ConfigError("every player needs at least 2 actions");
    num_cells *= a;
  }
  std::vector<double> payoffs(num_cells * players, 0.0);
  std::vector<bool> seen(num_cells, false);
  for (const auto& [joint, entry] : cells) {
    const auto& [rewards, at] = entry;
    const std::string where = "line " + std::to_string(at) + ": ";
    bool ok = static_cast<int>(joint.size()) == players;
    for (std::size_t i = 0; ok && i < joint.size(); ++i) {
      ok = joint[i] >= 0 && joint[i] < actions[i];
    }
    if (!ok) {
      problems.push_back(where + "joint action out of range");
      continue;
    }
    if (static_cast<int>(rewards.size()) != players) {
      problems.push_back(where + "expected " + std::to_string(players) +
                         " rewards");
      continue;
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < joint.size(); ++i) {
      index = index * actions[i] + joint[i];
    }
    seen[index] = true;
    std::copy(rewards.begin(), rewards.end(), payoffs.begin() + index * players);
  }
  const auto missing = std::count(seen.begin(), seen.end(), false);
  if (missing > 0) {
    problems.push_back(std::to_string(missing) +
                       " joint actions have no payoff line");
  }
  if (!problems.empty()) throw ConfigError(problems);
  return Game(name, actions, std::move(payoffs));
}

std::string SerializeGame(const Game& game) {
  std::ostringstream out;
  out.precision(17);
  out << "name = " << game.name() << "\n";
  out << "players = " << game.num_players() << "\n";
  out << "actions =";
  for (int a : game.actions_per_player()) out << ' ' << a;
  out << "\n";
  std::vector<int> joint(game.num_players(), 0);
  do {
    out << "payoff";
    for (int a : joint) out << ' ' << a;
    out << " =";
    for (double r : game.Rewards(joint)) out << ' ' << r;
    out << "\n";
  } while (NextJointAction(game.actions_per_player(), joint));
  return out.str();
}

Game LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open game file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseGame(buffer.str());
}

double ExpectedValue(const Game& game, int player, const JointPolicy& joint) {
  CheckJointPolicy(game, joint);
  if (player < 0 || player >= game.num_players()) {
    throw LookupError("player " + std::to_string(player) + " out of range");
  }
  std::vector<int> cell(game.num_players(), 0);
  double value = 0.0;
  do {
    double weight = 1.0;
    for (int i = 0; i < game.num_players(); ++i) weight *= joint[i][cell[i]];
    if (weight != 0.0) value += weight * game.Reward(cell, player);
  } while (NextJointAction(game.actions_per_player(), cell));
  return value;
}

double ActionValue(const Game& game, int player, int action,
                   const JointPolicy& joint) {
  CheckJointPolicy(game, joint);
  JointPolicy deviated = joint;
  deviated.at(player) = Policy::Pure(game.num_actions(player), action);
  return ExpectedValue(game, player, deviated);
}

GradientConstants ComputeGradientConstants(const Game& game) {
  Check2x2(game);
  auto r = [&](int i, int j) { return game.Reward(std::vector<int>{i, j}, 0); };
  auto c = [&](int i, int j) { return game.Reward(std::vector<int>{i, j}, 1); };
  return {r(0, 0) - r(0, 1) - r(1, 0) + r(1, 1), r(0, 1) - r(1, 1),
          c(0, 0) - c(0, 1) - c(1, 0) + c(1, 1), c(1, 0) - c(1, 1)};
}

double Gradient2x2(const Game& game, int player, double opponent_first_prob) {
  const GradientConstants u = ComputeGradientConstants(game);
  if (!(opponent_first_prob >= 0.0 && opponent_first_prob <= 1.0)) {
    throw DomainError("opponent probability must lie in [0, 1]");
  }
  switch (player) {
    case 0:
      return u.u1 * opponent_first_prob + u.u2;
    case 1:
      return u.u3 * opponent_first_prob + u.u4;
    default:
      throw LookupError("2x2 games have players 0 and 1");
  }
}

std::vector<NashPoint> Nash2x2(const Game& game) {
  Check2x2(game);
  constexpr double kTol = 1e-9;
  std::vector<NashPoint> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double row = game.Reward(std::vector<int>{i, j}, 0);
      const double col = game.Reward(std::vector<int>{i, j}, 1);
      const double row_alt = game.Reward(std::vector<int>{1 - i, j}, 0);
      const double col_alt = game.Reward(std::vector<int>{i, 1 - j}, 1);
      if (row >= row_alt - kTol && col >= col_alt - kTol) {
        out.push_back({{Policy::Pure(2, i), Policy::Pure(2, j)},
                       NashKind::kPure});
      }
    }
  }
  const GradientConstants u = ComputeGradientConstants(game);
  if (u.u1 != 0.0 && u.u3 != 0.0 && u.u1 * u.u3 < 0.0) {
    const double p = -u.u4 / u.u3;
    const double q = -u.u2 / u.u1;
    if (p > kTol && p < 1.0 - kTol && q > kTol && q < 1.0 - kTol) {
      out.push_back(
          {{Policy({p, 1.0 - p}), Policy({q, 1.0 - q})}, NashKind::kMixed});
    }
  }
  return out;
}

std::vector<NashPoint> ReferenceEquilibria(const Game& game) {
  if (game.Is2x2()) return Nash2x2(game);
  if (game.name() == "rock-paper-scissors" || game.name() == "shapleys") {
    return {{{Policy::Uniform(3), Policy::Uniform(3)}, NashKind::kMixed}};
  }
  throw LookupError("no reference equilibrium known for game '" + game.name() +
                    "'");
}

double MaxDeviationGain(const Game& game, const JointPolicy& joint, int grid) {
  CheckJointPolicy(game, joint);
  if (grid < 2) throw DomainError("deviation grid needs at least 2 points");
  double worst = -std::numeric_limits<double>::infinity();
  for (int player = 0; player < game.num_players(); ++player) {
    const double base = ExpectedValue(game, player, joint);
    const int k = game.num_actions(player);
    // Each own action's value; V is linear in the player's own policy.
    std::vector<double> values(k);
    for (int a = 0; a < k; ++a) values[a] = ActionValue(game, player, a, joint);
    // Enumerate grid compositions of (grid - 1) units over k actions.
    const int units = grid - 1;
    std::vector<int> counts(k, 0);
    counts[k - 1] = units;
    while (true) {
      double v = 0.0;
      for (int a = 0; a < k; ++a) v += values[a] * counts[a] / units;
      worst = std::max(worst, v - base);
      // Next composition (lexicographic over the first k - 1 entries).
      int i = k - 2;
      while (i >= 0) {
        int used = 0;
        for (int b = 0; b <= i; ++b) used += counts[b];
        if (used < units) {
          ++counts[i];
          for (int b = i + 1; b < k - 1; ++b) counts[b] = 0;
          break;
        }
        counts[i] = 0;
        --i;
      }
      if (i < 0) break;
      int used = 0;
      for (int b = 0; b < k - 1; ++b) used += counts[b];
      counts[k - 1] = units - used;
    }
  }
  return worst;
}

}  // namespace marl
