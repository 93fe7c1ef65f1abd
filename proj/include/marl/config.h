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

#ifndef MARL_CONFIG_H_
#define MARL_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "marl/arena.h"
#include "marl/dtap.h"
#include "marl/games.h"
#include "marl/learners.h"

namespace marl {

enum class Mode { kArena, kDynamics, kDtap, kSweep };

std::string_view ModeName(Mode mode);

struct ArenaSection {
  std::string game = "matching-pennies";  // benchmark name
  std::string game_file;                  // overrides `game` when non-empty
  std::vector<Algorithm> algorithms = {Algorithm::kWpl};  // one entry: self-play
  double eta = 0.002;
  double alpha = 0.1;
  double epsilon = 0.1;
  double delta_ratio = 2.0;
  double l_win = 1.0;
  double l_lose = 2.0;
  long long steps = 40000;
  int runs = 10;
  std::vector<std::vector<double>> init;  // empty: uniform
  std::uint64_t seed = 1;
  GradientMode gradient = GradientMode::kEstimated;
  int record_every = 1;  // CSV thinning

  friend bool operator==(const ArenaSection&, const ArenaSection&) = default;
};

enum class DynamicsKind {
  kTrajectory,  // one field from `start`
  kBoundary,    // one field from every boundary start
  kGrid,        // WPL over a grid of equilibria
  kPortraits,   // IGA, IGA-WoLF and WPL from `start`
  kRevolution,  // one revolution from (start.p, q*)
};

std::string_view DynamicsKindName(DynamicsKind kind);

struct DynamicsSection {
  DynamicsKind kind = DynamicsKind::kTrajectory;
  Algorithm algorithm = Algorithm::kWpl;
  GradientConstants u{4.0, -2.0, -4.0, 2.0};
  double p0 = 0.1;
  double q0 = 0.9;
  double horizon = 800.0;
  double dt = 0.01;
  int ne_per_axis = 10;
  int starts_per_side = 40;
  double late_window = 100.0;
  double sample_interval = 0.0;  // 0: every integration step
  double l_win = 1.0;
  double l_lose = 2.0;
  // For kTrajectory with IGA-WoLF, and kBoundary: clamp to the unit square.
  bool constrained = false;

  friend bool operator==(const DynamicsSection&,
                         const DynamicsSection&) = default;
};

// Variants are JSON merge patches applied to `base`; every variant runs once
// per seed (or once with the base seed when `seeds` is empty).
struct SweepSection {
  nlohmann::json base;
  std::vector<nlohmann::json> variants;
  std::vector<std::uint64_t> seeds;

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct ExperimentConfig {
  Mode mode = Mode::kArena;
  std::string output = "out";
  std::optional<ArenaSection> arena;
  std::optional<DynamicsSection> dynamics;
  std::optional<DtapConfig> dtap;
  std::optional<SweepSection> sweep;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Parses and validates a JSON config. Throws ConfigError with every problem
// found; syntax errors carry the line number.
ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig ParseConfigJson(const nlohmann::json& j);
ExperimentConfig LoadConfigFile(const std::string& path);

nlohmann::json ConfigToJson(const ExperimentConfig& config);
std::string SerializeConfig(const ExperimentConfig& config);

std::vector<std::string> PresetNames();
// Throws LookupError for an unknown name.
ExperimentConfig Preset(std::string_view name);

// Replaces the seed of the active section (or the sweep base).
void OverrideSeed(ExperimentConfig& config, std::uint64_t seed);

// Resolves the game and builds the arena configuration.
ArenaConfig ToArenaConfig(const ArenaSection& section);

}  // namespace marl

#endif  // MARL_CONFIG_H_
