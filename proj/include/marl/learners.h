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

#ifndef MARL_LEARNERS_H_
#define MARL_LEARNERS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marl/games.h"
#include "marl/policy.h"

namespace marl {

enum class Algorithm {
  kIga,       // projected gradient ascent (GIGA for k > 2 actions)
  kGiga,      // same update as kIga; kept as a separate tag for reporting
  kIgaWolf,   // two fixed rates, switched by comparing against a known NE
  kPhcWolf,   // two fixed rates, switched by comparing against the average
  kGigaWolf,  // GIGA with a slow auxiliary policy z
  kWpl,       // weighted policy learner
  kFixed,     // never updates (frozen opponent)
};

std::string_view AlgorithmName(Algorithm algorithm);
// Accepts the names produced by AlgorithmName. Throws LookupError.
Algorithm ParseAlgorithm(std::string_view name);

// Per-action reward estimates r_hat, updated by exponential averaging.
struct ValueEstimate {
  std::vector<double> r_hat;
  double alpha = 0.1;
};

// r_hat(action) <- alpha * reward + (1 - alpha) * r_hat(action). Only the
// chosen action's estimate changes. Throws LookupError for a bad index.
ValueEstimate UpdateValue(ValueEstimate estimate, int action, double reward);

// Estimated partial derivative of V_i with respect to each own action.
struct GradientEstimate {
  std::vector<double> g;
};

struct LearnerParams {
  Algorithm algorithm = Algorithm::kWpl;
  double eta = 0.002;      // policy-learning rate
  double alpha = 0.1;      // value-learning rate
  double epsilon = 0.1;    // exploration floor used by the projection
  // PHC-WoLF: delta_win = eta, delta_lose = delta_ratio * eta.
  double delta_ratio = 2.0;
  // IGA-WoLF factored rates.
  double l_win = 1.0;
  double l_lose = 2.0;

  friend bool operator==(const LearnerParams&, const LearnerParams&) = default;
};

struct LearnerState {
  Algorithm algorithm = Algorithm::kWpl;
  Policy policy;
  ValueEstimate value;
  double eta = 0.002;
  double epsilon = 0.1;

  // GIGA-WoLF: slow policy and its step size.
  std::optional<Policy> z;
  double delta = 0.0;

  // PHC-WoLF: running average of the policy and the WoLF rates.
  std::vector<double> average_policy;
  long long update_count = 0;
  double delta_win = 0.0;
  double delta_lose = 0.0;

  // IGA-WoLF: equilibrium policy supplied by an oracle, and factored rates.
  std::optional<Policy> oracle_ne;
  double l_win = 1.0;
  double l_lose = 2.0;
};

// Builds a learner starting at `initial` (projected onto the floored simplex).
// Validates rates; throws ConfigError.
LearnerState MakeLearner(const LearnerParams& params, const Policy& initial);

// g(a) = r_hat(a) - sum_b pi(b) r_hat(b): advantage over the policy-weighted
// baseline, from the learner's own reward estimates.
GradientEstimate EstimateGradient(const LearnerState& state);

// Gradient from full knowledge of the game. For 2x2 games this is the closed
// form g = (u1 q + u2) * (1, -1) for the row player (u3 p + u4 for the
// column), i.e. the derivative of V along the simplex direction that raises
// that action. Larger games use V(a, pi_{-i}) - V(pi).
GradientEstimate ExactGradient(const Game& game, int player,
                               const JointPolicy& joint);

// pi(a) += g(a) * eta * (pi(a) if g(a) < 0 else 1 - pi(a)), then project.
LearnerState WplStep(LearnerState state, const GradientEstimate& gradient);

// pi += eta * g, then project. Also the GIGA update.
LearnerState IgaStep(LearnerState state, const GradientEstimate& gradient);

LearnerState GigaWolfStep(LearnerState state, const GradientEstimate& gradient);

LearnerState PhcWolfStep(LearnerState state, const GradientEstimate& gradient);

// The win/lose test evaluates V(pi, pi_{-i}) against V(pi*, pi_{-i}) with the
// true game. Throws ConfigError when state.oracle_ne is unset.
LearnerState IgaWolfStep(LearnerState state, const GradientEstimate& gradient,
                         const Game& game, int player,
                         const JointPolicy& joint);

// Game knowledge needed only by IGA-WoLF.
struct WolfOracle {
  const Game* game = nullptr;
  int player = 0;
  const JointPolicy* joint = nullptr;
};

// Dispatches on state.algorithm.
LearnerState Step(LearnerState state, const GradientEstimate& gradient,
                  const WolfOracle& oracle = {});

}  // namespace marl

#endif  // MARL_LEARNERS_H_
