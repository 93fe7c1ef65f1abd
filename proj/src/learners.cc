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

#include "marl/learners.h"

#include <algorithm>
#include <cmath>

#include "marl/errors.h"

namespace marl {
namespace {

void CheckGradient(const LearnerState& state, const GradientEstimate& gradient) {
  if (static_cast<int>(gradient.g.size()) != state.policy.size()) {
    throw ShapeError("gradient has " + std::to_string(gradient.g.size()) +
                     " entries for a " + std::to_string(state.policy.size()) +
                     "-action policy");
  }
}

// Projection of pi + scale * g.
Policy Ascend(const Policy& pi, const GradientEstimate& gradient, double scale,
              double floor) {
  std::vector<double> x(pi.vec());
  for (std::size_t a = 0; a < x.size(); ++a) x[a] += scale * gradient.g[a];
  return Project(x, floor);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kIga:
      return "iga";
    case Algorithm::kGiga:
      return "giga";
    case Algorithm::kIgaWolf:
      return "iga-wolf";
    case Algorithm::kPhcWolf:
      return "phc-wolf";
    case Algorithm::kGigaWolf:
      return "giga-wolf";
    case Algorithm::kWpl:
      return "wpl";
    case Algorithm::kFixed:
      return "fixed";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kIga, Algorithm::kGiga, Algorithm::kIgaWolf,
                      Algorithm::kPhcWolf, Algorithm::kGigaWolf,
                      Algorithm::kWpl, Algorithm::kFixed}) {
    if (AlgorithmName(a) == name) return a;
  }
  throw LookupError("unknown algorithm '" + std::string(name) + "'");
}

ValueEstimate UpdateValue(ValueEstimate estimate, int action, double reward) {
  if (action < 0 || action >= static_cast<int>(estimate.r_hat.size())) {
    throw LookupError("action " + std::to_string(action) + " out of range");
  }
  double& r = estimate.r_hat[action];
  r = estimate.alpha * reward + (1.0 - estimate.alpha) * r;
  return estimate;
}

LearnerState MakeLearner(const LearnerParams& params, const Policy& initial) {
  std::vector<std::string> problems;
  if (!(params.eta > 0.0)) problems.push_back("eta must be > 0");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    problems.push_back("alpha must lie in (0, 1]");
  }
  if (!(params.epsilon >= 0.0) || params.epsilon * initial.size() > 1.0) {
    problems.push_back("epsilon must be >= 0 with epsilon * actions <= 1");
  }
  if (!(params.delta_ratio > 1.0)) problems.push_back("delta_ratio must be > 1");
  if (!(params.l_lose > params.l_win && params.l_win > 0.0)) {
    problems.push_back("need l_lose > l_win > 0");
  }
  if (!problems.empty()) throw ConfigError(problems);

  LearnerState s;
  s.algorithm = params.algorithm;
  s.policy = params.algorithm == Algorithm::kFixed
                 ? initial
                 : Project(initial.probs(), params.epsilon);
  s.value = {std::vector<double>(initial.size(), 0.0), params.alpha};
  s.eta = params.eta;
  s.epsilon = params.epsilon;
  s.l_win = params.l_win;
  s.l_lose = params.l_lose;
  switch (params.algorithm) {
    case Algorithm::kGigaWolf:
      s.z = s.policy;
      s.delta = params.eta;
      break;
    case Algorithm::kPhcWolf:
      s.average_policy = s.policy.vec();
      s.delta_win = params.eta;
      s.delta_lose = params.delta_ratio * params.eta;
      break;
    default:
      break;
  }
  return s;
}

GradientEstimate EstimateGradient(const LearnerState& state) {
  const auto& r = state.value.r_hat;
  const double baseline = Dot(state.policy.probs(), r);
  GradientEstimate out{std::vector<double>(r.size())};
  for (std::size_t a = 0; a < r.size(); ++a) out.g[a] = r[a] - baseline;
  return out;
}

GradientEstimate ExactGradient(const Game& game, int player,
                               const JointPolicy& joint) {
  const double baseline = ExpectedValue(game, player, joint);  // checks shape
  if (game.Is2x2()) {
    const double d = Gradient2x2(game, player, joint[1 - player][0]);
    return {{d, -d}};
  }
  GradientEstimate out{std::vector<double>(game.num_actions(player))};
  for (int a = 0; a < game.num_actions(player); ++a) {
    out.g[a] = ActionValue(game, player, a, joint) - baseline;
  }
  return out;
}

LearnerState WplStep(LearnerState state, const GradientEstimate& gradient) {
  CheckGradient(state, gradient);
  std::vector<double> x(state.policy.vec());
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double g = gradient.g[a];
    const double weight = g < 0.0 ? x[a] : 1.0 - x[a];
    x[a] += g * state.eta * weight;
  }
  state.policy = Project(x, state.epsilon);
  return state;
}

LearnerState IgaStep(LearnerState state, const GradientEstimate& gradient) {
  CheckGradient(state, gradient);
  state.policy = Ascend(state.policy, gradient, state.eta, state.epsilon);
  return state;
}

LearnerState GigaWolfStep(LearnerState state, const GradientEstimate& gradient) {
  CheckGradient(state, gradient);
  if (!state.z) throw ConfigError("GIGA-WoLF state has no slow policy z");
  const Policy pi_hat =
      Ascend(state.policy, gradient, state.delta, state.epsilon);
  const Policy z_new =
      Ascend(*state.z, gradient, state.delta / 3.0, state.epsilon);
  const double num = L2Distance(z_new.probs(), state.z->probs());
  const double den = L2Distance(z_new.probs(), pi_hat.probs());
  const double mix = den == 0.0 ? 1.0 : std::min(1.0, num / den);
  std::vector<double> next(pi_hat.vec());
  for (std::size_t a = 0; a < next.size(); ++a) {
    next[a] += mix * (z_new[a] - pi_hat[a]);
  }
  // Convex combination of two valid policies; the projection only absorbs
  // rounding.
  state.policy = Project(next, state.epsilon);
  state.z = z_new;
  return state;
}

LearnerState PhcWolfStep(LearnerState state, const GradientEstimate& gradient) {
  CheckGradient(state, gradient);
  if (state.average_policy.size() != state.policy.vec().size()) {
    throw ConfigError("PHC-WoLF state has no average policy");
  }
  ++state.update_count;
  const double n = static_cast<double>(state.update_count);
  for (std::size_t a = 0; a < state.average_policy.size(); ++a) {
    state.average_policy[a] += (state.policy[a] - state.average_policy[a]) / n;
  }
  const double v_current = Dot(state.policy.probs(), state.value.r_hat);
  const double v_average = Dot(state.average_policy, state.value.r_hat);
  const double rate = v_current < v_average ? state.delta_lose : state.delta_win;
  state.policy = Ascend(state.policy, gradient, rate, state.epsilon);
  return state;
}

LearnerState IgaWolfStep(LearnerState state, const GradientEstimate& gradient,
                         const Game& game, int player,
                         const JointPolicy& joint) {
  CheckGradient(state, gradient);
  if (!state.oracle_ne) {
    throw ConfigError("IGA-WoLF needs an equilibrium policy from an oracle");
  }
  JointPolicy current = joint;
  current.at(player) = state.policy;
  JointPolicy reference = joint;
  reference.at(player) = *state.oracle_ne;
  const bool losing = ExpectedValue(game, player, current) <
                      ExpectedValue(game, player, reference);
  const double rate = losing ? state.l_lose : state.l_win;
  state.policy = Ascend(state.policy, gradient, state.eta * rate, state.epsilon);
  return state;
}

LearnerState Step(LearnerState state, const GradientEstimate& gradient,
                  const WolfOracle& oracle) {
  switch (state.algorithm) {
    case Algorithm::kIga:
    case Algorithm::kGiga:
      return IgaStep(std::move(state), gradient);
    case Algorithm::kGigaWolf:
      return GigaWolfStep(std::move(state), gradient);
    case Algorithm::kPhcWolf:
      return PhcWolfStep(std::move(state), gradient);
    case Algorithm::kWpl:
      return WplStep(std::move(state), gradient);
    case Algorithm::kIgaWolf:
      if (oracle.game == nullptr || oracle.joint == nullptr) {
        throw ConfigError("IGA-WoLF needs the game and the joint policy");
      }
      return IgaWolfStep(std::move(state), gradient, *oracle.game,
                         oracle.player, *oracle.joint);
    case Algorithm::kFixed:
      return state;
  }
  return state;
}

}  // namespace marl
