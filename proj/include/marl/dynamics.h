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

#ifndef MARL_DYNAMICS_H_
#define MARL_DYNAMICS_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "marl/games.h"
#include "marl/learners.h"

namespace marl {

// Continuous-time field for a 2x2 game. `algorithm` is one of kIga, kIgaWolf
// or kWpl. The WoLF comparison point (p_star, q_star) is only used by kIgaWolf.
struct Field2x2 {
  Algorithm algorithm = Algorithm::kWpl;
  GradientConstants u;
  double p_star = 0.5;
  double q_star = 0.5;
  double l_win = 1.0;
  double l_lose = 2.0;
  // Clamp (p, q) to the unit square after every step. IGA and IGA-WoLF are
  // unconstrained otherwise.
  bool constrained = false;
};

// Throws DomainError for an unsupported algorithm, non-positive rates, or a
// WoLF point outside [0,1]^2.
void ValidateField(const Field2x2& field);

// Field with the WoLF point set to the interior equilibrium (-u4/u3, -u2/u1).
// Throws DomainError if u1 or u3 is zero.
Field2x2 MakeField(Algorithm algorithm, const GradientConstants& u);

// (p*, q*) = (-u4/u3, -u2/u1). Throws DomainError if u1 or u3 is zero.
std::pair<double, double> MixedEquilibrium(const GradientConstants& u);

// Constants u with u1 = s, u2 = -s q*, u3 = -s, u4 = s p*.
GradientConstants ConstantsForEquilibrium(double p_star, double q_star,
                                          double s = 0.5);

struct PhasePoint {
  double t = 0.0;
  double p = 0.0;
  double q = 0.0;
};

struct Velocity {
  double dp = 0.0;
  double dq = 0.0;
};

// Throws DomainError if p or q is outside [0,1].
Velocity FieldEval(const Field2x2& field, double p, double q);

struct IntegrateOptions {
  double dt = 0.01;
  // Bisection tolerance (in time) for switching-surface crossings.
  double event_tol = 1e-9;
  // Also treat p = p_star and q = q_star as switching surfaces.
  bool ne_events = false;
};

// Called for every accepted step; return false to stop.
using PhaseVisitor = std::function<bool(const PhasePoint&)>;

// Fixed-step RK4 with bisection at switching surfaces. The branch of the
// field is frozen for the duration of a step; a step that crosses a surface
// is shortened to land just past the crossing. The start point is visited
// first. Throws DomainError for dt <= 0 or horizon < 0.
void IntegrateVisit(const Field2x2& field, PhasePoint start, double horizon,
                    const IntegrateOptions& options,
                    const PhaseVisitor& visit);

std::vector<PhasePoint> Integrate(const Field2x2& field, PhasePoint start,
                                  double horizon, double dt = 0.01);

// Linear interpolation of an integrated trajectory at time t (clamped to
// the covered range).
PhasePoint SampleAt(const std::vector<PhasePoint>& trajectory, double t);

struct RevolutionRecord {
  // Crossing times of p = p*, q = q*, p = p*, q = q*.
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  double p_min1 = 0.0;
  double q_max = 0.0;
  double p_max = 0.0;
  double q_min = 0.0;
  double p_min2 = 0.0;
};

// Integrates from (p_min1, q*) until four crossings of the equilibrium lines.
// Returns nullopt when the orbit does not complete within `horizon`. Throws
// DomainError unless p_min1 < p* and p_min1 is in [0,1].
std::optional<RevolutionRecord> RevolutionAnalysis(const Field2x2& field,
                                                   double p_min1,
                                                   double horizon = 1000.0,
                                                   double dt = 0.01);

// Points on the boundary of the unit square, `per_side` per side including
// both endpoints, corners counted once.
std::vector<std::pair<double, double>> BoundaryStarts(int per_side);

struct GridCell {
  double p_star = 0.0;
  double q_star = 0.0;
  // Max Euclidean distance to (p*, q*) over [horizon - late_window, horizon]
  // across all starts.
  double max_late_distance = 0.0;
};

struct GridResult {
  int num_starts = 0;
  std::vector<GridCell> cells;
  double max_late_distance = 0.0;
};

// WPL from every boundary start for each equilibrium at the cell centres
// ((i + 0.5) / n, (j + 0.5) / n). Runs equilibria in parallel.
GridResult GridExperiment(int num_ne_per_axis, int starts_per_side,
                          double horizon, double late_window,
                          double dt = 0.01);

struct LabeledTrajectory {
  std::string algorithm;
  std::vector<PhasePoint> points;
};

// Constrained IGA, constrained IGA-WoLF and WPL from the same start.
std::vector<LabeledTrajectory> ComparePortraits(const GradientConstants& u,
                                                PhasePoint start,
                                                double horizon,
                                                double dt = 0.01,
                                                double l_win = 1.0,
                                                double l_lose = 2.0);

}  // namespace marl

#endif  // MARL_DYNAMICS_H_
