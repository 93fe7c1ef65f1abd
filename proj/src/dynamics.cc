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

#include "marl/dynamics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "marl/errors.h"
#include "marl/parallel.h"

namespace marl {
namespace {

double GradP(const GradientConstants& u, double q) { return u.u1 * q + u.u2; }
double GradQ(const GradientConstants& u, double p) { return u.u3 * p + u.u4; }

// Branch selection frozen at the start of a step: each coordinate moves at
// gradient * (c0 + c1 * x).
struct Mode {
  double p0 = 1.0, p1 = 0.0;
  double q0 = 1.0, q1 = 0.0;
};

Mode ModeAt(const Field2x2& f, double p, double q) {
  const double gp = GradP(f.u, q);
  const double gq = GradQ(f.u, p);
  switch (f.algorithm) {
    case Algorithm::kWpl:
      return {gp > 0.0 ? 1.0 : 0.0, gp > 0.0 ? -1.0 : 1.0,
              gq > 0.0 ? 1.0 : 0.0, gq > 0.0 ? -1.0 : 1.0};
    case Algorithm::kIgaWolf: {
      // Losing: current value below that of the equilibrium policy against
      // the same opponent.
      const bool p_lose = (p - f.p_star) * gp < 0.0;
      const bool q_lose = (q - f.q_star) * gq < 0.0;
      return {p_lose ? f.l_lose : f.l_win, 0.0, q_lose ? f.l_lose : f.l_win,
              0.0};
    }
    default:
      return {};
  }
}

Velocity Eval(const Field2x2& f, const Mode& m, double p, double q) {
  return {GradP(f.u, q) * (m.p0 + m.p1 * p), GradQ(f.u, p) * (m.q0 + m.q1 * q)};
}

constexpr int kMaxSwitches = 4;

struct Switches {
  std::array<double, kMaxSwitches> s{};
  int n = 0;
};

Switches SwitchesAt(const Field2x2& f, bool ne_events, double p, double q) {
  Switches out;
  if (f.algorithm != Algorithm::kIga) {
    out.s[out.n++] = GradP(f.u, q);
    out.s[out.n++] = GradQ(f.u, p);
  }
  if (ne_events || f.algorithm == Algorithm::kIgaWolf) {
    out.s[out.n++] = p - f.p_star;
    out.s[out.n++] = q - f.q_star;
  }
  return out;
}

bool Crossed(const Switches& a, const Switches& b) {
  for (int i = 0; i < a.n; ++i) {
    if (a.s[i] * b.s[i] < 0.0) return true;
  }
  return false;
}

void Rk4(const Field2x2& f, const Mode& m, double p, double q, double h,
         double* p_out, double* q_out) {
  const Velocity k1 = Eval(f, m, p, q);
  const Velocity k2 = Eval(f, m, p + 0.5 * h * k1.dp, q + 0.5 * h * k1.dq);
  const Velocity k3 = Eval(f, m, p + 0.5 * h * k2.dp, q + 0.5 * h * k2.dq);
  const Velocity k4 = Eval(f, m, p + h * k3.dp, q + h * k3.dq);
  *p_out = p + h / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  *q_out = q + h / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
}

bool InUnitSquare(double p, double q) {
  return p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0;
}

template <typename Visit>
void IntegrateImpl(const Field2x2& field, PhasePoint start, double horizon,
                   const IntegrateOptions& options, Visit&& visit) {
  if (!(options.dt > 0.0)) throw DomainError("dt must be positive");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be non-negative");
  ValidateField(field);
  const double end = start.t + horizon;
  PhasePoint x = start;
  if (!visit(x)) return;
  const double eps = options.dt * 1e-9;
  while (x.t < end - eps) {
    double h = std::min(options.dt, end - x.t);
    const Mode mode = ModeAt(field, x.p, x.q);
    const Switches s0 = SwitchesAt(field, options.ne_events, x.p, x.q);
    double p1, q1;
    Rk4(field, mode, x.p, x.q, h, &p1, &q1);
    if (Crossed(s0, SwitchesAt(field, options.ne_events, p1, q1))) {
      double lo = 0.0, hi = h;
      while (hi - lo > options.event_tol) {
        const double mid = 0.5 * (lo + hi);
        double pm, qm;
        Rk4(field, mode, x.p, x.q, mid, &pm, &qm);
        if (Crossed(s0, SwitchesAt(field, options.ne_events, pm, qm))) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      h = hi;
      Rk4(field, mode, x.p, x.q, h, &p1, &q1);
    }
    if (field.constrained) {
      p1 = std::clamp(p1, 0.0, 1.0);
      q1 = std::clamp(q1, 0.0, 1.0);
    }
    x = {x.t + h, p1, q1};
    if (!visit(x)) return;
  }
}

}  // namespace

void ValidateField(const Field2x2& field) {
  switch (field.algorithm) {
    case Algorithm::kIga:
    case Algorithm::kWpl:
      return;
    case Algorithm::kIgaWolf:
      if (!(field.l_win > 0.0) || !(field.l_lose > 0.0)) {
        throw DomainError("IGA-WoLF rates must be positive");
      }
      if (!InUnitSquare(field.p_star, field.q_star)) {
        throw DomainError("IGA-WoLF equilibrium must lie in [0,1]^2");
      }
      return;
    default:
      throw DomainError("dynamics support iga, iga-wolf and wpl only, got " +
                        std::string(AlgorithmName(field.algorithm)));
  }
}

std::pair<double, double> MixedEquilibrium(const GradientConstants& u) {
  if (u.u1 == 0.0 || u.u3 == 0.0) {
    throw DomainError("u1 and u3 must be non-zero for a mixed equilibrium");
  }
  return {-u.u4 / u.u3, -u.u2 / u.u1};
}

Field2x2 MakeField(Algorithm algorithm, const GradientConstants& u) {
  Field2x2 field;
  field.algorithm = algorithm;
  field.u = u;
  std::tie(field.p_star, field.q_star) = MixedEquilibrium(u);
  ValidateField(field);
  return field;
}

GradientConstants ConstantsForEquilibrium(double p_star, double q_star,
                                          double s) {
  return {s, -s * q_star, -s, s * p_star};
}

Velocity FieldEval(const Field2x2& field, double p, double q) {
  if (!InUnitSquare(p, q)) throw DomainError("(p, q) outside [0,1]^2");
  ValidateField(field);
  return Eval(field, ModeAt(field, p, q), p, q);
}

void IntegrateVisit(const Field2x2& field, PhasePoint start, double horizon,
                    const IntegrateOptions& options,
                    const PhaseVisitor& visit) {
  IntegrateImpl(field, start, horizon, options, visit);
}

std::vector<PhasePoint> Integrate(const Field2x2& field, PhasePoint start,
                                  double horizon, double dt) {
  std::vector<PhasePoint> out;
  IntegrateOptions options;
  options.dt = dt;
  IntegrateVisit(field, start, horizon, options, [&](const PhasePoint& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

PhasePoint SampleAt(const std::vector<PhasePoint>& trajectory, double t) {
  if (trajectory.empty()) throw DomainError("empty trajectory");
  if (t <= trajectory.front().t) return trajectory.front();
  if (t >= trajectory.back().t) return trajectory.back();
  auto it = std::lower_bound(
      trajectory.begin(), trajectory.end(), t,
      [](const PhasePoint& x, double v) { return x.t < v; });
  const PhasePoint& b = *it;
  const PhasePoint& a = *(it - 1);
  const double w = b.t > a.t ? (t - a.t) / (b.t - a.t) : 0.0;
  return {t, a.p + w * (b.p - a.p), a.q + w * (b.q - a.q)};
}

std::optional<RevolutionRecord> RevolutionAnalysis(const Field2x2& field,
                                                   double p_min1,
                                                   double horizon,
                                                   double dt) {
  const auto [p_star, q_star] = MixedEquilibrium(field.u);
  if (!(p_min1 >= 0.0 && p_min1 < p_star)) {
    throw DomainError("revolution start must satisfy 0 <= p < p*");
  }
  if (!(q_star >= 0.0 && q_star <= 1.0)) {
    throw DomainError("q* outside [0,1]");
  }
  Field2x2 f = field;
  f.p_star = p_star;
  f.q_star = q_star;

  RevolutionRecord rec;
  rec.p_min1 = p_min1;
  rec.q_max = q_star;
  rec.q_min = q_star;
  rec.p_max = p_star;
  rec.p_min2 = p_star;
  int crossings = 0;
  bool p_above = false;  // side of p = p*
  bool q_above = false;  // side of q = q*, set on leaving the start line
  bool q_known = false;
  IntegrateOptions options;
  options.dt = dt;
  options.ne_events = true;
  IntegrateVisit(f, {0.0, p_min1, q_star}, horizon, options,
                 [&](const PhasePoint& x) {
    const double dq = x.q - q_star;
    if (crossings == 0 || crossings == 2) {
      rec.q_max = std::max(rec.q_max, x.q);
      rec.q_min = std::min(rec.q_min, x.q);
    } else {
      if (crossings == 1) rec.p_max = std::max(rec.p_max, x.p);
      if (crossings == 3) rec.p_min2 = std::min(rec.p_min2, x.p);
    }
    if (!q_known) {
      if (dq != 0.0) {
        q_known = true;
        q_above = dq > 0.0;
      }
      return true;
    }
    const bool p_now = x.p > p_star;
    const bool q_now = dq > 0.0;
    if ((crossings % 2 == 0) ? p_now != p_above : q_now != q_above) {
      double* times[] = {&rec.t1, &rec.t2, &rec.t3, &rec.t4};
      *times[crossings] = x.t;
      ++crossings;
    }
    p_above = p_now;
    q_above = q_now;
    return crossings < 4;
  });
  if (crossings < 4) return std::nullopt;
  return rec;
}

std::vector<std::pair<double, double>> BoundaryStarts(int per_side) {
  if (per_side < 2) throw DomainError("need at least 2 starts per side");
  std::vector<std::pair<double, double>> out;
  const double step = 1.0 / (per_side - 1);
  // Walk the boundary counter-clockwise, each side without its last corner.
  for (int i = 0; i < per_side - 1; ++i) out.emplace_back(i * step, 0.0);
  for (int i = 0; i < per_side - 1; ++i) out.emplace_back(1.0, i * step);
  for (int i = 0; i < per_side - 1; ++i) out.emplace_back(1.0 - i * step, 1.0);
  for (int i = 0; i < per_side - 1; ++i) out.emplace_back(0.0, 1.0 - i * step);
  return out;
}

GridResult GridExperiment(int num_ne_per_axis, int starts_per_side,
                          double horizon, double late_window, double dt) {
  if (num_ne_per_axis <= 0) throw DomainError("grid size must be positive");
  if (late_window < 0.0) throw DomainError("late window must be >= 0");
  const auto starts = BoundaryStarts(starts_per_side);
  const int n = num_ne_per_axis;
  GridResult result;
  result.num_starts = static_cast<int>(starts.size());
  result.cells.resize(static_cast<std::size_t>(n) * n);
  const double late_start = horizon - late_window;
  IntegrateOptions options;
  options.dt = dt;
  ParallelFor(n * n, [&](int index) {
    GridCell& cell = result.cells[index];
    cell.p_star = (index / n + 0.5) / n;
    cell.q_star = (index % n + 0.5) / n;
    Field2x2 field = MakeField(Algorithm::kWpl,
                               ConstantsForEquilibrium(cell.p_star,
                                                       cell.q_star));
    double worst = 0.0;
    for (const auto& [p0, q0] : starts) {
      IntegrateImpl(field, {0.0, p0, q0}, horizon, options,
                    [&](const PhasePoint& x) {
        if (x.t >= late_start - 1e-12) {
          const double dp = x.p - cell.p_star;
          const double dq = x.q - cell.q_star;
          worst = std::max(worst, std::sqrt(dp * dp + dq * dq));
        }
        return true;
      });
    }
    cell.max_late_distance = worst;
  });
  for (const auto& cell : result.cells) {
    result.max_late_distance =
        std::max(result.max_late_distance, cell.max_late_distance);
  }
  return result;
}

std::vector<LabeledTrajectory> ComparePortraits(const GradientConstants& u,
                                                PhasePoint start,
                                                double horizon, double dt,
                                                double l_win, double l_lose) {
  std::vector<LabeledTrajectory> out;
  for (Algorithm a : {Algorithm::kIga, Algorithm::kIgaWolf, Algorithm::kWpl}) {
    Field2x2 field = MakeField(a, u);
    field.l_win = l_win;
    field.l_lose = l_lose;
    field.constrained = a != Algorithm::kWpl;
    ValidateField(field);
    out.push_back({std::string(AlgorithmName(a)),
                   Integrate(field, start, horizon, dt)});
  }
  return out;
}

}  // namespace marl
