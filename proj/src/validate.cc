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

#include <algorithm>
#include <cmath>
#include <limits>

#include "marl/dtap.h"
#include "marl/dynamics.h"
#include "marl/games.h"
#include "marl/rng.h"
#include "marl/runner.h"

namespace marl {
namespace {

// Nearest valid point by exhaustive search: a 1e-4 grid for two actions;
// for three, a 1e-2 grid followed by a 1e-4 grid around the coarse winner.
std::vector<double> GridNearest(std::span<const double> x, double floor) {
  auto dist = [&](double a, double b, double c) {
    double d = (a - x[0]) * (a - x[0]) + (b - x[1]) * (b - x[1]);
    if (x.size() == 3) d += (c - x[2]) * (c - x[2]);
    return d;
  };
  if (x.size() == 2) {
    double best = std::numeric_limits<double>::infinity(), arg = floor;
    for (int i = 0; i <= 10000; ++i) {
      const double a = i * 1e-4;
      if (a < floor - 1e-12 || 1.0 - a < floor - 1e-12) continue;
      const double d = dist(a, 1.0 - a, 0.0);
      if (d < best) best = d, arg = a;
    }
    return {arg, 1.0 - arg};
  }
  auto search = [&](double a0, double a1, double b0, double b1, double step,
                    double* ba, double* bb) {
    double best = std::numeric_limits<double>::infinity();
    const int na = static_cast<int>(std::lround((a1 - a0) / step));
    const int nb = static_cast<int>(std::lround((b1 - b0) / step));
    for (int i = 0; i <= na; ++i) {
      const double a = a0 + i * step;
      if (a < floor - 1e-12 || a > 1.0 + 1e-12) continue;
      for (int j = 0; j <= nb; ++j) {
        const double b = b0 + j * step;
        const double c = 1.0 - a - b;
        if (b < floor - 1e-12 || c < floor - 1e-12) continue;
        const double d = dist(a, b, c);
        if (d < best) best = d, *ba = a, *bb = b;
      }
    }
  };
  double a = floor, b = floor;
  search(0.0, 1.0, 0.0, 1.0, 1e-2, &a, &b);
  search(std::round((a - 0.02) * 1e4) / 1e4, std::round((a + 0.02) * 1e4) / 1e4,
         std::round((b - 0.02) * 1e4) / 1e4, std::round((b + 0.02) * 1e4) / 1e4,
         1e-4, &a, &b);
  return {a, b, 1.0 - a - b};
}

OracleResult ProjectionOracle(const ValidateOptions& options) {
  Rng rng(options.seed);
  const double floors[] = {0.0, 0.05, 0.1};
  double worst = 0.0;
  for (int n = 0; n < 60; ++n) {
    const int k = n % 2 == 0 ? 2 : 3;
    std::vector<double> x(k);
    for (double& v : x) v = -0.5 + 2.0 * rng.Uniform();
    const double floor = floors[n % 3];
    const std::vector<double> got = options.project(x, floor).vec();
    const std::vector<double> want = GridNearest(x, floor);
    for (int a = 0; a < k; ++a) worst = std::max(worst, std::abs(got[a] - want[a]));
  }
  return {"projection grid oracle", worst <= 2e-4,
          "max deviation " + FormatNumber(worst)};
}

OracleResult GradientOracle() {
  double worst = 0.0;
  Rng rng(11);
  for (const std::string& name : BenchmarkNames()) {
    const Game game = Benchmark(name);
    for (int trial = 0; trial < 5; ++trial) {
      JointPolicy joint;
      for (int i = 0; i < game.num_players(); ++i) {
        std::vector<double> w(game.num_actions(i));
        double sum = 0.0;
        for (double& v : w) sum += (v = 0.05 + rng.Uniform());
        for (double& v : w) v /= sum;
        joint.emplace_back(w);
      }
      for (int i = 0; i < game.num_players(); ++i) {
        const auto g = ExactGradient(game, i, joint).g;
        const int k = game.num_actions(i);
        for (int a = 0; a < k; ++a) {
          // Direction along which the gradient component is defined.
          std::vector<double> dir(k, 0.0);
          if (game.Is2x2()) {
            dir[a] = 1.0;
            dir[1 - a] = -1.0;
          } else {
            for (int b = 0; b < k; ++b) dir[b] = (a == b) - joint[i][b];
          }
          const double h = 1e-6;
          auto value_at = [&](double step) {
            std::vector<double> p = joint[i].vec();
            for (int b = 0; b < k; ++b) p[b] += step * dir[b];
            JointPolicy moved = joint;
            moved[i] = Policy(p);
            return ExpectedValue(game, i, moved);
          };
          const double fd = (value_at(h) - value_at(-h)) / (2.0 * h);
          worst = std::max(worst, std::abs(fd - g[a]));
        }
      }
    }
  }
  return {"exact gradient vs central differences", worst < 1e-6,
          "max deviation " + FormatNumber(worst)};
}

double HDrift(double dt) {
  const GradientConstants u{4.0, -2.0, -4.0, 2.0};
  auto h = [&](double p, double q) {
    return u.u3 * p * p / 2 + u.u4 * p - u.u1 * q * q / 2 - u.u2 * q;
  };
  const Field2x2 field = MakeField(Algorithm::kIga, u);
  const auto rev = RevolutionAnalysis(field, 0.2, 100.0, dt);
  if (!rev) return std::numeric_limits<double>::infinity();
  const auto points = Integrate(field, {0.0, 0.2, 0.5}, rev->t4, dt);
  return std::abs(h(points.back().p, points.back().q) - h(0.2, 0.5));
}

std::vector<OracleResult> HOracles(const ValidateOptions& options) {
  const double drift = HDrift(options.h_dt);
  const double coarse = HDrift(0.02);
  const double fine = HDrift(0.01);
  const double ratio = coarse / fine;
  return {{"IGA invariant conserved over one orbit", drift < 1e-6,
           "dt " + FormatNumber(options.h_dt) + " |dH| " + FormatNumber(drift)},
          {"IGA invariant drift order", ratio >= 8.0 && ratio <= 32.0,
           "drift ratio for dt 0.02 -> 0.01: " + FormatNumber(ratio)}};
}

OracleResult DtapOracle() {
  DtapConfig c;
  c.width = 6;
  c.height = 6;
  c.source_x = 2;
  c.source_y = 2;
  c.source_width = 2;
  c.source_height = 2;
  c.arrival_rate = 0.3;
  c.learner.eta = 0.001;
  DtapWorld world(c);
  long long bad_ticks = 0;
  for (int t = 0; t < 5000; ++t) {
    world.Step();
    if (world.generated() != world.completed() + world.InFlight()) ++bad_ticks;
  }
  const bool ok = bad_ticks == 0 && world.timing_violations() == 0 &&
                  world.fifo_violations() == 0 &&
                  world.decomposition_failures() == 0 && world.completed() > 0;
  return {"DTAP conservation, timing, FIFO and TST decomposition", ok,
          "bad ticks " + std::to_string(bad_ticks) + ", completed " +
              std::to_string(world.completed())};
}

}  // namespace

std::vector<OracleResult> Validate(const ValidateOptions& options) {
  std::vector<OracleResult> out;
  out.push_back(ProjectionOracle(options));
  out.push_back(GradientOracle());
  for (auto& r : HOracles(options)) out.push_back(std::move(r));
  out.push_back(DtapOracle());
  return out;
}

}  // namespace marl
