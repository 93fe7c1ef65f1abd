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

#include "marl/policy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "marl/errors.h"

namespace marl {

Policy::Policy(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("policy needs at least one action");
  if (!IsValidPolicy(probs_, 0.0)) {
    throw DomainError("policy entries must be non-negative and sum to 1");
  }
}

Policy Policy::Uniform(int num_actions) {
  if (num_actions < 1) throw DomainError("policy needs at least one action");
  return Policy(std::vector<double>(num_actions, 1.0 / num_actions),
                Unchecked{});
}

Policy Policy::Pure(int num_actions, int action) {
  if (action < 0 || action >= num_actions) {
    throw LookupError("pure action " + std::to_string(action) +
                      " out of range");
  }
  std::vector<double> probs(num_actions, 0.0);
  probs[action] = 1.0;
  return Policy(std::move(probs), Unchecked{});
}

Policy Project(std::span<const double> x, double floor) {
  const int k = static_cast<int>(x.size());
  if (k == 0) throw DomainError("cannot project an empty vector");
  if (!(floor >= 0.0)) throw DomainError("exploration floor must be >= 0");
  const double mass = 1.0 - floor * k;
  if (mass < -1e-12) {
    throw InfeasibleFloorError("exploration floor " + std::to_string(floor) +
                               " is infeasible for " + std::to_string(k) +
                               " actions");
  }
  std::vector<double> out(k, floor);
  if (mass <= 0.0) return Policy(std::move(out), Policy::Unchecked{});

  // Project y = x - floor onto {y >= 0, sum(y) = mass}.
  std::vector<double> sorted(k);
  for (int i = 0; i < k; ++i) sorted[i] = x[i] - floor;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (int j = 0; j < k; ++j) {
    prefix += sorted[j];
    const double t = (prefix - mass) / (j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  for (int i = 0; i < k; ++i) {
    out[i] = floor + std::max(x[i] - floor - theta, 0.0);
  }
  return Policy(std::move(out), Policy::Unchecked{});
}

bool IsValidPolicy(std::span<const double> x, double floor, double tol) {
  if (x.empty()) return false;
  const double upper = 1.0 - floor * (static_cast<double>(x.size()) - 1.0);
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < floor - tol || v > upper + tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

double LinfDistance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

double L2Distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace marl
