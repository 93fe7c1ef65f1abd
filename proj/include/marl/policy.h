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

#ifndef MARL_POLICY_H_
#define MARL_POLICY_H_

#include <span>
#include <vector>

namespace marl {

// Probability distribution over one agent's actions.
//
// A Policy always sums to one (within 1e-9) and has no negative entries.
// Learners additionally keep every entry at or above their exploration floor;
// that stronger property is established by Project().
class Policy {
 public:
  Policy() = default;
  // Throws DomainError unless `probs` is a distribution.
  explicit Policy(std::vector<double> probs);

  static Policy Uniform(int num_actions);
  // Pure policy on `action`.
  static Policy Pure(int num_actions, int action);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& vec() const { return probs_; }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  struct Unchecked {};
  Policy(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}
  friend Policy Project(std::span<const double> x, double floor);

  std::vector<double> probs_;
};

// Euclidean projection onto {pi : sum(pi) = 1, floor <= pi(a) <= 1 -
// floor * (k - 1)}. With floor = 0 this is the plain simplex projection.
//
// Uses the sort-based method on the shifted simplex y = x - floor with mass
// 1 - k * floor. Throws InfeasibleFloorError when floor * k > 1 and
// DomainError for a negative floor or empty input.
Policy Project(std::span<const double> x, double floor);

// True when `x` sums to one within `tol` and every entry lies in
// [floor - tol, 1 - floor * (k - 1) + tol].
bool IsValidPolicy(std::span<const double> x, double floor, double tol = 1e-9);

// Infinity-norm and Euclidean distances.
double LinfDistance(std::span<const double> a, std::span<const double> b);
double L2Distance(std::span<const double> a, std::span<const double> b);

}  // namespace marl

#endif  // MARL_POLICY_H_
