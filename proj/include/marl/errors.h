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

#ifndef MARL_ERRORS_H_
#define MARL_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace marl {

// Unknown catalog name or out-of-range index.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Dimensions of a policy, game, or gradient do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exploration floor too large for the number of actions (floor * k > 1).
class InfeasibleFloorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid or incomplete configuration. Carries every problem found, not just
// the first one.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::invalid_argument(Join(problems)), problems_(std::move(problems)) {}
  explicit ConfigError(const std::string& problem)
      : ConfigError(std::vector<std::string>{problem}) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string Join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace marl

#endif  // MARL_ERRORS_H_
