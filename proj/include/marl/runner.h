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

#ifndef MARL_RUNNER_H_
#define MARL_RUNNER_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "marl/config.h"
#include "marl/policy.h"

namespace marl {

enum class OutputFormat { kCsv, kJson };

// "%.9g"
std::string FormatNumber(double value);

// Runs the experiment and writes its datasets plus summary.json into
// `out_dir` (created if needed). Returns the summary. Throws
// std::runtime_error on I/O failure.
nlohmann::json RunAndEmit(const ExperimentConfig& config,
                          const std::string& out_dir,
                          OutputFormat format = OutputFormat::kCsv);

struct OracleResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  // Projection under test.
  std::function<Policy(std::span<const double>, double)> project = Project;
  // Step for the H-conservation check; the order check compares it with a
  // step twice as large.
  double h_dt = 1e-3;
  std::uint64_t seed = 7;
};

// Projection grid oracle, finite-difference gradients, IGA H-conservation
// and order, DTAP conservation and message timing.
std::vector<OracleResult> Validate(const ValidateOptions& options = {});

}  // namespace marl

#endif  // MARL_RUNNER_H_
