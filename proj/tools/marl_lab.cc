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

// marl_lab: runs experiments from a JSON config or a named preset.
//
//   marl_lab run --preset fig12b --out out/fig12b
//   marl_lab run --config my.json --seed 3 --format json
//   marl_lab validate
//   marl_lab presets

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "marl/config.h"
#include "marl/errors.h"
#include "marl/runner.h"

namespace {

int Run(const std::string& config_path, const std::string& preset,
        std::optional<std::uint64_t> seed, const std::string& out,
        const std::string& format) {
  marl::ExperimentConfig config = preset.empty()
                                      ? marl::LoadConfigFile(config_path)
                                      : marl::Preset(preset);
  if (seed) marl::OverrideSeed(config, *seed);
  const std::string dir = out.empty() ? config.output : out;
  const auto summary = marl::RunAndEmit(
      config, dir,
      format == "json" ? marl::OutputFormat::kJson : marl::OutputFormat::kCsv);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int Validate() {
  bool ok = true;
  for (const auto& r : marl::Validate()) {
    std::printf("%s  %s (%s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiagent gradient-ascent learning experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment and write datasets");
  std::string config_path, preset, out, format = "csv";
  std::optional<std::uint64_t> seed;
  auto* config_opt = run->add_option("--config", config_path, "JSON config file")
                         ->check(CLI::ExistingFile);
  auto* preset_opt = run->add_option("--preset", preset, "Named figure preset");
  config_opt->excludes(preset_opt);
  run->add_option("--seed", seed, "Override the random seed");
  run->add_option("--out", out, "Output directory (default: config output)");
  run->add_option("--format", format, "Dataset format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* validate = app.add_subcommand("validate", "Run the built-in oracles");
  auto* presets = app.add_subcommand("presets", "List preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (config_path.empty() && preset.empty()) {
        std::cerr << "run: one of --config or --preset is required\n";
        return 2;
      }
      return Run(config_path, preset, seed, out, format);
    }
    if (*validate) return Validate();
    if (*presets) {
      for (const auto& name : marl::PresetNames()) std::cout << name << "\n";
      return 0;
    }
  } catch (const marl::ConfigError& e) {
    for (const auto& p : e.problems()) std::cerr << "config: " << p << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
