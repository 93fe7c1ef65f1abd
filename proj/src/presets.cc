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

#include <map>
#include <string>

#include "marl/config.h"
#include "marl/errors.h"

namespace marl {
namespace {

// Two-action protocol shared by the 2x2 presets.
constexpr const char* kTwoByTwo = R"({"eta": 0.002, "alpha": 0.1, "epsilon": 0.1,
  "steps": 40000, "runs": 10, "init": [[0.1, 0.9], [0.9, 0.1]],
  "record_every": 100})";

constexpr const char* kThreeAction = R"({"eta": 0.001, "steps": 100000,
  "runs": 10, "init": [[0.1, 0.8, 0.1], [0.8, 0.1, 0.1]],
  "record_every": 100})";

nlohmann::json Arena(const char* protocol, nlohmann::json patch) {
  nlohmann::json a = nlohmann::json::parse(protocol);
  a.merge_patch(patch);
  return {{"mode", "arena"}, {"arena", a}};
}

nlohmann::json Sweep(nlohmann::json base, nlohmann::json variants) {
  return {{"mode", "sweep"},
          {"sweep", {{"base", base}, {"variants", variants}}}};
}

nlohmann::json Dynamics(nlohmann::json body) {
  return {{"mode", "dynamics"}, {"dynamics", body}};
}

const std::map<std::string, nlohmann::json>& Table() {
  using nlohmann::json;
  static const auto* table = new std::map<std::string, json>{
      {"fig4", Dynamics({{"kind", "trajectory"}, {"game", "matching-pennies"},
                         {"start", {0.1, 0.9}}, {"horizon", 40.0}})},
      {"fig5", Arena(kTwoByTwo, {{"game", "matching-pennies"},
                                 {"eta", 0.001}})},
      {"fig6", Dynamics({{"kind", "boundary"}, {"ne", {0.9, 0.9}},
                         {"horizon", 800.0}, {"sample_interval", 1.0}})},
      {"fig7", Dynamics({{"kind", "boundary"}, {"ne", {0.9, 0.9}},
                         {"horizon", 800.0}, {"sample_interval", 1.0}})},
      {"fig8", Dynamics({{"kind", "grid"}, {"horizon", 800.0},
                         {"late_window", 100.0}})},
      {"fig9", Dynamics({{"kind", "portraits"}, {"ne", {0.5, 0.5}},
                         {"start", {0.0, 0.5}}, {"horizon", 60.0}})},
      {"fig10", Dynamics({{"kind", "portraits"}, {"ne", {0.5, 0.1}},
                          {"start", {0.0, 0.1}}, {"horizon", 60.0}})},
      {"fig11", Dynamics({{"kind", "portraits"}, {"game", "coordination"},
                          {"start", {0.1, 0.6}}, {"horizon", 20.0}})},
      {"fig12a", Arena(kTwoByTwo, {{"game", "coordination"}})},
      {"fig12b", Arena(kTwoByTwo, {{"game", "matching-pennies"}})},
      {"fig12c", Arena(kTwoByTwo, {{"game", "tricky"}})},
      {"fig13", Sweep(Arena(kTwoByTwo, {{"game", "coordination"}}),
                      {{{"arena", {{"algorithms", {"giga"}}}}},
                       {{"arena", {{"algorithms", {"phc-wolf"}}}}},
                       {{"arena", {{"algorithms", {"giga-wolf"}}}}}})},
      {"fig14", Sweep(Arena(kTwoByTwo, {{"game", "matching-pennies"}}),
                      {{{"arena", {{"algorithms", {"giga"}}}}},
                       {{"arena", {{"algorithms", {"phc-wolf"}}}}},
                       {{"arena", {{"algorithms", {"giga-wolf"}}}}}})},
      {"fig15", Sweep(Arena(kTwoByTwo, {{"game", "tricky"}}),
                      {{{"arena", {{"algorithms", {"giga"}}}}},
                       {{"arena", {{"algorithms", {"phc-wolf"}}}}},
                       {{"arena", {{"algorithms", {"giga-wolf"}}}}}})},
      {"fig16", Sweep(Arena(kThreeAction, {{"game", "rock-paper-scissors"}}),
                      {{{"arena", {{"algorithms", {"giga-wolf"}}, {"alpha", 0.1}}}},
                       {{"arena", {{"algorithms", {"wpl"}}, {"alpha", 0.1}}}},
                       {{"arena", {{"algorithms", {"giga-wolf"}}, {"alpha", 1.0}}}},
                       {{"arena", {{"algorithms", {"wpl"}}, {"alpha", 1.0}}}}})},
      {"fig17", Sweep(Arena(kThreeAction, {{"game", "shapleys"}}),
                      {{{"arena", {{"algorithms", {"giga-wolf"}}, {"alpha", 0.1}}}},
                       {{"arena", {{"algorithms", {"giga-wolf"}}, {"alpha", 1.0}}}},
                       {{"arena", {{"algorithms", {"wpl"}}, {"alpha", 1.0}}}}})},
      {"fig18", Arena(kTwoByTwo, {{"game", "biased"}, {"alpha", 0.01},
                                  {"steps", 100000}})},
      {"fig19", Arena(kTwoByTwo, {{"game", "biased"}, {"alpha", 1.0},
                                  {"steps", 100000}})},
      {"fig21", Sweep({{"mode", "dtap"},
                       {"dtap", {{"eta", 0.0001}, {"alpha", 1.0},
                                 {"horizon", 200000}}}},
                      {{{"dtap", {{"algorithm", "wpl"}}}},
                       {{"dtap", {{"algorithm", "giga-wolf"}}}},
                       {{"dtap", {{"algorithm", "giga"}}}}})},
  };
  return *table;
}

}  // namespace

std::vector<std::string> PresetNames() {
  std::vector<std::string> names;
  for (const auto& [name, body] : Table()) names.push_back(name);
  return names;
}

ExperimentConfig Preset(std::string_view name) {
  const auto& table = Table();
  auto it = table.find(std::string(name));
  if (it == table.end()) {
    throw LookupError("unknown preset '" + std::string(name) + "'");
  }
  nlohmann::json j = it->second;
  j["output"] = "out/" + it->first;
  return ParseConfigJson(j);
}

}  // namespace marl
