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

#include "marl/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "marl/dynamics.h"
#include "marl/errors.h"

namespace marl {
namespace {

using nlohmann::json;

// Reads keys of one JSON object, recording type errors and unknown keys.
class Fields {
 public:
  Fields(const json& obj, std::string path, std::vector<std::string>* problems)
      : obj_(obj), path_(std::move(path)), problems_(problems) {
    if (!obj_.is_object()) {
      Problem("", "expected an object");
      valid_ = false;
    }
  }

  bool Has(const char* key) const {
    return valid_ && obj_.contains(key);
  }

  template <typename T>
  void Read(const char* key, T* out) {
    seen_.insert(key);
    if (!Has(key)) return;
    try {
      *out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      Problem(key, std::string("expected ") + TypeName<T>());
    }
  }

  const json* Raw(const char* key) {
    seen_.insert(key);
    return Has(key) ? &obj_.at(key) : nullptr;
  }

  void Problem(const std::string& key, const std::string& what) {
    std::string where = path_;
    if (!key.empty()) where += (where.empty() ? "" : ".") + key;
    problems_->push_back(where + ": " + what);
  }

  void Finish() {
    if (!valid_) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) Problem(key, "unknown key");
    }
  }

 private:
  template <typename T>
  static const char* TypeName() {
    if constexpr (std::is_same_v<T, std::string>) {
      return "a string";
    } else if constexpr (std::is_same_v<T, bool>) {
      return "a boolean";
    } else if constexpr (std::is_integral_v<T>) {
      return "an integer";
    } else if constexpr (std::is_floating_point_v<T>) {
      return "a number";
    } else {
      return "an array of numbers";
    }
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string>* problems_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

void Positive(Fields& f, const char* key, double v) {
  if (!(v > 0.0)) f.Problem(key, "must be > 0");
}

void ReadAlgorithm(Fields& f, const char* key, Algorithm* out) {
  std::string name;
  f.Read(key, &name);
  if (name.empty()) return;
  try {
    *out = ParseAlgorithm(name);
  } catch (const LookupError&) {
    f.Problem(key, "unknown algorithm '" + name + "'");
  }
}

ArenaSection ParseArena(const json& j, std::vector<std::string>* problems) {
  ArenaSection s;
  Fields f(j, "arena", problems);
  f.Read("game", &s.game);
  f.Read("game_file", &s.game_file);
  if (f.Has("algorithm") && f.Has("algorithms")) {
    f.Problem("algorithm", "give either 'algorithm' or 'algorithms'");
  }
  if (const json* a = f.Raw("algorithm")) {
    s.algorithms.clear();
    s.algorithms.push_back(Algorithm::kWpl);
    ReadAlgorithm(f, "algorithm", &s.algorithms[0]);
    (void)a;
  }
  if (const json* list = f.Raw("algorithms")) {
    s.algorithms.clear();
    if (!list->is_array() || list->empty()) {
      f.Problem("algorithms", "expected a non-empty array of names");
    } else {
      for (const auto& item : *list) {
        try {
          s.algorithms.push_back(ParseAlgorithm(item.get<std::string>()));
        } catch (const std::exception&) {
          f.Problem("algorithms", "unknown algorithm " + item.dump());
        }
      }
    }
  }
  f.Read("eta", &s.eta);
  f.Read("alpha", &s.alpha);
  f.Read("epsilon", &s.epsilon);
  f.Read("delta_ratio", &s.delta_ratio);
  f.Read("l_win", &s.l_win);
  f.Read("l_lose", &s.l_lose);
  f.Read("steps", &s.steps);
  f.Read("runs", &s.runs);
  f.Read("init", &s.init);
  f.Read("seed", &s.seed);
  f.Read("record_every", &s.record_every);
  std::string gradient = "estimated";
  f.Read("gradient", &gradient);
  if (gradient == "estimated") {
    s.gradient = GradientMode::kEstimated;
  } else if (gradient == "exact") {
    s.gradient = GradientMode::kExact;
  } else {
    f.Problem("gradient", "expected 'estimated' or 'exact'");
  }
  f.Finish();

  Positive(f, "eta", s.eta);
  if (!(s.alpha > 0.0 && s.alpha <= 1.0)) f.Problem("alpha", "must be in (0, 1]");
  if (!(s.epsilon >= 0.0)) f.Problem("epsilon", "must be >= 0");
  if (s.steps <= 0) f.Problem("steps", "must be > 0");
  if (s.runs <= 0) f.Problem("runs", "must be > 0");
  if (s.record_every <= 0) f.Problem("record_every", "must be > 0");
  if (s.game_file.empty()) {
    const auto names = BenchmarkNames();
    if (std::find(names.begin(), names.end(), s.game) == names.end()) {
      f.Problem("game", "unknown benchmark '" + s.game + "'");
    }
  }
  return s;
}

DynamicsKind ParseKind(const std::string& name, Fields& f) {
  for (DynamicsKind k : {DynamicsKind::kTrajectory, DynamicsKind::kBoundary,
                         DynamicsKind::kGrid, DynamicsKind::kPortraits,
                         DynamicsKind::kRevolution}) {
    if (name == DynamicsKindName(k)) return k;
  }
  f.Problem("kind", "unknown dynamics kind '" + name + "'");
  return DynamicsKind::kTrajectory;
}

DynamicsSection ParseDynamics(const json& j, std::vector<std::string>* problems) {
  DynamicsSection s;
  Fields f(j, "dynamics", problems);
  std::string kind = std::string(DynamicsKindName(s.kind));
  f.Read("kind", &kind);
  s.kind = ParseKind(kind, f);
  ReadAlgorithm(f, "algorithm", &s.algorithm);
  const int sources = f.Has("u") + f.Has("game") + f.Has("ne");
  if (sources > 1) f.Problem("u", "give only one of 'u', 'game', 'ne'");
  std::vector<double> u;
  f.Read("u", &u);
  if (f.Has("u")) {
    if (u.size() != 4) {
      f.Problem("u", "expected 4 numbers");
    } else {
      s.u = {u[0], u[1], u[2], u[3]};
    }
  }
  std::string game;
  f.Read("game", &game);
  if (!game.empty()) {
    try {
      s.u = ComputeGradientConstants(Benchmark(game));
    } catch (const std::exception& e) {
      f.Problem("game", e.what());
    }
  }
  std::vector<double> ne;
  f.Read("ne", &ne);
  if (f.Has("ne")) {
    if (ne.size() != 2) {
      f.Problem("ne", "expected [p*, q*]");
    } else {
      s.u = ConstantsForEquilibrium(ne[0], ne[1]);
    }
  }
  std::vector<double> start;
  f.Read("start", &start);
  if (f.Has("start")) {
    if (start.size() != 2) {
      f.Problem("start", "expected [p, q]");
    } else {
      s.p0 = start[0];
      s.q0 = start[1];
    }
  }
  f.Read("horizon", &s.horizon);
  f.Read("dt", &s.dt);
  f.Read("ne_per_axis", &s.ne_per_axis);
  f.Read("starts_per_side", &s.starts_per_side);
  f.Read("late_window", &s.late_window);
  f.Read("sample_interval", &s.sample_interval);
  f.Read("l_win", &s.l_win);
  f.Read("l_lose", &s.l_lose);
  f.Read("constrained", &s.constrained);
  f.Finish();

  if (s.algorithm != Algorithm::kIga && s.algorithm != Algorithm::kIgaWolf &&
      s.algorithm != Algorithm::kWpl) {
    f.Problem("algorithm", "dynamics support iga, iga-wolf and wpl");
  }
  if (!(s.p0 >= 0.0 && s.p0 <= 1.0 && s.q0 >= 0.0 && s.q0 <= 1.0)) {
    f.Problem("start", "must lie in [0,1]^2");
  }
  if (!(s.horizon >= 0.0)) f.Problem("horizon", "must be >= 0");
  Positive(f, "dt", s.dt);
  if (s.ne_per_axis <= 0) f.Problem("ne_per_axis", "must be > 0");
  if (s.starts_per_side < 2) f.Problem("starts_per_side", "must be >= 2");
  if (!(s.late_window >= 0.0)) f.Problem("late_window", "must be >= 0");
  if (!(s.sample_interval >= 0.0)) f.Problem("sample_interval", "must be >= 0");
  Positive(f, "l_win", s.l_win);
  Positive(f, "l_lose", s.l_lose);
  const bool needs_ne = s.algorithm == Algorithm::kIgaWolf ||
                        s.kind == DynamicsKind::kPortraits ||
                        s.kind == DynamicsKind::kRevolution;
  if (needs_ne && (s.u.u1 == 0.0 || s.u.u3 == 0.0)) {
    f.Problem("u", "u1 and u3 must be non-zero for this kind");
  }
  return s;
}

DtapConfig ParseDtap(const json& j, std::vector<std::string>* problems) {
  DtapConfig c;
  Fields f(j, "dtap", problems);
  f.Read("width", &c.width);
  f.Read("height", &c.height);
  f.Read("adjacent_delay", &c.adjacent_delay);
  f.Read("service_rate", &c.service_rate);
  if (const json* src = f.Raw("source")) {
    Fields g(*src, "dtap.source", problems);
    g.Read("x", &c.source_x);
    g.Read("y", &c.source_y);
    g.Read("width", &c.source_width);
    g.Read("height", &c.source_height);
    g.Finish();
  }
  f.Read("arrival_rate", &c.arrival_rate);
  ReadAlgorithm(f, "algorithm", &c.learner.algorithm);
  f.Read("eta", &c.learner.eta);
  f.Read("alpha", &c.learner.alpha);
  f.Read("epsilon", &c.learner.epsilon);
  f.Read("horizon", &c.horizon);
  f.Read("tau", &c.tau);
  f.Read("seed", &c.seed);
  f.Finish();
  try {
    ValidateDtapConfig(c);
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) problems->push_back("dtap: " + p);
  }
  return c;
}

json MergedVariant(const json& base, const json& patch, std::uint64_t seed,
                   bool set_seed) {
  json merged = base;
  merged.merge_patch(patch);
  if (set_seed) {
    for (const char* section : {"arena", "dtap"}) {
      if (merged.contains(section)) merged[section]["seed"] = seed;
    }
  }
  return merged;
}

SweepSection ParseSweep(const json& j, std::vector<std::string>* problems) {
  SweepSection s;
  Fields f(j, "sweep", problems);
  if (const json* base = f.Raw("base")) s.base = *base;
  if (const json* variants = f.Raw("variants")) {
    if (!variants->is_array()) {
      f.Problem("variants", "expected an array of objects");
    } else {
      s.variants.assign(variants->begin(), variants->end());
    }
  }
  f.Read("seeds", &s.seeds);
  f.Finish();
  if (s.base.is_null()) {
    f.Problem("base", "missing");
    return s;
  }
  if (s.variants.empty()) s.variants.push_back(json::object());
  for (std::size_t i = 0; i < s.variants.size(); ++i) {
    try {
      const ExperimentConfig c =
          ParseConfigJson(MergedVariant(s.base, s.variants[i], 0, false));
      if (c.mode == Mode::kSweep) {
        f.Problem("base", "sweeps cannot be nested");
        break;
      }
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) {
        problems->push_back("sweep.variants[" + std::to_string(i) + "]: " + p);
      }
    }
  }
  return s;
}

int LineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

json AlgorithmsJson(const std::vector<Algorithm>& algorithms) {
  json out = json::array();
  for (Algorithm a : algorithms) out.push_back(std::string(AlgorithmName(a)));
  return out;
}

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kArena: return "arena";
    case Mode::kDynamics: return "dynamics";
    case Mode::kDtap: return "dtap";
    case Mode::kSweep: return "sweep";
  }
  return "?";
}

std::string_view DynamicsKindName(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::kTrajectory: return "trajectory";
    case DynamicsKind::kBoundary: return "boundary";
    case DynamicsKind::kGrid: return "grid";
    case DynamicsKind::kPortraits: return "portraits";
    case DynamicsKind::kRevolution: return "revolution";
  }
  return "?";
}

ExperimentConfig ParseConfigJson(const json& j) {
  std::vector<std::string> problems;
  ExperimentConfig c;
  Fields f(j, "", &problems);
  if (!j.is_object()) throw ConfigError(std::move(problems));

  const char* sections[] = {"arena", "dynamics", "dtap", "sweep"};
  const Mode modes[] = {Mode::kArena, Mode::kDynamics, Mode::kDtap, Mode::kSweep};
  std::string mode;
  f.Read("mode", &mode);
  bool mode_known = false;
  if (!mode.empty()) {
    for (int i = 0; i < 4; ++i) {
      if (mode == sections[i]) {
        c.mode = modes[i];
        mode_known = true;
      }
    }
    if (!mode_known) f.Problem("mode", "unknown mode '" + mode + "'");
  } else {
    int present = 0;
    for (int i = 0; i < 4; ++i) {
      if (j.contains(sections[i])) {
        c.mode = modes[i];
        ++present;
      }
    }
    if (present == 1) {
      mode_known = true;
    } else {
      f.Problem("mode", "missing");
    }
  }
  f.Read("output", &c.output);
  for (int i = 0; i < 4; ++i) {
    const json* section = f.Raw(sections[i]);
    if (section == nullptr) continue;
    if (!mode_known || modes[i] != c.mode) {
      f.Problem(sections[i], "section does not match mode");
    }
  }
  f.Finish();
  if (mode_known) {
    const json empty = json::object();
    const char* key = sections[static_cast<int>(c.mode)];
    const json& body = j.contains(key) ? j.at(key) : empty;
    switch (c.mode) {
      case Mode::kArena: c.arena = ParseArena(body, &problems); break;
      case Mode::kDynamics: c.dynamics = ParseDynamics(body, &problems); break;
      case Mode::kDtap: c.dtap = ParseDtap(body, &problems); break;
      case Mode::kSweep: c.sweep = ParseSweep(body, &problems); break;
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

ExperimentConfig ParseConfig(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError({"line " + std::to_string(LineOf(text, e.byte)) +
                       ": syntax error: " + e.what()});
  }
  return ParseConfigJson(j);
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

json ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["mode"] = std::string(ModeName(c.mode));
  j["output"] = c.output;
  if (c.arena) {
    const ArenaSection& s = *c.arena;
    json a;
    a["game"] = s.game;
    if (!s.game_file.empty()) a["game_file"] = s.game_file;
    a["algorithms"] = AlgorithmsJson(s.algorithms);
    a["eta"] = s.eta;
    a["alpha"] = s.alpha;
    a["epsilon"] = s.epsilon;
    a["delta_ratio"] = s.delta_ratio;
    a["l_win"] = s.l_win;
    a["l_lose"] = s.l_lose;
    a["steps"] = s.steps;
    a["runs"] = s.runs;
    a["init"] = s.init;
    a["seed"] = s.seed;
    a["gradient"] = s.gradient == GradientMode::kExact ? "exact" : "estimated";
    a["record_every"] = s.record_every;
    j["arena"] = a;
  }
  if (c.dynamics) {
    const DynamicsSection& s = *c.dynamics;
    json d;
    d["kind"] = std::string(DynamicsKindName(s.kind));
    d["algorithm"] = std::string(AlgorithmName(s.algorithm));
    d["u"] = {s.u.u1, s.u.u2, s.u.u3, s.u.u4};
    d["start"] = {s.p0, s.q0};
    d["horizon"] = s.horizon;
    d["dt"] = s.dt;
    d["ne_per_axis"] = s.ne_per_axis;
    d["starts_per_side"] = s.starts_per_side;
    d["late_window"] = s.late_window;
    d["sample_interval"] = s.sample_interval;
    d["l_win"] = s.l_win;
    d["l_lose"] = s.l_lose;
    d["constrained"] = s.constrained;
    j["dynamics"] = d;
  }
  if (c.dtap) {
    const DtapConfig& s = *c.dtap;
    json d;
    d["width"] = s.width;
    d["height"] = s.height;
    d["adjacent_delay"] = s.adjacent_delay;
    d["service_rate"] = s.service_rate;
    d["source"] = {{"x", s.source_x},
                   {"y", s.source_y},
                   {"width", s.source_width},
                   {"height", s.source_height}};
    d["arrival_rate"] = s.arrival_rate;
    d["algorithm"] = std::string(AlgorithmName(s.learner.algorithm));
    d["eta"] = s.learner.eta;
    d["alpha"] = s.learner.alpha;
    d["epsilon"] = s.learner.epsilon;
    d["horizon"] = s.horizon;
    d["tau"] = s.tau;
    d["seed"] = s.seed;
    j["dtap"] = d;
  }
  if (c.sweep) {
    j["sweep"] = {{"base", c.sweep->base},
                  {"variants", c.sweep->variants},
                  {"seeds", c.sweep->seeds}};
  }
  return j;
}

std::string SerializeConfig(const ExperimentConfig& config) {
  return ConfigToJson(config).dump(2) + "\n";
}

void OverrideSeed(ExperimentConfig& c, std::uint64_t seed) {
  if (c.arena) c.arena->seed = seed;
  if (c.dtap) c.dtap->seed = seed;
  if (c.sweep) {
    for (const char* section : {"arena", "dtap"}) {
      if (c.sweep->base.contains(section)) {
        c.sweep->base[section]["seed"] = seed;
      }
    }
  }
}

ArenaConfig ToArenaConfig(const ArenaSection& s) {
  ArenaConfig config{s.game_file.empty() ? Benchmark(s.game)
                                         : LoadGameFile(s.game_file),
                     {}, {}, s.steps, s.runs, s.seed, s.gradient};
  const int n = config.game.num_players();
  if (s.algorithms.size() != 1 && static_cast<int>(s.algorithms.size()) != n) {
    throw ConfigError({"arena.algorithms: need 1 or " + std::to_string(n) +
                       " entries"});
  }
  for (int i = 0; i < n; ++i) {
    LearnerParams p;
    p.algorithm = s.algorithms[s.algorithms.size() == 1 ? 0 : i];
    p.eta = s.eta;
    p.alpha = s.alpha;
    p.epsilon = s.epsilon;
    p.delta_ratio = s.delta_ratio;
    p.l_win = s.l_win;
    p.l_lose = s.l_lose;
    config.learners.push_back(p);
  }
  for (const auto& probs : s.init) {
    try {
      config.initial.emplace_back(probs);
    } catch (const std::exception& e) {
      throw ConfigError({std::string("arena.init: ") + e.what()});
    }
  }
  ValidateArenaConfig(config);
  return config;
}

}  // namespace marl
