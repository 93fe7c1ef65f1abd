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

#include "marl/runner.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "marl/arena.h"
#include "marl/dtap.h"
#include "marl/dynamics.h"
#include "marl/errors.h"
#include "marl/parallel.h"

namespace marl {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Cell {
  std::string text;
  bool quoted = false;
};

Cell Num(double v) { return {FormatNumber(v), false}; }
Cell Int(long long v) { return {std::to_string(v), false}; }
Cell Str(std::string_view v) { return {std::string(v), true}; }
Cell Empty() { return {"", false}; }

// Streams a table as CSV, or as {"columns": [...], "rows": [[...], ...]}.
class TableWriter {
 public:
  TableWriter(const fs::path& stem, OutputFormat format,
              std::vector<std::string> header)
      : format_(format) {
    path_ = stem;
    path_ += format == OutputFormat::kCsv ? ".csv" : ".json";
    out_.open(path_, std::ios::binary);
    if (!out_) throw std::runtime_error("cannot write " + path_.string());
    if (format_ == OutputFormat::kCsv) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
      }
      out_ << '\n';
    } else {
      out_ << "{\"columns\": " << json(header).dump() << ", \"rows\": [";
    }
  }

  void Row(const std::vector<Cell>& cells) {
    if (format_ == OutputFormat::kCsv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << (i ? "," : "") << cells[i].text;
      }
      out_ << '\n';
    } else {
      out_ << (rows_ ? ",\n" : "\n") << '[';
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ", ";
        if (cells[i].quoted) {
          out_ << json(cells[i].text).dump();
        } else {
          out_ << (cells[i].text.empty() ? "null" : cells[i].text);
        }
      }
      out_ << ']';
    }
    ++rows_;
  }

  void Close() {
    if (format_ == OutputFormat::kJson) out_ << "\n]}\n";
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + path_.string());
  }

 private:
  OutputFormat format_;
  fs::path path_;
  std::ofstream out_;
  long long rows_ = 0;
};

void WriteJson(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

json Vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json RunArenaMode(const ArenaSection& s, const fs::path& dir,
                  OutputFormat format) {
  const ArenaConfig config = ToArenaConfig(s);
  const std::vector<Trajectory> runs = RunArena(config);
  const std::vector<NashPoint> equilibria = ReferenceEquilibria(config.game);
  const ConvergenceReport report = Aggregate(runs, equilibria);

  TableWriter table(dir / "arena", format,
                    {"step", "run", "player", "action", "prob", "sampled",
                     "reward"});
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Trajectory& t = runs[r];
    for (long long row = 0; row < t.steps(); ++row) {
      if ((row + 1) % s.record_every != 0 && row + 1 != t.steps()) continue;
      for (int i = 0; i < t.num_players(); ++i) {
        const auto probs = t.Probs(row, i);
        for (int a = 0; a < t.num_actions(i); ++a) {
          table.Row({Int(row + 1), Int(static_cast<long long>(r)), Int(i),
                     Int(a), Num(probs[a]), Int(t.Sampled(row, i) == a),
                     Num(t.Reward(row, i))});
        }
      }
    }
  }
  table.Close();

  json summary;
  summary["mode"] = "arena";
  summary["game"] = config.game.name();
  summary["steps"] = report.steps;
  summary["window"] = report.window;
  summary["trailing_mean"] = report.trailing_mean;
  summary["trailing_amplitude"] = report.trailing_amplitude;
  summary["run_amplitude"] = report.run_amplitude;
  summary["distance_to_ne"] =
      report.distance_to_ne ? json(*report.distance_to_ne) : json(nullptr);
  json eq = json::array();
  for (const auto& ne : equilibria) {
    json players = json::array();
    for (const auto& p : ne.policy) players.push_back(Vec(p.vec()));
    eq.push_back(players);
  }
  summary["equilibria"] = eq;
  return summary;
}

Field2x2 FieldFor(const DynamicsSection& s) {
  Field2x2 field;
  field.algorithm = s.algorithm;
  field.u = s.u;
  if (s.u.u1 != 0.0 && s.u.u3 != 0.0) {
    std::tie(field.p_star, field.q_star) = MixedEquilibrium(s.u);
  }
  field.l_win = s.l_win;
  field.l_lose = s.l_lose;
  field.constrained = s.constrained;
  ValidateField(field);
  return field;
}

void EmitTrajectory(TableWriter& table, const std::vector<PhasePoint>& points,
                    double interval, std::string_view label) {
  if (points.empty()) return;
  if (interval <= 0.0) {
    for (const auto& x : points) {
      table.Row({Num(x.t), Num(x.p), Num(x.q), Str(label)});
    }
    return;
  }
  const double end = points.back().t;
  for (long long k = 0;; ++k) {
    const double t = points.front().t + k * interval;
    if (t > end + 1e-9) break;
    const PhasePoint x = SampleAt(points, t);
    table.Row({Num(x.t), Num(x.p), Num(x.q), Str(label)});
  }
}

json RunDynamicsMode(const DynamicsSection& s, const fs::path& dir,
                     OutputFormat format) {
  json summary;
  summary["mode"] = "dynamics";
  summary["kind"] = std::string(DynamicsKindName(s.kind));
  summary["u"] = {s.u.u1, s.u.u2, s.u.u3, s.u.u4};
  if (s.u.u1 != 0.0 && s.u.u3 != 0.0) {
    const auto [p, q] = MixedEquilibrium(s.u);
    summary["equilibrium"] = {p, q};
  }
  const std::string label(AlgorithmName(s.algorithm));

  if (s.kind == DynamicsKind::kGrid) {
    const GridResult grid = GridExperiment(s.ne_per_axis, s.starts_per_side,
                                           s.horizon, s.late_window, s.dt);
    TableWriter table(dir / "grid", format,
                      {"p_star", "q_star", "max_late_distance"});
    for (const auto& c : grid.cells) {
      table.Row({Num(c.p_star), Num(c.q_star), Num(c.max_late_distance)});
    }
    table.Close();
    summary["num_starts"] = grid.num_starts;
    summary["max_late_distance"] = grid.max_late_distance;
    return summary;
  }

  TableWriter table(dir / "dynamics", format, {"t", "p", "q", "algorithm"});
  switch (s.kind) {
    case DynamicsKind::kTrajectory: {
      const auto points = Integrate(FieldFor(s), {0.0, s.p0, s.q0},
                                    s.horizon, s.dt);
      EmitTrajectory(table, points, s.sample_interval, label);
      summary["final"] = {points.back().p, points.back().q};
      break;
    }
    case DynamicsKind::kBoundary: {
      const Field2x2 field = FieldFor(s);
      const auto starts = BoundaryStarts(s.starts_per_side);
      for (const auto& [p, q] : starts) {
        EmitTrajectory(table, Integrate(field, {0.0, p, q}, s.horizon, s.dt),
                       s.sample_interval, label);
      }
      summary["num_starts"] = starts.size();
      break;
    }
    case DynamicsKind::kPortraits: {
      json finals;
      for (const auto& lt : ComparePortraits(s.u, {0.0, s.p0, s.q0}, s.horizon,
                                             s.dt, s.l_win, s.l_lose)) {
        EmitTrajectory(table, lt.points, s.sample_interval, lt.algorithm);
        finals[lt.algorithm] = {lt.points.back().p, lt.points.back().q};
      }
      summary["final"] = finals;
      break;
    }
    case DynamicsKind::kRevolution: {
      const Field2x2 field = FieldFor(s);
      const auto rec = RevolutionAnalysis(field, s.p0, s.horizon, s.dt);
      if (!rec) {
        summary["revolution"] = nullptr;
        break;
      }
      const auto [p_star, q_star] = MixedEquilibrium(s.u);
      EmitTrajectory(table, Integrate(field, {0.0, s.p0, q_star}, rec->t4, s.dt),
                     s.sample_interval, label);
      summary["revolution"] = {{"t", {rec->t1, rec->t2, rec->t3, rec->t4}},
                               {"p_min1", rec->p_min1},
                               {"q_max", rec->q_max},
                               {"p_max", rec->p_max},
                               {"q_min", rec->q_min},
                               {"p_min2", rec->p_min2}};
      break;
    }
    case DynamicsKind::kGrid:
      break;
  }
  table.Close();
  return summary;
}

json RunDtapMode(const DtapConfig& c, const fs::path& dir, OutputFormat format) {
  const DtapResult result = RunDtap(c);
  TableWriter table(dir / "dtap", format,
                    {"window_end", "atst", "completed", "max_hops"});
  for (const auto& w : result.windows) {
    table.Row({Int(w.window_end), w.atst ? Num(*w.atst) : Empty(),
               Int(w.completed), Int(w.max_hops)});
  }
  table.Close();
  const auto steady = SteadyAtst(result);
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(result.digest));
  return {{"mode", "dtap"},
          {"algorithm", std::string(AlgorithmName(c.learner.algorithm))},
          {"steady_atst", steady ? json(*steady) : json(nullptr)},
          {"generated", result.generated},
          {"completed", result.completed},
          {"digest", digest}};
}

json RunSweepMode(const SweepSection& s, const fs::path& dir,
                  OutputFormat format) {
  struct Job {
    ExperimentConfig config;
    std::string name;
  };
  std::vector<Job> jobs;
  const std::vector<std::uint64_t> seeds =
      s.seeds.empty() ? std::vector<std::uint64_t>{0} : s.seeds;
  for (std::size_t v = 0; v < s.variants.size(); ++v) {
    for (std::uint64_t seed : seeds) {
      json merged = s.base;
      merged.merge_patch(s.variants[v]);
      ExperimentConfig c = ParseConfigJson(merged);
      std::string name = "v" + std::to_string(v);
      if (!s.seeds.empty()) {
        OverrideSeed(c, seed);
        name += "-seed" + std::to_string(seed);
      }
      jobs.push_back({std::move(c), std::move(name)});
    }
  }
  std::vector<json> summaries(jobs.size());
  ParallelFor(static_cast<int>(jobs.size()), [&](int i) {
    summaries[i] = RunAndEmit(jobs[i].config, (dir / jobs[i].name).string(),
                              format);
  });
  json runs = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    runs.push_back({{"name", jobs[i].name},
                    {"config", ConfigToJson(jobs[i].config)},
                    {"summary", summaries[i]}});
  }
  return {{"mode", "sweep"}, {"runs", runs}};
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

json RunAndEmit(const ExperimentConfig& config, const std::string& out_dir,
                OutputFormat format) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());
  json summary;
  switch (config.mode) {
    case Mode::kArena: summary = RunArenaMode(*config.arena, dir, format); break;
    case Mode::kDynamics:
      summary = RunDynamicsMode(*config.dynamics, dir, format);
      break;
    case Mode::kDtap: summary = RunDtapMode(*config.dtap, dir, format); break;
    case Mode::kSweep: summary = RunSweepMode(*config.sweep, dir, format); break;
  }
  WriteJson(dir / "config.json", ConfigToJson(config));
  WriteJson(dir / "summary.json", summary);
  return summary;
}

}  // namespace marl
