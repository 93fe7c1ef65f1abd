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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "json.hpp"
#include "marl/arena.h"
#include "marl/config.h"
#include "marl/dtap.h"
#include "marl/dynamics.h"
#include "marl/errors.h"
#include "marl/games.h"
#include "marl/policy.h"
#include "marl/runner.h"

namespace py = pybind11;

namespace marl {
namespace {

// Structured results cross the boundary as JSON text; the Python package
// decodes them.
std::string Dump(const nlohmann::json& j) { return j.dump(); }

GradientConstants ToConstants(const std::vector<double>& u) {
  if (u.size() != 4) throw ShapeError("expected 4 gradient constants");
  return {u[0], u[1], u[2], u[3]};
}

std::string ArenaReport(const std::string& text) {
  const ExperimentConfig c = ParseConfig(text);
  if (!c.arena) throw ConfigError("expected an arena config");
  const ArenaConfig config = ToArenaConfig(*c.arena);
  const auto runs = RunArena(config);
  std::vector<NashPoint> equilibria;
  try {
    equilibria = ReferenceEquilibria(config.game);
  } catch (const LookupError&) {
  }
  const auto r = Aggregate(runs, equilibria);
  nlohmann::json j;
  j["steps"] = r.steps;
  j["window"] = r.window;
  j["trailing_mean"] = r.trailing_mean;
  j["trailing_amplitude"] = r.trailing_amplitude;
  j["run_amplitude"] = r.run_amplitude;
  j["distance_to_ne"] = r.distance_to_ne ? nlohmann::json(*r.distance_to_ne)
                                         : nlohmann::json(nullptr);
  j["mean"] = r.mean;
  j["stddev"] = r.stddev;
  return Dump(j);
}

std::string DtapRun(const std::string& text) {
  const ExperimentConfig c = ParseConfig(text);
  if (!c.dtap) throw ConfigError("expected a dtap config");
  const DtapResult r = RunDtap(*c.dtap);
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : r.windows) {
    windows.push_back({{"window_end", w.window_end},
                       {"atst", w.atst ? nlohmann::json(*w.atst)
                                       : nlohmann::json(nullptr)},
                       {"completed", w.completed},
                       {"max_hops", w.max_hops}});
  }
  const auto steady = SteadyAtst(r);
  return Dump({{"windows", windows},
               {"generated", r.generated},
               {"completed", r.completed},
               {"digest", r.digest},
               {"steady_atst", steady ? nlohmann::json(*steady)
                                      : nlohmann::json(nullptr)}});
}

}  // namespace
}  // namespace marl

PYBIND11_MODULE(_marl_lab, m) {
  using namespace marl;
  m.doc() = "Gradient-ascent multiagent learning experiments.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleFloorError>(m, "InfeasibleFloorError",
                                               PyExc_ValueError);
  py::register_exception<LookupError>(m, "LookupError", PyExc_LookupError);

  m.def("project",
        [](const std::vector<double>& x, double floor) {
          return Project(x, floor).vec();
        },
        py::arg("x"), py::arg("floor") = 0.1);
  m.def("benchmark_names", &BenchmarkNames);
  m.def("gradient_constants", [](const std::string& game) {
    const auto u = ComputeGradientConstants(Benchmark(game));
    return std::vector<double>{u.u1, u.u2, u.u3, u.u4};
  });
  m.def("reference_equilibria", [](const std::string& game) {
    std::vector<std::vector<std::vector<double>>> out;
    for (const auto& ne : ReferenceEquilibria(Benchmark(game))) {
      std::vector<std::vector<double>> joint;
      for (const auto& p : ne.policy) joint.push_back(p.vec());
      out.push_back(joint);
    }
    return out;
  });
  m.def("expected_value",
        [](const std::string& game, int player,
           const std::vector<std::vector<double>>& joint) {
          JointPolicy pi;
          for (const auto& p : joint) pi.emplace_back(p);
          return ExpectedValue(Benchmark(game), player, pi);
        },
        py::arg("game"), py::arg("player"), py::arg("joint"));

  m.def("_arena_report", &ArenaReport, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("_dtap_run", &DtapRun, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def("integrate",
        [](const std::string& algorithm, const std::vector<double>& u,
           double p0, double q0, double horizon, double dt) {
          const auto traj = Integrate(
              MakeField(ParseAlgorithm(algorithm), ToConstants(u)),
              {0.0, p0, q0}, horizon, dt);
          std::vector<std::tuple<double, double, double>> out;
          out.reserve(traj.size());
          for (const auto& x : traj) out.emplace_back(x.t, x.p, x.q);
          return out;
        },
        py::arg("algorithm"), py::arg("u"), py::arg("p0"), py::arg("q0"),
        py::arg("horizon"), py::arg("dt") = 0.01);
  m.def("mixed_equilibrium", [](const std::vector<double>& u) {
    return MixedEquilibrium(ToConstants(u));
  });
  m.def("revolution",
        [](const std::string& algorithm, const std::vector<double>& u,
           double p_min1) -> py::object {
          const auto r = RevolutionAnalysis(
              MakeField(ParseAlgorithm(algorithm), ToConstants(u)), p_min1);
          if (!r) return py::none();
          py::dict d;
          d["t"] = std::vector<double>{r->t1, r->t2, r->t3, r->t4};
          d["p_min1"] = r->p_min1;
          d["q_max"] = r->q_max;
          d["p_max"] = r->p_max;
          d["q_min"] = r->q_min;
          d["p_min2"] = r->p_min2;
          return std::move(d);
        },
        py::arg("algorithm"), py::arg("u"), py::arg("p_min1"));
  m.def("grid_experiment",
        [](int n, int per_side, double horizon, double late_window) {
          GridResult r;
          {
            py::gil_scoped_release release;
            r = GridExperiment(n, per_side, horizon, late_window);
          }
          py::dict d;
          d["num_starts"] = r.num_starts;
          d["max_late_distance"] = r.max_late_distance;
          std::vector<std::tuple<double, double, double>> cells;
          for (const auto& c : r.cells) {
            cells.emplace_back(c.p_star, c.q_star, c.max_late_distance);
          }
          d["cells"] = cells;
          return d;
        },
        py::arg("num_ne_per_axis"), py::arg("starts_per_side"),
        py::arg("horizon"), py::arg("late_window"));

  m.def("_parse_config", [](const std::string& text) {
    return SerializeConfig(ParseConfig(text));
  });
  m.def("preset_names", &PresetNames);
  m.def("_preset", [](const std::string& name) {
    return SerializeConfig(Preset(name));
  });
  m.def("_run",
        [](const std::string& text, const std::string& out_dir,
           const std::string& format) {
          const auto config = ParseConfig(text);
          const OutputFormat f =
              format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
          py::gil_scoped_release release;
          return Dump(RunAndEmit(config, out_dir, f));
        },
        py::arg("config"), py::arg("out_dir"), py::arg("format") = "csv");
  m.def("validate", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& r : Validate()) out.emplace_back(r.name, r.passed, r.detail);
    return out;
  });
}
