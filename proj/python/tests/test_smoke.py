# Copyright 2026 The MARL Lab Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import marl_lab


def test_project():
  assert marl_lab.project([0.7, 0.5], 0.0) == pytest.approx([0.6, 0.4])
  assert marl_lab.project([1.2, -0.1], 0.1) == pytest.approx([0.9, 0.1])
  with pytest.raises(marl_lab.InfeasibleFloorError):
    marl_lab.project([0.2, 0.3, 0.5], 0.4)


def test_games():
  assert "matching-pennies" in marl_lab.benchmark_names()
  assert marl_lab.gradient_constants("tricky") == [-2, 1, 2, -1]
  (ne,) = marl_lab.reference_equilibria("biased")
  assert ne[0] == pytest.approx([0.15, 0.85])
  assert marl_lab.expected_value("coordination", 0, [[1, 0], [1, 0]]) == 2
  with pytest.raises(LookupError):
    marl_lab.gradient_constants("chess")


def test_arena_report():
  report = marl_lab.arena_report({
      "mode": "arena",
      "arena": {"game": "matching-pennies", "algorithm": "wpl",
                "init": [[0.1, 0.9], [0.9, 0.1]]},
  })
  assert report["distance_to_ne"] < 0.1
  assert max(max(a) for a in report["trailing_amplitude"]) < 0.15
  assert len(report["mean"]) == 40000


def test_dynamics():
  u = [0.5, -0.45, -0.5, 0.45]
  assert marl_lab.mixed_equilibrium(u) == pytest.approx((0.9, 0.9))
  t, p, q = marl_lab.integrate("wpl", u, 0.1, 0.1, 800.0)[-1]
  assert t == pytest.approx(800.0)
  assert math.hypot(p - 0.9, q - 0.9) < 0.05
  rec = marl_lab.revolution("wpl", [4, -2, -4, 2], 0.2)
  assert rec["p_min2"] > 0.2
  assert marl_lab.revolution("wpl", [3, -1, 3, -2], 0.2) is None
  grid = marl_lab.grid_experiment(1, 10, 0.0, 0.0)
  assert grid["max_late_distance"] == pytest.approx(math.sqrt(0.5))


def test_config_errors_are_aggregated():
  with pytest.raises(marl_lab.ConfigError) as err:
    marl_lab.parse_config({"mode": "arena", "arena": {"steps": -1, "runs": 0}})
  assert "steps" in str(err.value) and "runs" in str(err.value)
  with pytest.raises(ValueError, match="line 2"):
    marl_lab.parse_config('{\n "mode": ,\n}')


def test_presets_round_trip():
  for name in marl_lab.preset_names():
    cfg = marl_lab.preset(name)
    assert marl_lab.parse_config(cfg) == cfg


def test_dtap_small():
  result = marl_lab.run_dtap({
      "mode": "dtap",
      "dtap": {"width": 3, "height": 3,
               "source": {"x": 1, "y": 1, "width": 1, "height": 1},
               "arrival_rate": 0.05, "horizon": 5000, "tau": 500},
  })
  assert len(result["windows"]) == 10
  assert result["completed"] <= result["generated"]
  assert result["steady_atst"] > 0


def test_run_writes_datasets(tmp_path):
  summary = marl_lab.run(marl_lab.preset("fig4"), tmp_path)
  assert summary["equilibrium"] == pytest.approx([0.5, 0.5])
  header = (tmp_path / "dynamics.csv").read_text().splitlines()[0]
  assert header == "t,p,q,algorithm"


def test_validate():
  assert all(passed for _, passed, _ in marl_lab.validate())
