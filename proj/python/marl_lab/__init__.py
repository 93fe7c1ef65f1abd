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

"""Gradient-ascent multiagent learning: games, learners, dynamics, DTAP."""

import json

from marl_lab._marl_lab import (
    ConfigError,
    DomainError,
    InfeasibleFloorError,
    LookupError,
    ShapeError,
    benchmark_names,
    expected_value,
    gradient_constants,
    grid_experiment,
    integrate,
    mixed_equilibrium,
    preset_names,
    project,
    reference_equilibria,
    revolution,
    validate,
)
from marl_lab import _marl_lab


def _text(config):
  return config if isinstance(config, str) else json.dumps(config)


def parse_config(config):
  """Validates a config (JSON text or dict); returns the normalized dict."""
  return json.loads(_marl_lab._parse_config(_text(config)))


def preset(name):
  """The config dict behind a figure preset."""
  return json.loads(_marl_lab._preset(name))


def arena_report(config):
  """Runs an arena config and returns the aggregated convergence report."""
  return json.loads(_marl_lab._arena_report(_text(config)))


def run_dtap(config):
  """Runs a dtap config; returns windows, counts and the steady-state ATST."""
  return json.loads(_marl_lab._dtap_run(_text(config)))


def run(config, out_dir, fmt="csv"):
  """Runs any config, writes its datasets to out_dir, returns the summary."""
  return json.loads(_marl_lab._run(_text(config), str(out_dir), fmt))


__all__ = [
    "ConfigError", "DomainError", "InfeasibleFloorError", "LookupError",
    "ShapeError", "arena_report", "benchmark_names", "expected_value",
    "gradient_constants", "grid_experiment", "integrate",
    "mixed_equilibrium", "parse_config", "preset", "preset_names", "project",
    "reference_equilibria", "revolution", "run", "run_dtap", "validate",
]
