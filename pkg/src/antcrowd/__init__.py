"""Agent-based crowd simulation with antagonistic emotion and evolutionary games."""

from __future__ import annotations

__version__ = "0.1.0"

from .domain import (
    Role,
    ScenarioConfig,
    Situation,
    Strategy,
    init_state,
    load_scenario,
    parse_scenario,
)
from .engine import batch_run, run, step, sweep

__all__ = [
    "Role",
    "ScenarioConfig",
    "Situation",
    "Strategy",
    "__version__",
    "batch_run",
    "init_state",
    "load_scenario",
    "parse_scenario",
    "run",
    "step",
    "sweep",
]
