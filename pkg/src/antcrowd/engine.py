"""Tick loop, single-run driver, seeded batches and parameter sweeps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .behavior import choose_moves, commit_moves, death_phase
from .domain import Role, ScenarioConfig, SimulationTrace, Snapshot, World, init_state
from .emotion import emotion_phase
from .game import assess_situations, deterrent_force, evolve_strategies, game_phase
from .geometry import pairwise_distances
from .metrics import active_ratio, cooperation_ratio, mean_emotion

SERIES_COLUMNS = (
    "live_civilians",
    "live_activists",
    "live_cops",
    "dead_total",
    "active_ratio",
    "coop_ratio_cops",
    "coop_ratio_activists",
    "mean_e_civ",
    "mean_e_act",
    "mean_e_cop",
)

ONE_SIDE_ELIMINATED = "one side eliminated"
MAX_TICKS = "max_ticks"


def snapshot(world: World) -> Snapshot:
    return Snapshot(
        tick=world.tick,
        role=world.role.copy(),
        pos=world.pos.copy(),
        emotion=world.emotion.copy(),
        force=deterrent_force(world.emotion),
        strategy=world.strategy,
        alive=world.alive.copy(),
    )


def series_row(state: World | Snapshot) -> dict[str, float]:
    live = state.alive
    return {
        "live_civilians": float(np.count_nonzero(live & (state.role == int(Role.CIVILIAN)))),
        "live_activists": float(np.count_nonzero(live & (state.role == int(Role.ACTIVIST)))),
        "live_cops": float(np.count_nonzero(live & (state.role == int(Role.COP)))),
        "dead_total": float(np.count_nonzero(~live)),
        "active_ratio": active_ratio(state),
        "coop_ratio_cops": cooperation_ratio(state, Role.COP),
        "coop_ratio_activists": cooperation_ratio(state, Role.ACTIVIST),
        "mean_e_civ": mean_emotion(state, Role.CIVILIAN),
        "mean_e_act": mean_emotion(state, Role.ACTIVIST),
        "mean_e_cop": mean_emotion(state, Role.COP),
    }


def step(world: World, rng: np.random.Generator, check: bool = False) -> World:
    """Advance one tick in place: emotion, game, evolution, movement, death."""
    if not world.alive.any():
        raise ValueError("step needs at least one live agent")
    cfg = world.config
    dist = pairwise_distances(world.pos)
    emotion_phase(world, rng, dist, enabled=cfg.emotion_enabled)
    force = deterrent_force(world.emotion)
    game_phase(world, force, dist)
    evolve_strategies(Role.COP, world, rng)
    evolve_strategies(Role.ACTIVIST, world, rng)
    decisions = choose_moves(world, rng, force)
    commit_moves(world, decisions, rng)
    death_phase(world, force)
    world.tick += 1
    if check:
        world.check_occupancy()
    return world


def side_eliminated(world: World, had_cops: bool = True) -> bool:
    """No live activists, or the cops that started the run are all gone.

    A run that starts without cops keeps going so civilians can still be
    recruited by activist contagion.
    """
    if world.live_count(Role.ACTIVIST) == 0:
        return True
    return had_cops and world.live_count(Role.COP) == 0


@dataclass
class RunResult:
    config: ScenarioConfig
    seed: int
    series: dict[str, np.ndarray]
    termination_tick: int
    reason: str
    trace: SimulationTrace | None = None

    @property
    def length(self) -> int:
        return len(self.series["active_ratio"])

    def final(self, name: str) -> float:
        return float(self.series[name][-1])


def run(
    config: ScenarioConfig, record_trace: bool = True, seed: int | None = None, check: bool = False
) -> RunResult:
    """Simulate until a side is eliminated (see :func:`side_eliminated`) or
    ``max_ticks`` is reached.

    Tick 0 in the series and trace is the initial state.
    """
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    world = init_state(config, rng)
    assess_situations(world, deterrent_force(world.emotion))
    trace = SimulationTrace(config.rows, config.cols) if record_trace else None
    rows = [series_row(world)]
    if trace is not None:
        trace.append(snapshot(world))
    reason = MAX_TICKS
    while world.tick < config.max_ticks:
        step(world, rng, check=check)
        rows.append(series_row(world))
        if trace is not None:
            trace.append(snapshot(world))
        if side_eliminated(world, config.n_cops > 0):
            reason = ONE_SIDE_ELIMINATED
            break
    series = {k: np.array([r[k] for r in rows]) for k in SERIES_COLUMNS}
    return RunResult(config, seed, series, world.tick, reason, trace)


# --------------------------------------------------------------------------
# Batches
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RunSummary:
    index: int
    seed: int
    termination_tick: int
    reason: str
    final: dict[str, float]


@dataclass
class BatchResult:
    n_runs: int
    base_seed: int
    mean: dict[str, np.ndarray]
    std: dict[str, np.ndarray]
    runs: list[RunSummary]
    # per-run series after padding, shape (n_runs, length)
    padded: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.mean["active_ratio"])

    @property
    def seeds(self) -> list[int]:
        return [r.seed for r in self.runs]

    def finals(self, name: str) -> np.ndarray:
        """Final-tick value of ``name`` for each run, in run order."""
        return np.array([r.final[name] for r in self.runs])


def _one(args: tuple[ScenarioConfig, int]) -> tuple[dict[str, np.ndarray], int, str]:
    cfg, seed = args
    res = run(cfg, record_trace=False, seed=seed)
    return res.series, res.termination_tick, res.reason


def _pad(values: np.ndarray, length: int) -> np.ndarray:
    if len(values) == length:
        return values
    return np.concatenate([values, np.full(length - len(values), values[-1])])


def batch_run(
    config: ScenarioConfig, n_runs: int, base_seed: int | None = None, jobs: int = 1
) -> BatchResult:
    """Run ``n_runs`` simulations seeded ``base_seed + i`` and average them.

    Shorter runs hold their last value up to the longest run. NaN entries
    (a role with no live members) are skipped in the mean and std.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    base_seed = config.seed if base_seed is None else base_seed
    tasks = [(config, base_seed + i) for i in range(n_runs)]
    if jobs > 1 and n_runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one, tasks))
    else:
        results = [_one(t) for t in tasks]

    length = max(len(s["active_ratio"]) for s, _, _ in results)
    padded = {k: np.stack([_pad(s[k], length) for s, _, _ in results]) for k in SERIES_COLUMNS}
    mean, std = {}, {}
    for k, arr in padded.items():
        if np.isnan(arr).any():
            present = ~np.isnan(arr)
            cnt = present.sum(axis=0)
            filled = np.where(present, arr, 0.0)
            with np.errstate(invalid="ignore", divide="ignore"):
                m = filled.sum(axis=0) / cnt
                var = np.where(present, (arr - m) ** 2, 0.0).sum(axis=0) / cnt
            mean[k], std[k] = m, np.sqrt(var)
        else:
            mean[k], std[k] = arr.mean(axis=0), arr.std(axis=0)
    runs = [
        RunSummary(i, seed, ticks, reason, {k: float(s[k][-1]) for k in SERIES_COLUMNS})
        for i, ((_, seed), (s, ticks, reason)) in enumerate(zip(tasks, results))
    ]
    return BatchResult(n_runs, base_seed, mean, std, runs, padded)


# --------------------------------------------------------------------------
# Sweeps
# --------------------------------------------------------------------------

SWEEPABLE: dict[str, str] = {
    "n_cops": "n_cops",
    "pr": "pr",
    "a": "a",
    "a_global": "a",
    "b": "b",
    "b_global": "b",
}


@dataclass
class SweepResult:
    parameter: str
    values: list[Any]
    batches: list[BatchResult]

    def summary(self) -> list[dict[str, Any]]:
        rows = []
        for v, b in zip(self.values, self.batches):
            finals = b.finals("active_ratio")
            rows.append({
                "value": v,
                "n_runs": b.n_runs,
                "final_active_ratio_mean": float(finals.mean()),
                "final_active_ratio_std": float(finals.std()),
                "activists_eliminated_frac": float(np.mean(b.finals("live_activists") == 0)),
                "cops_eliminated_frac": float(np.mean(b.finals("live_cops") == 0)),
                "mean_termination_tick": float(np.mean([r.termination_tick for r in b.runs])),
            })
        return rows


def sweep_config(config: ScenarioConfig, parameter: str, value: Any) -> ScenarioConfig:
    key = parameter.lower()
    if key not in SWEEPABLE:
        raise ValueError(
            f"unknown sweep parameter {parameter!r}; choose one of: {', '.join(SWEEPABLE)}"
        )
    attr = SWEEPABLE[key]
    value = int(value) if attr == "n_cops" else float(value)
    return config.with_updates(**{attr: value})


def sweep(
    config: ScenarioConfig,
    parameter: str,
    values: Sequence[Any],
    n_runs: int,
    base_seed: int | None = None,
    jobs: int = 1,
) -> SweepResult:
    """One batch per value; every batch reuses the same seeds."""
    configs = [sweep_config(config, parameter, v) for v in values]
    batches = [batch_run(c, n_runs, base_seed, jobs) for c in configs]
    return SweepResult(parameter, list(values), batches)


__all__ = [
    "BatchResult",
    "MAX_TICKS",
    "ONE_SIDE_ELIMINATED",
    "RunResult",
    "RunSummary",
    "SERIES_COLUMNS",
    "SWEEPABLE",
    "SweepResult",
    "batch_run",
    "run",
    "series_row",
    "snapshot",
    "step",
    "sweep",
    "sweep_config",
]
