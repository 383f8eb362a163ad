"""Core types, scenario loading and initial-state construction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path
from typing import Any, Iterator, Sequence

import numpy as np

EMOTION_BOUND = 0.999
EMOTION_NUDGE = 1e-6
NO_STRATEGY = -1

# Moore neighbourhood offsets, row-major, self excluded.
MOORE_OFFSETS = np.array(
    [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)],
    dtype=np.int64,
)


class Role(IntEnum):
    CIVILIAN = 0
    ACTIVIST = 1
    COP = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    def opponent(self) -> Role:
        if self is Role.COP:
            return Role.ACTIVIST
        if self is Role.ACTIVIST:
            return Role.COP
        raise ValueError("civilians have no opposing side")


class Strategy(IntEnum):
    COOPERATION = 0
    DEFECTION = 1


class Situation(IntEnum):
    """Sign class of a force difference F - F_hat.

    The integer value doubles as the chromosome bit index. When the perceiver
    is a cop, STRONGER reads as "cops stronger"; payoff lookups always take the
    class from the cops' side (see ``game.cop_view``).
    """

    STRONGER = 0
    BALANCED = 1
    WEAKER = 2
    COPS_STRONGER = 0
    ACTIVISTS_STRONGER = 2

    def flipped(self) -> Situation:
        return Situation(2 - int(self))


@dataclass(frozen=True)
class StrategyChromosome:
    """One strategy bit per situation class, ordered (stronger, balanced, weaker)."""

    bits: tuple[bool, bool, bool]

    def __post_init__(self) -> None:
        if len(self.bits) != 3:
            raise ValueError(f"chromosome needs exactly 3 bits, got {len(self.bits)}")
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    def strategy(self, situation: Situation) -> Strategy:
        return Strategy(int(self.bits[int(situation)]))


@dataclass
class Agent:
    id: int
    role: Role
    position: tuple[int, int]
    emotion: float
    chromosome: StrategyChromosome
    external_emotion: float = 0.0
    mental_emotion: float = 0.0
    benefit_prev: float = 0.0
    benefit_cur: float = 0.0
    receive_strength: float = 0.8
    send_strength: float = 0.8
    warn_count: int = 0
    t_warn: float = 0.8
    t_warn_time: int = 14
    alive: bool = True

    @property
    def is_fighter(self) -> bool:
        return self.role is not Role.CIVILIAN


class Grid:
    """M x N cellular space with exclusive occupancy; edges are walls."""

    EMPTY = -1

    def __init__(self, rows: int, cols: int) -> None:
        if rows <= 0 or cols <= 0:
            raise ValueError("grid dimensions must be positive")
        self.rows = rows
        self.cols = cols
        self.occupancy = np.full((rows, cols), self.EMPTY, dtype=np.int64)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        r, c = cell
        return 0 <= r < self.rows and 0 <= c < self.cols

    def is_empty(self, cell: tuple[int, int]) -> bool:
        return self.in_bounds(cell) and self.occupancy[cell] == self.EMPTY

    def occupant(self, cell: tuple[int, int]) -> int | None:
        aid = int(self.occupancy[cell])
        return None if aid == self.EMPTY else aid

    def place(self, agent_id: int, cell: tuple[int, int]) -> None:
        if not self.is_empty(cell):
            raise ValueError(f"cell {cell} is not free")
        self.occupancy[cell] = agent_id

    def move(self, agent_id: int, src: tuple[int, int], dst: tuple[int, int]) -> None:
        if self.occupancy[src] != agent_id:
            raise ValueError(f"agent {agent_id} is not at {src}")
        self.place(agent_id, dst)
        self.occupancy[src] = self.EMPTY

    def neighbors(self, cell: tuple[int, int]) -> list[tuple[int, int]]:
        r, c = cell
        out = []
        for dr, dc in MOORE_OFFSETS:
            nb = (r + int(dr), c + int(dc))
            if self.in_bounds(nb):
                out.append(nb)
        return out

    def empty_neighbors(self, cell: tuple[int, int]) -> list[tuple[int, int]]:
        return [nb for nb in self.neighbors(cell) if self.occupancy[nb] == self.EMPTY]

    def copy(self) -> Grid:
        g = Grid(self.rows, self.cols)
        g.occupancy = self.occupancy.copy()
        return g


# --------------------------------------------------------------------------
# Scenario configuration
# --------------------------------------------------------------------------


class ScenarioError(ValueError):
    """A scenario file could not be read or parsed."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class ScenarioValidationError(ValueError):
    def __init__(self, violations: Sequence[str]) -> None:
        self.violations = list(violations)
        super().__init__("invalid scenario:\n  " + "\n  ".join(self.violations))


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class Placement:
    role: Role
    row: int
    col: int
    emotion: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    n_civilians: int
    n_activists: int
    n_cops: int
    rows: int = 20
    cols: int = 20
    # A tuple assigns its values round-robin across the role's agents.
    emotion_civilian: float | tuple[float, ...] = 0.1
    emotion_activist: float | tuple[float, ...] = -0.5
    emotion_cop: float | tuple[float, ...] = 0.5
    t_a2c: float = 0.1
    t_c2a: float = -0.5
    delta: float = 0.1
    pr: float = 10.0
    a: float = 0.8
    b: float = 0.8
    max_ticks: int = 500
    seed: int = 0
    placements: tuple[Placement, ...] = ()
    # model knobs
    eps_bal: float = 0.05
    p_mut: float = 0.05
    benefit_agg: str = "sum"
    death_radius: str = "pr"
    emotion_enabled: bool = True
    t_warn_range: tuple[float, float] = (0.7, 0.9)
    t_warn_time_range: tuple[int, int] = (8, 20)

    @property
    def n_total(self) -> int:
        return self.n_civilians + self.n_activists + self.n_cops

    def count(self, role: Role) -> int:
        return (self.n_civilians, self.n_activists, self.n_cops)[int(role)]

    def emotions_for(self, role: Role) -> tuple[float, ...]:
        val = (self.emotion_civilian, self.emotion_activist, self.emotion_cop)[int(role)]
        return tuple(val) if isinstance(val, (tuple, list)) else (float(val),)

    def with_updates(self, **changes: Any) -> ScenarioConfig:
        cfg = replace(self, **changes)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        problems = _config_violations(self)
        if problems:
            raise ScenarioValidationError(problems)

    def to_document(self) -> dict[str, Any]:
        """Inverse of :func:`parse_scenario`."""

        def emo(v: float | tuple[float, ...]) -> float | list[float]:
            return list(v) if isinstance(v, tuple) else v

        doc: dict[str, Any] = {
            "counts": {
                "civilians": self.n_civilians,
                "activists": self.n_activists,
                "cops": self.n_cops,
            },
            "grid": {"rows": self.rows, "cols": self.cols},
            "emotions": {
                "civilian": emo(self.emotion_civilian),
                "activist": emo(self.emotion_activist),
                "cop": emo(self.emotion_cop),
            },
            "thresholds": {"t_a2c": self.t_a2c, "t_c2a": self.t_c2a, "delta": self.delta},
            "contagion": {"pr": self.pr, "a": self.a, "b": self.b},
            "run": {"max_ticks": self.max_ticks, "seed": self.seed},
            "model": {
                "eps_bal": self.eps_bal,
                "p_mut": self.p_mut,
                "benefit_agg": self.benefit_agg,
                "death_radius": self.death_radius,
                "emotion_enabled": self.emotion_enabled,
                "t_warn": list(self.t_warn_range),
                "t_warn_time": list(self.t_warn_time_range),
            },
        }
        if self.placements:
            doc["placements"] = [
                {k: v for k, v in (("role", p.role.label), ("row", p.row), ("col", p.col),
                                   ("emotion", p.emotion)) if v is not None}
                for p in self.placements
            ]
        return doc


def _config_violations(cfg: ScenarioConfig) -> list[str]:
    out: list[str] = []
    for name in ("n_civilians", "n_activists", "n_cops"):
        if getattr(cfg, name) < 0:
            out.append(f"{name} must be >= 0")
    if cfg.rows <= 0 or cfg.cols <= 0:
        out.append("grid rows and cols must be > 0")
    if not cfg.t_a2c > 0:
        out.append("T_a2c must be > 0")
    if not cfg.t_c2a < 0:
        out.append("T_c2a must be < 0")
    if not cfg.delta > 0:
        out.append("delta must be > 0")
    if not cfg.pr > 0:
        out.append("PR must be > 0")
    for name in ("a", "b"):
        v = getattr(cfg, name)
        if not 0.0 <= v <= 1.0:
            out.append(f"{name.upper()} must lie in [0, 1]")
    if cfg.max_ticks <= 0:
        out.append("max_ticks must be > 0")
    if cfg.seed < 0:
        out.append("seed must be >= 0")
    for role in Role:
        for e in cfg.emotions_for(role):
            if not -1.0 < e < 1.0:
                out.append(f"{role.label} emotion {e} must lie in (-1, 1)")
    if any(e <= 0 for e in cfg.emotions_for(Role.COP)):
        out.append("cop emotions must be > 0")
    if any(e >= 0 for e in cfg.emotions_for(Role.ACTIVIST)):
        out.append("activist emotions must be < 0")
    if not 0.0 <= cfg.eps_bal:
        out.append("eps_bal must be >= 0")
    if not 0.0 <= cfg.p_mut <= 1.0:
        out.append("p_mut must lie in [0, 1]")
    if cfg.benefit_agg not in ("sum", "mean"):
        out.append("benefit_agg must be 'sum' or 'mean'")
    if cfg.death_radius not in ("pr", "moore1"):
        out.append("death_radius must be 'pr' or 'moore1'")
    lo, hi = cfg.t_warn_range
    if not 0.0 <= lo <= hi <= 1.0:
        out.append("t_warn range must satisfy 0 <= lo <= hi <= 1")
    lo_t, hi_t = cfg.t_warn_time_range
    if not 0 <= lo_t <= hi_t:
        out.append("t_warn_time range must satisfy 0 <= lo <= hi")
    per_role = {r: 0 for r in Role}
    seen: set[tuple[int, int]] = set()
    for i, p in enumerate(cfg.placements):
        per_role[p.role] += 1
        if not (0 <= p.row < cfg.rows and 0 <= p.col < cfg.cols):
            out.append(f"placements[{i}] lies outside the grid")
        if (p.row, p.col) in seen:
            out.append(f"placements[{i}] duplicates cell ({p.row}, {p.col})")
        seen.add((p.row, p.col))
        if p.emotion is not None and not -1.0 < p.emotion < 1.0:
            out.append(f"placements[{i}].emotion must lie in (-1, 1)")
    for role, n in per_role.items():
        if n > cfg.count(role):
            out.append(f"{n} {role.label} placements exceed the {role.label} count")
    return out


_SCHEMA: dict[str, dict[str, tuple[str, bool]]] = {
    # section -> key -> (attribute, required)
    "counts": {
        "civilians": ("n_civilians", True),
        "activists": ("n_activists", True),
        "cops": ("n_cops", True),
    },
    "grid": {"rows": ("rows", True), "cols": ("cols", True)},
    "emotions": {
        "civilian": ("emotion_civilian", True),
        "activist": ("emotion_activist", True),
        "cop": ("emotion_cop", True),
    },
    "thresholds": {
        "t_a2c": ("t_a2c", True),
        "t_c2a": ("t_c2a", True),
        "delta": ("delta", False),
    },
    "contagion": {"pr": ("pr", False), "a": ("a", False), "b": ("b", False)},
    "run": {"max_ticks": ("max_ticks", False), "seed": ("seed", False)},
    "model": {
        "eps_bal": ("eps_bal", False),
        "p_mut": ("p_mut", False),
        "benefit_agg": ("benefit_agg", False),
        "death_radius": ("death_radius", False),
        "emotion_enabled": ("emotion_enabled", False),
        "t_warn": ("t_warn_range", False),
        "t_warn_time": ("t_warn_time_range", False),
    },
}
_REQUIRED_SECTIONS = ("counts", "grid", "emotions", "thresholds")
_INT_FIELDS = {"n_civilians", "n_activists", "n_cops", "rows", "cols", "max_ticks", "seed"}
_STR_FIELDS = {"benefit_agg", "death_radius"}


def _coerce(attr: str, value: Any, where: str) -> Any:
    if attr in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"expected an integer, got {value!r}", where)
        return value
    if attr in _STR_FIELDS:
        if not isinstance(value, str):
            raise ScenarioError(f"expected a string, got {value!r}", where)
        return value
    if attr == "emotion_enabled":
        if not isinstance(value, bool):
            raise ScenarioError(f"expected a boolean, got {value!r}", where)
        return value
    if attr in ("t_warn_range", "t_warn_time_range"):
        if not (isinstance(value, list) and len(value) == 2):
            raise ScenarioError("expected a [low, high] pair", where)
        kind = int if attr == "t_warn_time_range" else float
        return tuple(kind(_number(v, where)) for v in value)
    if attr.startswith("emotion_") and isinstance(value, list):
        if not value:
            raise ScenarioError("emotion list must not be empty", where)
        return tuple(float(_number(v, where)) for v in value)
    return float(_number(value, where))


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", where)
    return value


def parse_scenario(doc: Any) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    allowed = set(_SCHEMA) | {"placements", "name", "description"}
    for key in doc:
        if key not in allowed:
            raise ScenarioError("unknown key", key)
    for sec in _REQUIRED_SECTIONS:
        if sec not in doc:
            raise ScenarioError("missing required section", sec)

    kwargs: dict[str, Any] = {}
    for sec, keys in _SCHEMA.items():
        body = doc.get(sec)
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ScenarioError("expected an object", sec)
        for key in body:
            if key not in keys:
                raise ScenarioError("unknown key", f"{sec}.{key}")
        for key, (attr, required) in keys.items():
            if key in body:
                kwargs[attr] = _coerce(attr, body[key], f"{sec}.{key}")
            elif required:
                raise ScenarioError("missing required field", f"{sec}.{key}")

    placements = []
    raw = doc.get("placements", [])
    if not isinstance(raw, list):
        raise ScenarioError("expected a list", "placements")
    for i, item in enumerate(raw):
        where = f"placements[{i}]"
        if not isinstance(item, dict):
            raise ScenarioError("expected an object", where)
        for key in item:
            if key not in ("role", "row", "col", "emotion"):
                raise ScenarioError("unknown key", f"{where}.{key}")
        try:
            role = Role[str(item["role"]).upper()]
        except KeyError:
            raise ScenarioError(f"unknown or missing role {item.get('role')!r}", f"{where}.role")
        for key in ("row", "col"):
            if key not in item:
                raise ScenarioError("missing required field", f"{where}.{key}")
        placements.append(
            Placement(
                role=role,
                row=_coerce("rows", item["row"], f"{where}.row"),
                col=_coerce("cols", item["col"], f"{where}.col"),
                emotion=None if item.get("emotion") is None
                else float(_number(item["emotion"], f"{where}.emotion")),
            )
        )
    kwargs["placements"] = tuple(placements)

    cfg = ScenarioConfig(**kwargs)
    cfg.validate()
    return cfg


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_scenario(doc)


# --------------------------------------------------------------------------
# World state
# --------------------------------------------------------------------------


@dataclass
class World:
    """Struct-of-arrays simulation state; index i is agent id i."""

    config: ScenarioConfig
    grid: Grid
    role: np.ndarray
    pos: np.ndarray
    emotion: np.ndarray
    external_emotion: np.ndarray
    mental_emotion: np.ndarray
    chromosome: np.ndarray
    benefit_prev: np.ndarray
    benefit_cur: np.ndarray
    receive_strength: np.ndarray
    send_strength: np.ndarray
    warn_count: np.ndarray
    t_warn: np.ndarray
    t_warn_time: np.ndarray
    alive: np.ndarray
    situation: np.ndarray
    tick: int = 0

    @property
    def n(self) -> int:
        return len(self.role)

    def agent(self, i: int) -> Agent:
        return Agent(
            id=i,
            role=Role(int(self.role[i])),
            position=(int(self.pos[i, 0]), int(self.pos[i, 1])),
            emotion=float(self.emotion[i]),
            chromosome=StrategyChromosome(tuple(bool(b) for b in self.chromosome[i])),
            external_emotion=float(self.external_emotion[i]),
            mental_emotion=float(self.mental_emotion[i]),
            benefit_prev=float(self.benefit_prev[i]),
            benefit_cur=float(self.benefit_cur[i]),
            receive_strength=float(self.receive_strength[i]),
            send_strength=float(self.send_strength[i]),
            warn_count=int(self.warn_count[i]),
            t_warn=float(self.t_warn[i]),
            t_warn_time=int(self.t_warn_time[i]),
            alive=bool(self.alive[i]),
        )

    def agents(self) -> list[Agent]:
        return [self.agent(i) for i in range(self.n)]

    def __iter__(self) -> Iterator[Agent]:
        return iter(self.agents())

    @property
    def strategy(self) -> np.ndarray:
        """Active strategy per agent under its last assessed situation."""
        out = self.chromosome[np.arange(self.n), self.situation.astype(np.intp)].astype(np.int8)
        out[self.role == int(Role.CIVILIAN)] = NO_STRATEGY
        return out

    def live_mask(self, role: Role | None = None) -> np.ndarray:
        if role is None:
            return self.alive.copy()
        return self.alive & (self.role == int(role))

    def live_count(self, role: Role) -> int:
        return int(np.count_nonzero(self.live_mask(role)))

    def copy(self) -> World:
        arrays = {
            f: getattr(self, f).copy()
            for f in self.__dataclass_fields__
            if isinstance(getattr(self, f), np.ndarray)
        }
        return World(config=self.config, grid=self.grid.copy(), tick=self.tick, **arrays)

    def check_occupancy(self) -> None:
        """Raise AssertionError unless occupied cells map 1-1 onto live agents."""
        occ = self.grid.occupancy
        ids = occ[occ != Grid.EMPTY]
        if len(ids) != len(set(ids.tolist())):
            raise AssertionError("an agent occupies more than one cell")
        live = np.flatnonzero(self.alive)
        if len(ids) != len(live):
            raise AssertionError(f"{len(ids)} occupied cells for {len(live)} live agents")
        for i in live:
            if occ[self.pos[i, 0], self.pos[i, 1]] != i:
                raise AssertionError(f"agent {i} not found at its recorded cell")


def init_state(config: ScenarioConfig, rng: np.random.Generator) -> World:
    """Place agents on distinct cells and draw their per-agent thresholds.

    Agent ids are assigned civilians first, then activists, then cops.
    Pinned placements take the first ids of their role; the rest go on
    uniformly sampled empty cells.
    """
    n = config.n_total
    if n > config.rows * config.cols:
        raise CapacityError(
            f"{n} agents do not fit on a {config.rows}x{config.cols} grid "
            f"({config.rows * config.cols} cells)"
        )
    role = np.repeat(
        np.array([int(Role.CIVILIAN), int(Role.ACTIVIST), int(Role.COP)], dtype=np.int8),
        [config.n_civilians, config.n_activists, config.n_cops],
    )
    emotion = np.empty(n, dtype=np.float64)
    for r in Role:
        idx = np.flatnonzero(role == int(r))
        values = config.emotions_for(r)
        emotion[idx] = [values[k % len(values)] for k in range(len(idx))]

    grid = Grid(config.rows, config.cols)
    pos = np.full((n, 2), -1, dtype=np.int64)
    next_slot = {r: int(np.flatnonzero(role == int(r))[0]) if config.count(r) else 0 for r in Role}
    for p in config.placements:
        i = next_slot[p.role]
        next_slot[p.role] += 1
        pos[i] = (p.row, p.col)
        grid.place(i, (p.row, p.col))
        if p.emotion is not None:
            emotion[i] = p.emotion

    free_agents = np.flatnonzero(pos[:, 0] < 0)
    free_cells = np.flatnonzero(grid.occupancy.ravel() == Grid.EMPTY)
    chosen = rng.choice(free_cells, size=len(free_agents), replace=False)
    for i, cell in zip(free_agents, chosen):
        rc = divmod(int(cell), config.cols)
        pos[i] = rc
        grid.place(int(i), rc)

    # zero is excluded from the emotion range; neutral starts lean positive
    emotion[emotion == 0.0] = EMOTION_NUDGE

    lo, hi = config.t_warn_range
    lo_t, hi_t = config.t_warn_time_range
    t_warn = rng.uniform(lo, hi, size=n)
    t_warn_time = rng.integers(lo_t, hi_t + 1, size=n)
    chromosome = rng.random((n, 3)) < 0.5

    return World(
        config=config,
        grid=grid,
        role=role,
        pos=pos,
        emotion=emotion,
        external_emotion=np.zeros(n),
        mental_emotion=np.zeros(n),
        chromosome=chromosome,
        benefit_prev=np.zeros(n),
        benefit_cur=np.zeros(n),
        receive_strength=np.full(n, config.a),
        send_strength=np.full(n, config.b),
        warn_count=np.zeros(n, dtype=np.int64),
        t_warn=t_warn,
        t_warn_time=t_warn_time.astype(np.int64),
        alive=np.ones(n, dtype=bool),
        situation=np.full(n, int(Situation.BALANCED), dtype=np.int8),
    )


# --------------------------------------------------------------------------
# Traces
# --------------------------------------------------------------------------

@dataclass
class Snapshot:
    tick: int
    role: np.ndarray
    pos: np.ndarray
    emotion: np.ndarray
    force: np.ndarray
    strategy: np.ndarray  # NO_STRATEGY for civilians
    alive: np.ndarray

    @property
    def n(self) -> int:
        return len(self.role)

    def to_record(self) -> dict[str, Any]:
        return {
            "tick": self.tick,
            "agents": [
                {
                    "id": i,
                    "role": Role(int(self.role[i])).label,
                    "row": int(self.pos[i, 0]),
                    "col": int(self.pos[i, 1]),
                    "e": float(self.emotion[i]),
                    "f": float(self.force[i]),
                    "strategy": None if self.strategy[i] == NO_STRATEGY
                    else Strategy(int(self.strategy[i])).name.lower(),
                    "alive": bool(self.alive[i]),
                }
                for i in range(self.n)
            ],
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> Snapshot:
        agents = sorted(rec["agents"], key=lambda a: a["id"])
        strat = {None: NO_STRATEGY, "cooperation": 0, "defection": 1}
        return cls(
            tick=int(rec["tick"]),
            role=np.array([int(Role[a["role"].upper()]) for a in agents], dtype=np.int8),
            pos=np.array([(a["row"], a["col"]) for a in agents], dtype=np.int64).reshape(-1, 2),
            emotion=np.array([a["e"] for a in agents], dtype=np.float64),
            force=np.array([a["f"] for a in agents], dtype=np.float64),
            strategy=np.array([strat[a["strategy"]] for a in agents], dtype=np.int8),
            alive=np.array([a["alive"] for a in agents], dtype=bool),
        )


@dataclass
class SimulationTrace:
    rows: int
    cols: int
    snapshots: list[Snapshot] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __getitem__(self, k: int) -> Snapshot:
        return self.snapshots[k]

    def __iter__(self) -> Iterator[Snapshot]:
        return iter(self.snapshots)

    def append(self, snap: Snapshot) -> None:
        if self.snapshots and snap.tick != self.snapshots[-1].tick + 1:
            raise ValueError("trace ticks must be consecutive")
        self.snapshots.append(snap)


def config_to_json(cfg: ScenarioConfig) -> str:
    return json.dumps(cfg.to_document(), indent=2, sort_keys=True)


__all__ = [
    "Agent",
    "CapacityError",
    "Grid",
    "MOORE_OFFSETS",
    "Placement",
    "Role",
    "ScenarioConfig",
    "ScenarioError",
    "ScenarioValidationError",
    "SimulationTrace",
    "Situation",
    "Snapshot",
    "Strategy",
    "StrategyChromosome",
    "World",
    "init_state",
    "load_scenario",
    "parse_scenario",
]
