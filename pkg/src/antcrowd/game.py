"""Deterrent forces, situation estimation, payoffs and strategy evolution."""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .domain import Agent, Role, Situation, Strategy, StrategyChromosome, World
from .geometry import distance, pairwise_distances

C, D = Strategy.COOPERATION, Strategy.DEFECTION

# situation (cops' side) -> cop strategy -> activist strategy -> (cop, activist)
BENEFIT_MATRIX: dict[Situation, dict[Strategy, dict[Strategy, tuple[int, int]]]] = {
    Situation.COPS_STRONGER: {
        C: {C: (1, 4), D: (2, 2)},
        D: {C: (3, 3), D: (4, 1)},
    },
    Situation.ACTIVISTS_STRONGER: {
        C: {C: (4, 1), D: (3, 3)},
        D: {C: (2, 2), D: (1, 4)},
    },
    Situation.BALANCED: {
        C: {C: (3, 3), D: (0, 5)},
        D: {C: (5, 0), D: (1, 1)},
    },
}

# PAYOFF[situation, cop_strategy, activist_strategy, side] with side 0=cop, 1=activist
PAYOFF = np.zeros((3, 2, 2, 2), dtype=np.float64)
for _sit, _block in BENEFIT_MATRIX.items():
    for _cs, _row in _block.items():
        for _as, _pair in _row.items():
            PAYOFF[int(_sit), int(_cs), int(_as)] = _pair


def deterrent_force(e):
    """sin(|e| * pi/2); accepts scalars or arrays."""
    if np.ndim(e) == 0:
        return math.sin(abs(float(e)) * math.pi / 2)
    return np.sin(np.abs(e) * (np.pi / 2))


def _within(agent: Agent, other: Agent, radius: float) -> bool:
    return distance(agent.position, other.position) <= radius


def total_forces(agent: Agent, others: Iterable[Agent], pr: float) -> tuple[float, float]:
    """(same-side force incl. the agent itself, opposing force) within ``pr``."""
    same = deterrent_force(agent.emotion)
    opp = 0.0
    rival = agent.role.opponent()
    for other in others:
        if other.id == agent.id or not other.alive or not _within(agent, other, pr):
            continue
        if other.role is agent.role:
            same += deterrent_force(other.emotion)
        elif other.role is rival:
            opp += deterrent_force(other.emotion)
    return same, opp


def classify(delta_f: float, eps_bal: float) -> Situation:
    if abs(delta_f) <= eps_bal:
        return Situation.BALANCED
    return Situation.STRONGER if delta_f > 0 else Situation.WEAKER


def situation(force: float, opposing: float, eps_bal: float = 0.0) -> Situation:
    """Classify F - F_hat from the perceiver's side."""
    return classify(force - opposing, eps_bal)


def cop_view(sit: Situation, side: Role) -> Situation:
    return sit if side is Role.COP else sit.flipped()


def payoff(sit: Situation, cop_strategy: Strategy, activist_strategy: Strategy) -> tuple[float, float]:
    """Table lookup; ``sit`` must be expressed from the cops' side."""
    cop, act = BENEFIT_MATRIX[Situation(sit)][Strategy(cop_strategy)][Strategy(activist_strategy)]
    return float(cop), float(act)


def active_strategy(chromosome: StrategyChromosome, sit: Situation) -> Strategy:
    return chromosome.strategy(sit)


def round_benefit(
    agent: Agent, others: Iterable[Agent], pr: float, eps_bal: float, agg: str = "sum"
) -> float:
    """Payoff summed over every live opponent within ``pr``.

    Both players use the perceiver's situation: the perceiver decodes its own
    bit for it and each opponent decodes the bit for the mirrored class.
    """
    others = list(others)
    f_same, f_opp = total_forces(agent, others, pr)
    sit = situation(f_same, f_opp, eps_bal)
    mine = agent.chromosome.strategy(sit)
    rival = agent.role.opponent()
    scores = []
    for other in others:
        if other.id == agent.id or not other.alive or other.role is not rival:
            continue
        if not _within(agent, other, pr):
            continue
        theirs = other.chromosome.strategy(sit.flipped())
        if agent.role is Role.COP:
            scores.append(payoff(sit, mine, theirs)[0])
        else:
            scores.append(payoff(sit.flipped(), theirs, mine)[1])
    if not scores:
        return 0.0
    return float(sum(scores) if agg == "sum" else sum(scores) / len(scores))


# --------------------------------------------------------------------------
# Vectorised machinery
# --------------------------------------------------------------------------


def perceive(
    world: World,
    idx: np.ndarray,
    cells: np.ndarray,
    force: np.ndarray,
    radius: float | None = None,
    dist: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Forces seen by agents ``idx`` if they stood at ``cells`` (k, m, 2).

    Returns ``(F, F_hat, opponents)`` with shapes (k, m), (k, m), (k, m, n);
    ``opponents`` flags the live rivals inside the radius. ``dist`` may
    supply precomputed cell-to-agent distances of shape (k, m, n).
    """
    radius = world.config.pr if radius is None else radius
    if dist is None:
        dist = pairwise_distances(cells, world.pos)
    k = len(idx)
    within = (dist <= radius) & world.alive
    within[np.arange(k), :, idx] = False
    my_role = world.role[idx][:, None, None]
    rival = np.where(my_role == int(Role.COP), int(Role.ACTIVIST), int(Role.COP))
    same = within & (world.role == my_role)
    opp = within & (world.role == rival)
    f_same = force[idx][:, None] + (same * force).sum(axis=-1)
    f_opp = (opp * force).sum(axis=-1)
    return f_same, f_opp, opp


def classify_array(delta_f: np.ndarray, eps_bal: float) -> np.ndarray:
    sit = np.where(delta_f > 0, int(Situation.STRONGER), int(Situation.WEAKER))
    sit[np.abs(delta_f) <= eps_bal] = int(Situation.BALANCED)
    return sit.astype(np.int8)


def benefits(
    world: World, idx: np.ndarray, sit: np.ndarray, opp: np.ndarray, agg: str = "sum"
) -> np.ndarray:
    """Round benefit for agents ``idx`` under own-side situations ``sit`` (k, m)."""
    k = len(idx)
    n = world.n
    if k == 0:
        return np.zeros(sit.shape)
    is_cop = (world.role[idx] == int(Role.COP))[:, None]
    mine = world.chromosome[idx[:, None], sit.astype(np.intp)].astype(np.intp)  # (k, m)
    mirror = (2 - sit).astype(np.intp)
    theirs = world.chromosome.T[mirror[..., None], np.arange(n)].astype(np.intp)  # (k, m, n)
    sit_cop = np.where(is_cop, sit, 2 - sit).astype(np.intp)[..., None]
    mine_b = mine[..., None]
    cop_s = np.where(is_cop[..., None], mine_b, theirs)
    act_s = np.where(is_cop[..., None], theirs, mine_b)
    side = np.where(is_cop, 0, 1)[..., None]
    table = PAYOFF[sit_cop, cop_s, act_s, side]
    total = (table * opp).sum(axis=-1)
    if agg == "mean":
        count = opp.sum(axis=-1)
        total = np.divide(total, count, out=np.zeros_like(total), where=count > 0)
    return total


def fighters(world: World) -> np.ndarray:
    return np.flatnonzero(world.alive & (world.role != int(Role.CIVILIAN)))


def _assess(world: World, force: np.ndarray, dist: np.ndarray | None):
    idx = fighters(world)
    cells = world.pos[idx][:, None, :]
    sub = None if dist is None else dist[idx][:, None, :]
    f_same, f_opp, opp = perceive(world, idx, cells, force, dist=sub)
    sit = classify_array(f_same - f_opp, world.config.eps_bal)
    world.situation[idx] = sit[:, 0]
    return idx, sit, opp


def assess_situations(world: World, force: np.ndarray, dist: np.ndarray | None = None) -> None:
    """Refresh every live fighter's situation without scoring games."""
    _assess(world, force, dist)


def game_phase(world: World, force: np.ndarray, dist: np.ndarray | None = None) -> None:
    """Assess situations and score this tick's games for every live fighter.

    The previous benefit is kept in ``benefit_prev`` so the next emotion
    phase can read the change.
    """
    world.benefit_prev = world.benefit_cur.copy()
    world.benefit_cur = np.zeros(world.n)
    idx, sit, opp = _assess(world, force, dist)
    if len(idx):
        world.benefit_cur[idx] = benefits(world, idx, sit, opp, world.config.benefit_agg)[:, 0]


def evolve_strategies(
    side: Role, world: World, rng: np.random.Generator, p_mut: float | None = None
) -> np.ndarray:
    """Imitate the richest same-side neighbour within PR, then mutate.

    Only the bit for the agent's current situation is copied. Reads the
    pre-update chromosomes, writes ``world.chromosome`` in place and returns it.
    """
    if side is Role.CIVILIAN:
        raise ValueError("only cops and activists evolve strategies")
    p_mut = world.config.p_mut if p_mut is None else p_mut
    idx = np.flatnonzero(world.alive & (world.role == int(side)))
    k = len(idx)
    if k == 0:
        return world.chromosome
    old = world.chromosome.copy()
    pos = world.pos[idx]
    near = pairwise_distances(pos) <= world.config.pr
    np.fill_diagonal(near, False)
    bene = world.benefit_cur[idx]
    scores = np.where(near, bene[None, :], -np.inf)
    best = scores.max(axis=1)
    keys = rng.random((k, k))
    keys[~(near & (scores == best[:, None]))] = -1.0
    pick = keys.argmax(axis=1)
    better = np.isfinite(best) & (best > bene)
    sit = world.situation[idx].astype(np.intp)
    rows = idx[better]
    world.chromosome[rows, sit[better]] = old[idx[pick[better]], sit[better]]
    flips = rng.random((k, 3)) < p_mut
    world.chromosome[idx] ^= flips
    return world.chromosome
