"""Movement decisions, move commitment and the warning/death state machine."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .domain import MOORE_OFFSETS, Agent, Grid, Role, Strategy, World
from .game import benefits, classify_array, deterrent_force, perceive
from .geometry import chebyshev_distances, pairwise_distances

LN_TENTH = math.log(0.1)
P_DIE_MAX = math.nextafter(1.0, 0.0)

# candidate 0 is the agent's own cell
CANDIDATE_OFFSETS = np.vstack([np.zeros((1, 2), dtype=np.int64), MOORE_OFFSETS])


class Rationale(Enum):
    FORCED = "forced"
    ATTACK = "attack"
    PROTECT = "protect"
    HARASS = "harass"
    DRIFT = "drift"
    SEEK_SAFETY = "seek_safety"


@dataclass(frozen=True)
class MoveDecision:
    agent_id: int
    target: tuple[int, int] | None  # None = stay
    rationale: Rationale

    @property
    def stays(self) -> bool:
        return self.target is None


def must_move(agent: Agent, others: Iterable[Agent]) -> bool:
    """Opposing force in the Moore neighbourhood strictly exceeds own-side force."""
    same = deterrent_force(agent.emotion)
    opp = 0.0
    rival = agent.role.opponent()
    r, c = agent.position
    for other in others:
        if other.id == agent.id or not other.alive:
            continue
        if max(abs(other.position[0] - r), abs(other.position[1] - c)) > 1:
            continue
        if other.role is agent.role:
            same += deterrent_force(other.emotion)
        elif other.role is rival:
            opp += deterrent_force(other.emotion)
    return opp > same


def expected_cell_benefit(
    world: World, agent_id: int, cell: tuple[int, int], force: np.ndarray | None = None
) -> float:
    """Round benefit the agent would earn standing at ``cell``."""
    force = deterrent_force(world.emotion) if force is None else force
    idx = np.array([agent_id])
    cells = np.array([[cell]], dtype=np.int64)
    f_same, f_opp, opp = perceive(world, idx, cells, force)
    sit = classify_array(f_same - f_opp, world.config.eps_bal)
    return float(benefits(world, idx, sit, opp, world.config.benefit_agg)[0, 0])


def _pick(scores: np.ndarray, allowed: np.ndarray, keys: np.ndarray, maximize: bool) -> np.ndarray:
    """Row-wise arg-best over ``allowed`` entries, ties broken by ``keys``.

    Rows with nothing allowed return -1.
    """
    s = np.where(allowed, scores if maximize else -scores, -np.inf)
    best = s.max(axis=1, keepdims=True)
    tie = allowed & (s == best)
    choice = np.where(tie, keys, -1.0).argmax(axis=1)
    choice[~allowed.any(axis=1)] = -1
    return choice


def _nearest(dcell: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Min distance from each candidate cell to any flagged target (inf if none)."""
    return np.where(targets[:, None, :], dcell, np.inf).min(axis=-1)


def choose_moves(
    world: World,
    rng: np.random.Generator,
    force: np.ndarray | None = None,
    idx: Sequence[int] | None = None,
) -> list[MoveDecision]:
    """Decide a move for each live agent in ``idx`` (default: all live agents).

    All decisions read the same snapshot; conflicts are settled by
    :func:`commit_moves`.
    """
    cfg = world.config
    force = deterrent_force(world.emotion) if force is None else force
    idx = np.flatnonzero(world.alive) if idx is None else np.asarray(idx, dtype=np.int64)
    k = len(idx)
    if k == 0:
        return []
    keys = rng.random((k, len(CANDIDATE_OFFSETS)))

    pos = world.pos[idx]
    cells = pos[:, None, :] + CANDIDATE_OFFSETS
    inside = (
        (cells[..., 0] >= 0) & (cells[..., 0] < cfg.rows)
        & (cells[..., 1] >= 0) & (cells[..., 1] < cfg.cols)
    )
    clipped_r = np.clip(cells[..., 0], 0, cfg.rows - 1)
    clipped_c = np.clip(cells[..., 1], 0, cfg.cols - 1)
    movable = inside & (world.grid.occupancy[clipped_r, clipped_c] == Grid.EMPTY)
    movable[:, 0] = False
    dcell = pairwise_distances(cells, world.pos)  # (k, 9, n)
    live = world.alive
    role_i = world.role[idx]

    choice = np.full(k, -1)
    rationale: list[Rationale] = [Rationale.SEEK_SAFETY] * k

    # civilians: maximise cop force within PR, staying is a candidate
    civ = np.flatnonzero(role_i == int(Role.CIVILIAN))
    if len(civ):
        cops = live & (world.role == int(Role.COP))
        safety = np.where((dcell[civ] <= cfg.pr) & cops, force, 0.0).sum(axis=-1)
        allowed = movable[civ].copy()
        allowed[:, 0] = True
        pick = _pick(safety, allowed, keys[civ], maximize=True)
        pick[(safety * allowed).max(axis=1) <= 0.0] = 0
        choice[civ] = pick

    fig = np.flatnonzero(role_i != int(Role.CIVILIAN))
    if len(fig):
        gi = idx[fig]
        near = chebyshev_distances(world.pos[gi], world.pos) <= 1
        near[np.arange(len(gi)), gi] = False
        near &= live
        rival = np.where(world.role[gi] == int(Role.COP), int(Role.ACTIVIST), int(Role.COP))
        same_local = force[gi] + np.where(near & (world.role == world.role[gi][:, None]), force, 0.0).sum(-1)
        opp_local = np.where(near & (world.role == rival[:, None]), force, 0.0).sum(-1)
        forced = opp_local > same_local
        # drift only when nobody at all is within perceived range
        seen = (dcell[fig][:, 0, :] <= cfg.pr) & live
        seen[np.arange(len(gi)), gi] = False
        has_nb = seen.any(axis=1)
        strat = world.chromosome[gi, world.situation[gi].astype(np.intp)]

        f_rows = np.flatnonzero(forced)
        if len(f_rows):
            rows = fig[f_rows]
            sub_cells = cells[rows][:, 1:]
            f_same, f_opp, opp = perceive(world, gi[f_rows], sub_cells, force, dist=dcell[rows][:, 1:])
            sit = classify_array(f_same - f_opp, cfg.eps_bal)
            score = benefits(world, gi[f_rows], sit, opp, cfg.benefit_agg)
            pick = _pick(score, movable[rows][:, 1:], keys[rows][:, 1:], maximize=True)
            choice[rows] = np.where(pick >= 0, pick + 1, 0)
            for r in rows:
                rationale[r] = Rationale.FORCED

        t_rows = np.flatnonzero(~forced)
        if len(t_rows):
            rows = fig[t_rows]
            agents = gi[t_rows]
            defect = strat[t_rows] == int(Strategy.DEFECTION)
            targets = np.where(
                defect[:, None],
                live & (world.role == rival[t_rows][:, None]),
                live & (world.role == int(Role.CIVILIAN)),
            )
            targets[np.arange(len(agents)), agents] = False
            # with neighbours, look inside PR first and fall back to the whole grid
            in_pr = targets & (dcell[rows][:, 0, :] <= cfg.pr)
            local = has_nb[t_rows] & in_pr.any(axis=1)
            targets = np.where(local[:, None], in_pr, targets)
            dmin = _nearest(dcell[rows], targets)
            pick = _pick(dmin[:, 1:], movable[rows][:, 1:], keys[rows][:, 1:], maximize=False)
            ok = pick >= 0
            improve = np.zeros(len(rows), dtype=bool)
            improve[ok] = dmin[ok, pick[ok] + 1] < dmin[ok, 0]
            choice[rows] = np.where(improve, pick + 1, 0)
            is_cop = world.role[agents] == int(Role.COP)
            for j, r in enumerate(rows):
                if not has_nb[t_rows[j]]:
                    rationale[r] = Rationale.DRIFT
                elif defect[j]:
                    rationale[r] = Rationale.ATTACK
                else:
                    rationale[r] = Rationale.PROTECT if is_cop[j] else Rationale.HARASS

    out = []
    for j in range(k):
        c = choice[j]
        target = None if c <= 0 else (int(cells[j, c, 0]), int(cells[j, c, 1]))
        out.append(MoveDecision(int(idx[j]), target, rationale[j]))
    return out


def choose_move(
    world: World, agent_id: int, rng: np.random.Generator, force: np.ndarray | None = None
) -> MoveDecision:
    return choose_moves(world, rng, force, idx=[agent_id])[0]


def commit_moves(world: World, decisions: Sequence[MoveDecision], rng: np.random.Generator) -> None:
    """Apply decisions in a shuffled order; a move onto a taken cell becomes a stay."""
    order = rng.permutation(len(decisions))
    grid = world.grid
    for j in order:
        d = decisions[j]
        if d.target is None:
            continue
        if grid.occupancy[d.target] != Grid.EMPTY:
            continue
        src = (int(world.pos[d.agent_id, 0]), int(world.pos[d.agent_id, 1]))
        grid.move(d.agent_id, src, d.target)
        world.pos[d.agent_id] = d.target


def death_probability(same_force: float, opposing_force: float) -> float:
    """1 - exp(ln(0.1) * opposing/same); equals 0.9 when the two balance."""
    if opposing_force <= 0.0:
        return 0.0
    if same_force <= 0.0:
        return P_DIE_MAX
    return min(-math.expm1(LN_TENTH * opposing_force / same_force), P_DIE_MAX)


def death_probabilities(world: World, force: np.ndarray) -> np.ndarray:
    """P_die for every agent (0 for civilians and the dead)."""
    out = np.zeros(world.n)
    idx = np.flatnonzero(world.alive & (world.role != int(Role.CIVILIAN)))
    if len(idx) == 0:
        return out
    cells = world.pos[idx][:, None, :]
    if world.config.death_radius == "moore1":
        cheb = chebyshev_distances(cells, world.pos).astype(np.float64)
        f_same, f_opp, _ = perceive(world, idx, cells, force, radius=1.0, dist=cheb)
    else:
        f_same, f_opp, _ = perceive(world, idx, cells, force)
    ratio = f_opp[:, 0] / f_same[:, 0]
    out[idx] = np.minimum(-np.expm1(LN_TENTH * ratio), P_DIE_MAX)
    return out


def update_warning(agent: Agent, p_die: float) -> bool:
    """Advance the warning counter; returns whether the agent is still alive."""
    if p_die > agent.t_warn:
        agent.warn_count += 1
    if agent.warn_count > agent.t_warn_time:
        agent.alive = False
    return agent.alive


def death_phase(world: World, force: np.ndarray) -> np.ndarray:
    """Apply warnings from post-movement positions; returns ids that died."""
    p = death_probabilities(world, force)
    fighter = world.alive & (world.role != int(Role.CIVILIAN))
    world.warn_count[fighter & (p > world.t_warn)] += 1
    dying = np.flatnonzero(fighter & (world.warn_count > world.t_warn_time))
    for i in dying:
        world.grid.occupancy[world.pos[i, 0], world.pos[i, 1]] = Grid.EMPTY
    world.alive[dying] = False
    return dying
