"""Antagonistic emotional contagion.

External emotion spreads from cops (positive) and activists (negative) to
everyone within the perceived range; mental emotion reacts to the change in
an agent's own game benefit. Civilians only receive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import expit

from .domain import EMOTION_BOUND, EMOTION_NUDGE, Agent, Role, World
from .geometry import distance, pairwise_distances


@dataclass(frozen=True)
class EmotionDelta:
    external: float
    mental: float

    @property
    def total(self) -> float:
        return self.external + self.mental


def pairwise_external_delta(
    sender_emotion: float, distance: float, receive_strength: float, send_strength: float
) -> float:
    """Contagion received from one sender at distance ``distance`` (cell units).

    ``1 - 1/(1+exp(-L))`` is evaluated as ``expit(-L)`` to avoid cancellation
    at large L.
    """
    if distance < 0:
        raise ValueError("distance must be non-negative")
    return float(expit(-distance)) * sender_emotion * receive_strength * send_strength


def external_increment(agent: Agent, others: Iterable[Agent], pr: float) -> float:
    """Sum of contagion from every live cop and activist within ``pr`` of ``agent``."""
    total = 0.0
    for other in others:
        if other.id == agent.id or not other.alive or other.role is Role.CIVILIAN:
            continue
        d = distance(agent.position, other.position)
        if d <= pr:
            total += pairwise_external_delta(
                other.emotion, d, agent.receive_strength, other.send_strength
            )
    return total


def mental_increment(
    role: Role, dbene: float, delta: float, rng: np.random.Generator | None = None
) -> float:
    if delta <= 0:
        raise ValueError("delta must be > 0")
    if role is Role.CIVILIAN:
        return 0.0
    if abs(dbene) < delta:
        if rng is None:
            raise ValueError("an rng is required inside the fluctuation band")
        base = float(rng.uniform(-0.01, 0.01))
    elif dbene >= delta:
        base = 0.1 / (delta + math.exp(delta / dbene))
    else:
        base = -0.1 / (delta + math.exp(dbene / delta))
    # a benefit gain pushes cops up and activists down
    return base if role is Role.COP else -base


def update_emotion(previous: float, delta: EmotionDelta | float) -> float:
    step = delta.total if isinstance(delta, EmotionDelta) else float(delta)
    e = min(EMOTION_BOUND, max(-EMOTION_BOUND, previous + step))
    if e == 0.0:
        e = math.copysign(EMOTION_NUDGE, previous)
    return e


def maybe_transition_role(agent: Agent, t_a2c: float, t_c2a: float) -> Role:
    if agent.role is Role.ACTIVIST and agent.emotion > t_a2c:
        return Role.CIVILIAN
    if agent.role is Role.CIVILIAN and agent.emotion < t_c2a:
        return Role.ACTIVIST
    return agent.role


# --------------------------------------------------------------------------
# Whole-world versions used by the engine
# --------------------------------------------------------------------------


def external_increments(world: World, dist: np.ndarray | None = None) -> np.ndarray:
    """Vectorised :func:`external_increment` for every agent (0 for the dead)."""
    if dist is None:
        dist = pairwise_distances(world.pos)
    sender = world.alive & (world.role != int(Role.CIVILIAN))
    weight = expit(-dist)
    weight[:, ~sender] = 0.0
    weight[dist > world.config.pr] = 0.0
    np.fill_diagonal(weight, 0.0)
    out = world.receive_strength * (weight @ (world.emotion * world.send_strength))
    out[~world.alive] = 0.0
    return out


def mental_increments(
    role: np.ndarray, dbene: np.ndarray, delta: float, rng: np.random.Generator
) -> np.ndarray:
    """Vectorised :func:`mental_increment`.

    Always draws one uniform per agent so the stream position does not depend
    on which branch each agent falls into.
    """
    if delta <= 0:
        raise ValueError("delta must be > 0")
    noise = rng.uniform(-0.01, 0.01, size=len(role))
    base = noise.copy()
    up = dbene >= delta
    down = dbene <= -delta
    base[up] = 0.1 / (delta + np.exp(delta / dbene[up]))
    base[down] = -0.1 / (delta + np.exp(dbene[down] / delta))
    base[role == int(Role.ACTIVIST)] *= -1.0
    base[role == int(Role.CIVILIAN)] = 0.0
    return base


def update_emotions(previous: np.ndarray, total: np.ndarray) -> np.ndarray:
    e = np.clip(previous + total, -EMOTION_BOUND, EMOTION_BOUND)
    zero = e == 0.0
    e[zero] = np.copysign(EMOTION_NUDGE, previous[zero])
    return e


def emotion_phase(
    world: World,
    rng: np.random.Generator,
    dist: np.ndarray | None = None,
    enabled: bool = True,
) -> None:
    """Synchronous contagion + mental update followed by role transitions.

    With ``enabled=False`` emotions are frozen (ablation) but transitions
    are still evaluated.
    """
    cfg = world.config
    live = world.alive
    if enabled:
        ext = external_increments(world, dist)
        dbene = world.benefit_cur - world.benefit_prev
        me = mental_increments(world.role, dbene, cfg.delta, rng)
        me[~live] = 0.0
        world.external_emotion += ext
        world.mental_emotion += me
        new_e = update_emotions(world.emotion, ext + me)
        world.emotion = np.where(live, new_e, world.emotion)

    to_civ = live & (world.role == int(Role.ACTIVIST)) & (world.emotion > cfg.t_a2c)
    to_act = live & (world.role == int(Role.CIVILIAN)) & (world.emotion < cfg.t_c2a)
    world.role[to_civ] = int(Role.CIVILIAN)
    world.role[to_act] = int(Role.ACTIVIST)
    changed = to_civ | to_act
    world.benefit_prev[changed] = 0.0
    world.benefit_cur[changed] = 0.0
