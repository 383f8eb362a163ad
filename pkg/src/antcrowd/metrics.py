"""Population ratios, heat fields, dominant paths and trajectory-similarity scores."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .domain import Role, SimulationTrace, Snapshot, Strategy, World
from .geometry import pairwise_distances

State = Union[World, Snapshot]

ENTROPY_EPS = 1e-6
DEFAULT_SIGMA = 1.5


class MetricError(ValueError):
    """A metric is undefined for the given input."""


def active_ratio(state: State) -> float:
    """Live activists over live activists plus live civilians (0 if both absent)."""
    act = int(np.count_nonzero(state.alive & (state.role == int(Role.ACTIVIST))))
    civ = int(np.count_nonzero(state.alive & (state.role == int(Role.CIVILIAN))))
    return act / (act + civ) if act + civ else 0.0


def cooperation_ratio(state: State, side: Role) -> float:
    if side is Role.CIVILIAN:
        raise ValueError("cooperation ratio is defined for cops and activists only")
    mask = state.alive & (state.role == int(side))
    k = int(np.count_nonzero(mask))
    if k == 0:
        return 0.0
    coop = np.count_nonzero(state.strategy[mask] == int(Strategy.COOPERATION))
    return coop / k


def mean_emotion(state: State, role: Role) -> float:
    """Mean emotion of the live agents of ``role``; NaN when there are none."""
    mask = state.alive & (state.role == int(role))
    return float(state.emotion[mask].mean()) if mask.any() else float("nan")


def force_variance(state: State, role: Role) -> float:
    """Population variance of live ``role`` members' deterrent force.

    Shifted by the first member's value so identical forces give exactly 0.
    """
    mask = state.alive & (state.role == int(role))
    if not mask.any():
        return 0.0
    f = np.sin(np.abs(state.emotion[mask]) * (np.pi / 2))
    return float(np.var(f - f[0]))


def emotion_heatmap(
    state: State, sigma: float = DEFAULT_SIGMA, shape: tuple[int, int] | None = None
) -> np.ndarray:
    """Signed emotion field: cops deposit +|e|, activists -|e|, each as an
    unnormalised Gaussian bump of width ``sigma`` cells.

    ``shape`` is required for snapshots; a world supplies its own grid shape.
    """
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    if shape is None:
        if not isinstance(state, World):
            raise ValueError("shape is required when the state carries no grid")
        shape = state.grid.shape
    rows, cols = shape
    field_ = np.zeros((rows, cols))
    sign = np.zeros(len(state.role))
    sign[state.role == int(Role.COP)] = 1.0
    sign[state.role == int(Role.ACTIVIST)] = -1.0
    src = np.flatnonzero(state.alive & (sign != 0))
    if len(src) == 0:
        return field_
    weight = sign[src] * np.abs(state.emotion[src])
    rr = np.arange(rows)[:, None] - state.pos[src, 0]  # (rows, k)
    cc = np.arange(cols)[:, None] - state.pos[src, 1]  # (cols, k)
    gr = np.exp(-(rr**2) / (2 * sigma**2))
    gc = np.exp(-(cc**2) / (2 * sigma**2))
    return np.einsum("rk,ck,k->rc", gr, gc, weight)


# --------------------------------------------------------------------------
# Dominant paths
# --------------------------------------------------------------------------


@dataclass
class DominantPath:
    """Centre trajectory of one tracked same-role cluster; points are (tick, x=col, y=row)."""

    role: Role | None
    points: list[tuple[int, float, float]] = field(default_factory=list)
    members: set[int] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ticks(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=np.int64)

    @property
    def xy(self) -> np.ndarray:
        return np.array([(p[1], p[2]) for p in self.points], dtype=np.float64).reshape(-1, 2)


@dataclass
class _Cluster:
    role: Role
    ids: frozenset[int]
    x: float
    y: float


def _clusters(snap: Snapshot, link_radius: float, min_group: int) -> list[_Cluster]:
    out = []
    for role in Role:
        ids = np.flatnonzero(snap.alive & (snap.role == int(role)))
        if len(ids) < min_group:
            continue
        pos = snap.pos[ids]
        adj = pairwise_distances(pos) <= link_radius
        _, labels = connected_components(csr_matrix(adj), directed=False)
        for lab in np.unique(labels):
            members = ids[labels == lab]
            if len(members) < min_group:
                continue
            centre = snap.pos[members].mean(axis=0)
            out.append(_Cluster(role, frozenset(members.tolist()), float(centre[1]), float(centre[0])))
    # geometric ordering keeps the result independent of agent labels
    out.sort(key=lambda c: (int(c.role), c.y, c.x, -len(c.ids)))
    return out


def extract_dominant_paths(
    trace: SimulationTrace | Sequence[Snapshot], link_radius: float = 1.5, min_group: int = 3
) -> list[DominantPath]:
    """Cluster same-role live agents per tick (single linkage) and chain
    clusters across ticks by largest member overlap.

    A cluster with no overlapping predecessor opens a new path; a path
    whose cluster disappears is closed.
    """
    if min_group < 1:
        raise ValueError("min_group must be >= 1")
    paths: list[DominantPath] = []
    open_: list[tuple[int, frozenset[int]]] = []  # (path index, members last tick)
    for snap in trace:
        clusters = _clusters(snap, link_radius, min_group)
        pairs = []
        for p_idx, prev in open_:
            for c_idx, c in enumerate(clusters):
                if c.role is paths[p_idx].role:
                    ov = len(prev & c.ids)
                    if ov:
                        pairs.append((-ov, p_idx, c_idx))
        pairs.sort()
        used_p: set[int] = set()
        used_c: set[int] = set()
        links: list[tuple[int, int]] = []
        for _, p_idx, c_idx in pairs:
            if p_idx in used_p or c_idx in used_c:
                continue
            used_p.add(p_idx)
            used_c.add(c_idx)
            links.append((p_idx, c_idx))
        for c_idx, c in enumerate(clusters):
            if c_idx not in used_c:
                paths.append(DominantPath(c.role))
                links.append((len(paths) - 1, c_idx))
        for p_idx, c_idx in links:
            c = clusters[c_idx]
            paths[p_idx].points.append((snap.tick, c.x, c.y))
            paths[p_idx].members |= c.ids
        open_ = sorted((p_idx, clusters[c_idx].ids) for p_idx, c_idx in links)
    return paths


# --------------------------------------------------------------------------
# Trajectory similarity
# --------------------------------------------------------------------------


def angular_error(v_sim: Sequence[float], v_ref: Sequence[float]) -> float:
    """Angle in radians between two movement directions.

    Computed as atan2(|cross|, dot), which equals the arccos of the clamped
    normalised dot product but stays accurate for nearly parallel vectors.
    """
    ax, ay = float(v_sim[0]), float(v_sim[1])
    bx, by = float(v_ref[0]), float(v_ref[1])
    if (ax == 0.0 and ay == 0.0) or (bx == 0.0 and by == 0.0):
        raise MetricError("angular error is undefined for a zero vector")
    return math.atan2(abs(ax * by - ay * bx), ax * bx + ay * by)


def _mean_gap(a: DominantPath, b: DominantPath) -> float:
    n = min(len(a), len(b))
    if n == 0:
        return math.inf
    return float(np.linalg.norm(a.xy[:n] - b.xy[:n], axis=1).mean())


def match_paths(
    sim: Sequence[DominantPath], ref: Sequence[DominantPath], method: str = "greedy"
) -> list[tuple[int, int]]:
    """Pair simulated with reference paths by smallest mean centre distance."""
    if not sim or not ref:
        return []
    cost = np.array([[_mean_gap(a, b) for b in ref] for a in sim])
    if method == "optimal":
        finite = np.where(np.isfinite(cost), cost, 1e300)
        r, c = linear_sum_assignment(finite)
        return sorted((int(i), int(j)) for i, j in zip(r, c) if np.isfinite(cost[i, j]))
    if method != "greedy":
        raise ValueError("method must be 'greedy' or 'optimal'")
    order = sorted(
        ((cost[i, j], i, j) for i in range(len(sim)) for j in range(len(ref)) if np.isfinite(cost[i, j]))
    )
    taken_i: set[int] = set()
    taken_j: set[int] = set()
    out = []
    for _, i, j in order:
        if i in taken_i or j in taken_j:
            continue
        taken_i.add(i)
        taken_j.add(j)
        out.append((i, j))
    return sorted(out)


def gaussian_entropy(errors: np.ndarray, eps: float = ENTROPY_EPS) -> float:
    """Differential entropy of a zero-mean 2-D Gaussian fitted to ``errors`` (k, 2)."""
    errors = np.asarray(errors, dtype=np.float64).reshape(-1, 2)
    if len(errors) == 0:
        raise MetricError("no error samples")
    cov = errors.T @ errors / len(errors) + eps * np.eye(2)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0:
        raise MetricError("fitted covariance is not positive definite")
    return 0.5 * (2 * math.log(2 * math.pi * math.e) + logdet)


def entropy_metric(
    sim_paths: Sequence[DominantPath],
    ref_paths: Sequence[DominantPath],
    eps: float = ENTROPY_EPS,
    matching: str = "greedy",
) -> float:
    pairs = match_paths(sim_paths, ref_paths, matching)
    if not pairs:
        raise MetricError("no matchable path pairs")
    errs = []
    for i, j in pairs:
        n = min(len(sim_paths[i]), len(ref_paths[j]))
        errs.append(sim_paths[i].xy[:n] - ref_paths[j].xy[:n])
    return gaussian_entropy(np.concatenate(errs), eps)


def mean_angular_error(
    sim_paths: Sequence[DominantPath], ref_paths: Sequence[DominantPath], matching: str = "greedy"
) -> float:
    """Average step-direction error over matched path pairs.

    Steps where both paths stand still count as agreement; steps where only
    one of them moves have no defined angle and are skipped.
    """
    pairs = match_paths(sim_paths, ref_paths, matching)
    if not pairs:
        raise MetricError("no matchable path pairs")
    total, count = 0.0, 0
    for i, j in pairs:
        n = min(len(sim_paths[i]), len(ref_paths[j]))
        da = np.diff(sim_paths[i].xy[:n], axis=0)
        db = np.diff(ref_paths[j].xy[:n], axis=0)
        for u, v in zip(da, db):
            still_u, still_v = not u.any(), not v.any()
            if still_u and still_v:
                count += 1
            elif not (still_u or still_v):
                total += angular_error(u, v)
                count += 1
    if count == 0:
        raise MetricError("no comparable movement steps")
    return total / count


def _pair_spacing(paths: Sequence[DominantPath], n: int) -> np.ndarray:
    xy = np.stack([p.xy[:n] for p in paths])  # (p, n, 2)
    iu = np.triu_indices(len(paths), k=1)
    d = np.linalg.norm(xy[:, None] - xy[None, :], axis=-1)  # (p, p, n)
    return d[iu].mean(axis=0)


def idm(sim_paths: Sequence[DominantPath], ref_paths: Sequence[DominantPath]) -> float:
    """Time-averaged gap between the mean inter-group centre distances of two path sets."""
    if len(sim_paths) < 2 or len(ref_paths) < 2:
        warnings.warn("idm needs at least two paths on each side; returning 0", stacklevel=2)
        return 0.0
    n = min(len(p) for p in (*sim_paths, *ref_paths))
    if n == 0:
        warnings.warn("idm got an empty path; returning 0", stacklevel=2)
        return 0.0
    return float(np.abs(_pair_spacing(sim_paths, n) - _pair_spacing(ref_paths, n)).mean())


__all__ = [
    "DominantPath",
    "MetricError",
    "active_ratio",
    "angular_error",
    "cooperation_ratio",
    "emotion_heatmap",
    "entropy_metric",
    "extract_dominant_paths",
    "force_variance",
    "gaussian_entropy",
    "idm",
    "match_paths",
    "mean_angular_error",
    "mean_emotion",
]
