"""Distance helpers over cell-centre coordinates."""

from __future__ import annotations

import math

import numpy as np


def distance(p: tuple[int, int], q: tuple[int, int]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def pairwise_distances(a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    """Euclidean distances between the rows of ``a`` (..., 2) and ``b`` (m, 2).

    Returns an array of shape ``a.shape[:-1] + (m,)``.
    """
    if b is None:
        b = a
    diff = a[..., None, :].astype(np.float64) - b.astype(np.float64)
    return np.sqrt(np.einsum("...k,...k->...", diff, diff))


def chebyshev_distances(a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    if b is None:
        b = a
    return np.abs(a[..., None, :] - b).max(axis=-1)
