"""Partitioning Around Medoids (BUILD + SWAP) with random restarts."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


class DegenerateClusteringWarning(UserWarning):
    pass


@dataclass
class Clustering:
    medoids: list[int]  # indices into the input points, ascending
    labels: np.ndarray  # position in ``medoids`` of each point's medoid
    cost: float


def _pairwise(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff ** 2).sum(-1))


def _cost(dist: np.ndarray, medoids: np.ndarray) -> float:
    return float(dist[:, medoids].min(1).sum())


def _build(dist: np.ndarray, k: int) -> np.ndarray:
    first = int(np.argmin(dist.sum(0)))
    chosen = [first]
    nearest = dist[:, first].copy()
    for _ in range(1, k):
        gain = np.maximum(nearest[:, None] - dist, 0).sum(0)
        gain[chosen] = -1
        c = int(np.argmax(gain))
        chosen.append(c)
        nearest = np.minimum(nearest, dist[:, c])
    return np.array(chosen)


def _swap(dist: np.ndarray, medoids: np.ndarray, max_iter: int = 200) -> np.ndarray:
    n = len(dist)
    medoids = medoids.copy()
    for _ in range(max_iter):
        d_m = dist[:, medoids]
        order = np.argsort(d_m, axis=1, kind="stable")
        near = order[:, 0]
        d1 = d_m[np.arange(n), near]
        d2 = d_m[np.arange(n), order[:, 1]] if len(medoids) > 1 else np.full(n, np.inf)
        current = d1.sum()
        is_medoid = np.zeros(n, bool)
        is_medoid[medoids] = True
        best_delta, best = 0.0, None
        for i in range(len(medoids)):
            base = np.where(near == i, d2, d1)
            totals = np.minimum(dist, base[:, None]).sum(0)
            totals[is_medoid] = np.inf
            h = int(np.argmin(totals))
            delta = totals[h] - current
            if delta < best_delta - 1e-12:
                best_delta, best = delta, (i, h)
        if best is None:
            break
        medoids[best[0]] = best[1]
    return medoids


def kmedoids(points, k: int, restarts: int = 50, seed: int = 0) -> Clustering:
    """Best of ``restarts`` PAM runs: one from the greedy BUILD start, the rest random."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if np.all(x == x[0]):
        warnings.warn("all points identical; returning the first k", DegenerateClusteringWarning, stacklevel=2)
        return Clustering(list(range(k)), np.zeros(n, dtype=int), 0.0)
    if k == n:
        return Clustering(list(range(n)), np.arange(n), 0.0)
    dist = _pairwise(x)
    rng = np.random.default_rng(seed)
    best, best_cost = None, np.inf
    for r in range(max(1, restarts)):
        start = _build(dist, k) if r == 0 else rng.choice(n, size=k, replace=False)
        med = _swap(dist, start)
        c = _cost(dist, med)
        if c < best_cost - 1e-12:
            best, best_cost = med, c
    medoids = np.sort(best)
    labels = np.argmin(dist[:, medoids], axis=1)
    return Clustering([int(m) for m in medoids], labels, best_cost)
