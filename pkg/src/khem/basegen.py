"""Ensemble-base generation: repeated Lloyd k-means with a randomised k.

Also provides a Gaussian-blob generator and the bundled iris data for
desk-scale experiments.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from .core import EnsembleBase, InvalidKError

MAX_ITER = 300


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = (points**2).sum(axis=1)[:, None] - 2.0 * points @ centers.T + (centers**2).sum(axis=1)[None, :]
    return np.maximum(d, 0.0)


def kmeans(points, k: int, seed=None, max_iter: int = MAX_ITER) -> np.ndarray:
    """Lloyd's algorithm from ``k`` distinct data points chosen uniformly at random.

    Runs to an assignment fixed point or ``max_iter`` iterations.  An empty
    cluster is re-seeded with the point farthest from its own center.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if not 1 <= k <= n:
        raise InvalidKError(f"k-means needs 1 <= k <= n (k={k}, n={n})")
    if not np.all(np.isfinite(X)):
        raise ValueError("points must be finite")
    rng = _rng(seed)
    centers = X[rng.choice(n, size=k, replace=False)].copy()
    labels = np.full(n, -1, dtype=np.int64)
    for _ in range(max_iter):
        d = _sq_dists(X, centers)
        new = np.argmin(d, axis=1)
        sizes = np.bincount(new, minlength=k)
        for c in np.flatnonzero(sizes == 0):
            own = d[np.arange(n), new]
            # Never strip a cluster down to nothing while filling another.
            own[sizes[new] <= 1] = -1.0
            far = int(np.argmax(own))
            sizes[new[far]] -= 1
            new[far] = c
            sizes[c] += 1
            d[far] = 0.0
        if np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            centers[c] = X[labels == c].mean(axis=0)
    return labels


def k_range(n: int, k_true: int) -> tuple:
    """Inclusive range of cluster counts for base clusterings (sqrt(n) floored)."""
    upper = max(min(math.isqrt(n), 50), math.ceil(1.5 * k_true))
    return k_true, min(upper, n)


def standardize(points) -> np.ndarray:
    X = np.asarray(points, dtype=float)
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return (X - X.mean(axis=0)) / sd


def _threads() -> int:
    try:
        cap = int(os.environ.get("KHEM_THREADS", "0"))
    except ValueError:
        cap = 0
    return cap if cap > 0 else min(8, os.cpu_count() or 1)


def generate_base(points, k_true: int, l: int, seed: int = 0, standardize_features: bool = True) -> EnsembleBase:  # noqa: E741
    """Run k-means ``l`` times, each with k drawn uniformly from :func:`k_range`.

    Column ``j`` draws from its own stream spawned off ``seed``, so results do
    not depend on how many worker threads ran the columns.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if k_true < 2:
        raise ValueError("k_true must be >= 2")
    X = standardize(points) if standardize_features else np.asarray(points, dtype=float)
    lo, hi = k_range(X.shape[0], k_true)
    streams = np.random.SeedSequence(seed).spawn(l)

    def column(ss):
        rng = np.random.default_rng(ss)
        k = int(rng.integers(lo, hi + 1))
        return kmeans(X, k, rng)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        cols = list(pool.map(column, streams))
    return EnsembleBase(np.column_stack(cols))


def gaussian_blobs(n: int, k: int, d: int = 2, spread: float = 1.0, seed: int = 0, separation: float = 10.0):
    """Isotropic blobs centred on the first ``k`` points of a scaled integer grid.

    Returns ``(points, truth)`` in shuffled order; cluster sizes differ by at most one.
    """
    if not 1 <= k <= n or d < 1:
        raise ValueError("need n >= k >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    side = 1
    while side**d < k:
        side += 1
    grid = np.stack(np.unravel_index(np.arange(k), (side,) * d), axis=1).astype(float)
    centers = grid * separation
    truth = np.repeat(np.arange(k), [n // k + (i < n % k) for i in range(k)])
    truth = truth[rng.permutation(n)]
    points = centers[truth] + rng.normal(scale=spread, size=(n, d))
    return points, truth


def load_iris():
    """The 150 x 4 iris measurements and their species labels (0, 1, 2)."""
    with resources.files("khem.data").joinpath("iris.csv").open() as fh:
        raw = np.loadtxt(fh, delimiter=",")
    return raw[:, :4], raw[:, 4].astype(np.int64)
