"""k-hyperedge initialization.

Pick ``k`` base clusters as medoids of the cluster set under the asymmetric
cost ``1 - |m & c| / |c|`` (PAM: greedy BUILD, then first-improvement SWAP),
then strip pairwise overlaps so the chosen hyperedges are disjoint.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import ClusterSet, HyperEdgeSet, InvalidKError

# Tolerance for comparing float sums of cost entries; protects tie-breaking
# and the SWAP stopping test from rounding noise.
_TOL = 1e-12


def pairwise_cost_matrix(cs: ClusterSet) -> np.ndarray:
    """``cost[m, j] = 1 - |c_m & c_j| / |c_j|``: cost of medoid ``m`` representing ``c_j``."""
    ind = cs.indicator()
    inter = ind.T @ ind
    cost = 1.0 - inter / cs.sizes[None, :]
    np.fill_diagonal(cost, 0.0)
    return cost


def medoid_loss(cost: np.ndarray, medoids: Sequence[int]) -> float:
    """Initialization loss: every cluster charged its cheapest medoid."""
    return float(cost[list(medoids)].min(axis=0).sum())


def _first_min(values: np.ndarray, allowed: np.ndarray) -> int:
    vals = np.where(allowed, values, np.inf)
    return int(np.flatnonzero(vals <= vals.min() + _TOL)[0])


def kmedoids(cost: np.ndarray, k: int, seed: int | None = None) -> list:
    """Deterministic PAM on a precomputed cost matrix.

    ``seed`` is accepted for interface stability and is not used: BUILD and
    SWAP are both deterministic, with ties going to the lowest index.
    Returns medoid indices in BUILD order (SWAP replaces in place).
    """
    cost = np.asarray(cost, dtype=float)
    n_c = cost.shape[0]
    if not 1 <= k <= n_c:
        raise InvalidKError(f"k must satisfy 1 <= k <= n_c (k={k}, n_c={n_c})")

    medoids: list = []
    is_medoid = np.zeros(n_c, dtype=bool)
    nearest = np.full(n_c, np.inf)
    for _ in range(k):
        totals = np.minimum(nearest[None, :], cost).sum(axis=1)
        m = _first_min(totals, ~is_medoid)
        medoids.append(m)
        is_medoid[m] = True
        nearest = np.minimum(nearest, cost[m])

    current = medoid_loss(cost, medoids)
    improved = True
    while improved:
        improved = False
        for slot in range(k):
            others = [m for i, m in enumerate(medoids) if i != slot]
            rest = cost[others].min(axis=0) if others else np.full(n_c, np.inf)
            totals = np.minimum(rest[None, :], cost).sum(axis=1)
            better = np.flatnonzero((totals < current - _TOL) & ~is_medoid)
            if better.size:
                h = int(better[0])
                is_medoid[medoids[slot]] = False
                is_medoid[h] = True
                medoids[slot] = h
                current = float(totals[h])
                improved = True
    return medoids


def remove_overlaps(edges: Sequence) -> HyperEdgeSet:
    """Drop every pairwise intersection from both edges involved.

    Pairs are visited in ascending ``(i, j)`` order against the already
    shrunk edges, so a sample shared by three or more edges can survive in
    the last of them.  Emptied edges are kept.
    """
    current = [set(e) for e in edges]
    for i in range(len(current)):
        for j in range(i + 1, len(current)):
            inter = current[i] & current[j]
            if inter:
                current[i] -= inter
                current[j] -= inter
    return HyperEdgeSet(tuple(frozenset(e) for e in current))


def claim_overlaps(edges: Sequence) -> HyperEdgeSet:
    """Disjoint edges where every shared sample stays with the earliest edge holding it."""
    taken: set = set()
    out = []
    for e in edges:
        out.append(frozenset(set(e) - taken))
        taken |= set(e)
    return HyperEdgeSet(tuple(out))


def initialize(cs: ClusterSet, k: int, seed: int | None = None):
    """Medoid selection plus overlap removal.

    Returns ``(edges, medoids, init_loss)``.
    """
    cost = pairwise_cost_matrix(cs)
    medoids = kmedoids(cost, k, seed)
    edges = remove_overlaps([cs.clusters[m] for m in medoids])
    return edges, medoids, medoid_loss(cost, medoids)
