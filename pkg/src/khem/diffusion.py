"""k-hyperedge diffusion: grow a partial cover until every sample is assigned."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    UNASSIGNED,
    ClusterSet,
    DegenerateInitializationError,
    HyperEdgeSet,
    InvalidInputError,
    belonging_numerators,
    loss_numerator,
    top_two,
)

MODES = ("rebuild", "grow")


def assigned_count(E: HyperEdgeSet) -> int:
    """Number of samples covered by the edges."""
    return len(frozenset().union(*E.edges)) if E.k else 0


def selection_size(n_a: int, n: int, k: int) -> int:
    """How many samples are held after the next round."""
    step = max(math.ceil((n - n_a) / k), math.isqrt(n - 1) + 1 if n > 0 else 0)
    return min(n_a + step, n)


@dataclass
class DiffusionResult:
    edges: HyperEdgeSet
    rounds: int
    # Loss after each round, counting unassigned samples with belonging 0.
    loss_trace: list = field(default_factory=list)
    # Samples held before a round but left out of its rebuilt edges.
    displaced: int = 0


def _select(order_key_conf: np.ndarray, candidates: np.ndarray, count: int) -> np.ndarray:
    # Descending confidence, ascending sample index.
    conf = order_key_conf[candidates]
    order = np.lexsort((candidates, -conf))
    return candidates[order[:count]]


def diffuse(cs: ClusterSet, Ei: HyperEdgeSet, mode: str = "rebuild") -> DiffusionResult:
    """Assign samples in rounds, most confident first, until the cover is full.

    Each round ranks all ``n`` samples by the gap between their best and
    second-best belonging against the current edges.  In ``rebuild`` mode
    the edges are rebuilt from the top ``n_s`` samples, so earlier samples
    may move or drop out; in ``grow`` mode held samples stay put and only
    the best ``n_s - n_a`` unassigned samples are added.
    """
    if mode not in MODES:
        raise InvalidInputError(f"diffusion mode must be one of {MODES}, got {mode!r}")
    n, k = cs.n, Ei.k
    assign = Ei.assignment(n)
    n_a = int(np.count_nonzero(assign != UNASSIGNED))
    result = DiffusionResult(edges=Ei, rounds=0)
    result.loss_trace.append(loss_numerator(cs, assign, k) / cs.l)
    if n_a == n:
        return result
    if n_a == 0:
        raise DegenerateInitializationError(
            "every initial hyperedge is empty; overlap removal annihilated the medoids"
        )

    while n_a < n:
        B = belonging_numerators(cs, assign, k)
        best, top, second = top_two(B)
        conf = top - second
        n_s = selection_size(n_a, n, k)
        if mode == "rebuild":
            chosen = _select(conf, np.arange(n), n_s)
            new = np.full(n, UNASSIGNED, dtype=np.int64)
            new[chosen] = best[chosen]
            result.displaced += int(np.count_nonzero((assign != UNASSIGNED) & (new == UNASSIGNED)))
        else:
            free = np.flatnonzero(assign == UNASSIGNED)
            chosen = _select(conf, free, n_s - n_a)
            new = assign.copy()
            new[chosen] = best[chosen]
        assign = new
        n_a = int(np.count_nonzero(assign != UNASSIGNED))
        result.rounds += 1
        result.loss_trace.append(loss_numerator(cs, assign, k) / cs.l)

    result.edges = HyperEdgeSet.from_assignment(assign, k)
    return result
