"""k-hyperedge adjustment: reassign samples to their best edge until the loss settles.

Placement is judged with the sample counted as a member of every candidate
edge (``b(x, e | {x})``).  Plain ``b(x, e)`` gives a sample's current edge a
head start of exactly 1, and moves that win by less than that still lower
the loss; comparing placements makes "every sample in its best edge"
coincide with "no single move lowers the loss".

A step moves every sample at once against frozen belonging values.  A
synchronous step can overshoot when several related samples move together,
so a step that does not strictly lower the loss is discarded in favour of
one in-order sweep of single improving moves.  The loss trace is therefore
strictly decreasing until its final, repeated value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import (
    UNASSIGNED,
    ClusterSet,
    HyperEdgeSet,
    InvalidInputError,
    belonging_numerators,
    intersection_counts,
    loss_numerator,
    top_two,
)

logger = logging.getLogger(__name__)


@dataclass
class AdjustResult:
    edges: HyperEdgeSet
    loss_trace: list = field(default_factory=list)
    iterations: int = 0
    stop_reason: str = ""
    sweeps: int = 0
    rescued: int = 0


def _placement(B: np.ndarray, assign: np.ndarray, l: int) -> np.ndarray:  # noqa: E741
    G = B + l
    rows = np.flatnonzero(assign != UNASSIGNED)
    G[rows, assign[rows]] -= l
    return G


def _check_cover(cs: ClusterSet, E: HyperEdgeSet) -> np.ndarray:
    assign = E.assignment(cs.n)
    if np.any(assign == UNASSIGNED):
        raise InvalidInputError("adjustment needs every sample in some edge")
    return assign


def rescue_empty(cs: ClusterSet, assign: np.ndarray, k: int) -> int:
    """Refill empty edges in place; returns how many samples were moved.

    Each empty edge receives the least confident sample (ties: lowest index)
    from an edge that can spare one.
    """
    moved = 0
    sizes = np.bincount(assign, minlength=k)
    for e in np.flatnonzero(sizes == 0):
        donors = sizes[assign] >= 2
        if not donors.any():
            break
        B = belonging_numerators(cs, assign, k)
        _, top, second = top_two(B)
        conf = np.where(donors, top - second, np.iinfo(np.int64).max)
        x = int(np.argmin(conf))
        sizes[assign[x]] -= 1
        assign[x] = e
        sizes[e] += 1
        moved += 1
    return moved


def _sync_step(cs: ClusterSet, assign: np.ndarray, k: int) -> np.ndarray:
    G = _placement(belonging_numerators(cs, assign, k), assign, cs.l)
    rows = np.arange(cs.n)
    best = np.argmax(G, axis=1)
    stay = G[rows, assign] == G[rows, best]
    new = np.where(stay, assign, best)

    # An edge deserted by all its members keeps the one that gains least by leaving.
    # Sending a sample back can desert the edge it was heading for, so repeat;
    # every pass pins one more sample to its old edge.
    old_sizes = np.bincount(assign, minlength=k)
    while True:
        new_sizes = np.bincount(new, minlength=k)
        deserted = np.flatnonzero((new_sizes == 0) & (old_sizes > 0))
        if deserted.size == 0:
            return new
        e = deserted[0]
        members = np.flatnonzero(assign == e)
        gain = G[members, new[members]] - G[members, e]
        new[members[int(np.argmin(gain))]] = e


def adjust_step(cs: ClusterSet, E: HyperEdgeSet) -> HyperEdgeSet:
    """One synchronous reassignment of every sample to its best edge."""
    assign = _check_cover(cs, E)
    return HyperEdgeSet.from_assignment(_sync_step(cs, assign, E.k), E.k)


def _sweep(cs: ClusterSet, assign: np.ndarray, k: int):
    """Single improving moves in sample order, updating counts as we go."""
    assign = assign.copy()
    counts = intersection_counts(cs, assign, k)
    sizes = np.bincount(assign, minlength=k)
    l = cs.l  # noqa: E741
    moves = 0
    for x in range(cs.n):
        a = assign[x]
        if sizes[a] == 1:
            continue
        memb = cs.membership[x]
        g = counts[memb].sum(axis=0) + l
        g[a] -= l
        j = int(np.argmax(g))
        if g[j] > g[a]:
            counts[memb, a] -= 1
            counts[memb, j] += 1
            sizes[a] -= 1
            sizes[j] += 1
            assign[x] = j
            moves += 1
    return assign, moves


def adjust(cs: ClusterSet, Ed: HyperEdgeSet, max_iters: int = 100) -> AdjustResult:
    """Iterate reassignment from a full cover until no sample wants to move."""
    if max_iters < 1:
        raise InvalidInputError("max_iters must be >= 1")
    k = Ed.k
    assign = _check_cover(cs, Ed)
    result = AdjustResult(edges=Ed)
    result.rescued = rescue_empty(cs, assign, k)

    loss = loss_numerator(cs, assign, k)
    result.loss_trace.append(loss / cs.l)
    for _ in range(max_iters):
        result.iterations += 1
        new = _sync_step(cs, assign, k)
        if np.array_equal(new, assign):
            result.loss_trace.append(loss / cs.l)
            result.stop_reason = "fixed-point"
            break
        new_loss = loss_numerator(cs, new, k)
        if new_loss >= loss:
            new, moves = _sweep(cs, assign, k)
            result.sweeps += 1
            if moves == 0:
                result.loss_trace.append(loss / cs.l)
                result.stop_reason = "fixed-point"
                break
            new_loss = loss_numerator(cs, new, k)
        assign, loss = new, new_loss
        result.loss_trace.append(loss / cs.l)
    else:
        result.stop_reason = "max-iters"
        logger.warning("adjustment stopped at max_iters=%d before converging", max_iters)

    result.edges = HyperEdgeSet.from_assignment(assign, k)
    return result
