"""Domain types and shared belonging primitives.

A set of base clusterings is viewed as a hypergraph whose hyperedges are the
base clusters.  Everything downstream is phrased in terms of the belonging
degree of a sample to a candidate hyperedge::

    b(x, e) = (1/l) * sum over the l base clusters c containing x of |c & e|

The per-sample functions here operate on Python sets and are the readable
reference.  The ``*_matrix`` / ``intersection_counts`` helpers are the
vectorised path used by the stages; they keep belonging as integer
numerators (``l * b``) so loss comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

UNASSIGNED = -1


class KHEMError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(KHEMError, ValueError):
    pass


class InvalidKError(KHEMError, ValueError):
    pass


class DegenerateInitializationError(KHEMError, RuntimeError):
    """Every initial hyperedge is empty, so belonging carries no signal."""


@dataclass(frozen=True)
class EnsembleBase:
    """An ``n x l`` matrix of base-clustering labels, one column per clustering."""

    labels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.size == 0:
            raise InvalidInputError("ensemble base must be a non-empty n x l matrix")
        if arr.dtype.kind == "f":
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError("ensemble base has a missing label")
            if not np.all(arr == np.round(arr)):
                raise InvalidInputError("ensemble base labels must be integers")
            arr = arr.astype(np.int64)
        elif arr.dtype.kind not in "iu":
            raise InvalidInputError(f"ensemble base labels must be integers, got {arr.dtype}")
        arr = arr.astype(np.int64, copy=False)
        if np.any(arr < 0):
            raise InvalidInputError("ensemble base has a missing (negative) label")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def l(self) -> int:  # noqa: E743
        return self.labels.shape[1]


@dataclass(frozen=True)
class ClusterSet:
    """All base clusters flattened into one list.

    ``membership[x]`` holds the indices of the ``l`` clusters containing
    sample ``x``, in column order.  ``column[c]`` is the base clustering that
    cluster ``c`` came from.
    """

    clusters: tuple
    membership: np.ndarray
    column: np.ndarray
    n: int
    l: int  # noqa: E741
    sizes: np.ndarray = field(repr=False)

    @property
    def n_c(self) -> int:
        return len(self.clusters)

    def indicator(self) -> np.ndarray:
        """Dense ``n x n_c`` 0/1 incidence matrix."""
        ind = np.zeros((self.n, self.n_c), dtype=np.int64)
        rows = np.repeat(np.arange(self.n), self.l)
        ind[rows, self.membership.ravel()] = 1
        return ind


@dataclass(frozen=True)
class HyperEdgeSet:
    """``k`` pairwise-disjoint sample sets; a partial cover is allowed."""

    edges: tuple

    def __post_init__(self):
        edges = tuple(frozenset(int(x) for x in e) for e in self.edges)
        seen: set = set()
        for e in edges:
            if seen & e:
                raise InvalidInputError("hyperedges must be pairwise disjoint")
            seen |= e
        object.__setattr__(self, "edges", edges)

    @property
    def k(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __getitem__(self, i):
        return self.edges[i]

    def __iter__(self):
        return iter(self.edges)

    def covered(self) -> int:
        return sum(len(e) for e in self.edges)

    def assignment(self, n: int) -> np.ndarray:
        """Edge index per sample, ``UNASSIGNED`` (-1) outside every edge."""
        assign = np.full(n, UNASSIGNED, dtype=np.int64)
        for i, e in enumerate(self.edges):
            if e:
                idx = np.fromiter(e, dtype=np.int64, count=len(e))
                if idx.min() < 0 or idx.max() >= n:
                    raise InvalidInputError(f"edge {i} holds a sample outside 0..{n - 1}")
                assign[idx] = i
        return assign

    @classmethod
    def from_assignment(cls, assign: Sequence[int], k: int) -> "HyperEdgeSet":
        assign = np.asarray(assign)
        buckets: list = [[] for _ in range(k)]
        for x, e in enumerate(assign.tolist()):
            if e != UNASSIGNED:
                buckets[e].append(x)
        return cls(tuple(frozenset(b) for b in buckets))


def build_cluster_set(base: EnsembleBase | np.ndarray) -> ClusterSet:
    """Flatten the base clusterings into clusters, column-major and by ascending label."""
    if not isinstance(base, EnsembleBase):
        base = EnsembleBase(np.asarray(base))
    labels = base.labels
    n, l = labels.shape  # noqa: E741
    membership = np.empty((n, l), dtype=np.int64)
    clusters = []
    column = []
    offset = 0
    for j in range(l):
        values, inverse = np.unique(labels[:, j], return_inverse=True)
        membership[:, j] = inverse + offset
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(values) + 1))
        for a, b in zip(bounds[:-1], bounds[1:]):
            clusters.append(frozenset(order[a:b].tolist()))
            column.append(j)
        offset += len(values)
    sizes = np.array([len(c) for c in clusters], dtype=np.int64)
    membership.setflags(write=False)
    return ClusterSet(
        clusters=tuple(clusters),
        membership=membership,
        column=np.array(column, dtype=np.int64),
        n=n,
        l=l,
        sizes=sizes,
    )


# -- per-sample reference primitives --------------------------------------


def belonging(x: int, edge: Iterable[int], cs: ClusterSet) -> float:
    """Average overlap between ``edge`` and the base clusters containing ``x``."""
    edge = edge if isinstance(edge, (set, frozenset)) else set(edge)
    total = sum(len(cs.clusters[c] & edge) for c in cs.membership[x])
    return total / cs.l


def _belongings(x: int, E: HyperEdgeSet | Sequence, cs: ClusterSet) -> list:
    return [belonging(x, e, cs) for e in E]


def best_edge(x: int, E: HyperEdgeSet | Sequence, cs: ClusterSet) -> int:
    """Index of the edge with the highest belonging; ties go to the lowest index."""
    values = _belongings(x, E, cs)
    return max(range(len(values)), key=lambda i: (values[i], -i))


def confidence(x: int, E: HyperEdgeSet | Sequence, cs: ClusterSet) -> float:
    """Gap between the largest and second-largest belonging of ``x``.

    With a single edge the second maximum is taken as 0.
    """
    values = sorted(_belongings(x, E, cs), reverse=True)
    if len(values) == 1:
        return values[0]
    return values[0] - values[1]


def placement_belonging(x: int, edge: Iterable[int], cs: ClusterSet) -> float:
    """Belonging of ``x`` to ``edge`` once ``x`` is a member of it.

    Equal to ``belonging(x, edge | {x})``.  This is the quantity whose
    comparison across edges decides whether moving ``x`` lowers the
    adjustment loss: moving ``x`` from edge ``i`` to edge ``j`` changes the
    loss by ``2 * (placement(x, i) - placement(x, j))``.
    """
    edge = set(edge)
    edge.add(x)
    return belonging(x, edge, cs)


def best_placement(x: int, E: HyperEdgeSet | Sequence, cs: ClusterSet) -> int:
    """Edge ``x`` is best placed in; ties keep ``x`` where it is, then lowest index."""
    values = [placement_belonging(x, e, cs) for e in E]
    top = max(values)
    for i, e in enumerate(E):
        if x in e and values[i] == top:
            return i
    return values.index(top)


def edge_quality(edge: Iterable[int], cs: ClusterSet) -> float:
    """Sum of each member's belonging to the edge."""
    edge = frozenset(edge)
    return sum(belonging(x, edge, cs) for x in edge)


def adjust_loss(E: HyperEdgeSet | Sequence, cs: ClusterSet) -> float:
    """Adjustment loss ``sum_x (n - b(x, edge containing x))`` of a full cover."""
    if not isinstance(E, HyperEdgeSet):
        E = HyperEdgeSet(tuple(E))
    assign = E.assignment(cs.n)
    if np.any(assign == UNASSIGNED):
        raise InvalidInputError("adjustment loss needs every sample in some edge")
    return loss_numerator(cs, assign, E.k) / cs.l


def adjust_loss_by_edges(E: HyperEdgeSet | Sequence, cs: ClusterSet) -> float:
    """Same loss in its per-edge form ``sum_i (n |e_i| - Q(e_i))``."""
    return sum(cs.n * len(e) - edge_quality(e, cs) for e in E)


# -- vectorised helpers ----------------------------------------------------


def intersection_counts(cs: ClusterSet, assign: np.ndarray, k: int) -> np.ndarray:
    """``counts[c, e] = |cluster c & edge e|`` for an assignment vector."""
    mask = assign != UNASSIGNED
    edge_of = np.repeat(assign[mask], cs.l)
    flat = cs.membership[mask].ravel() * k + edge_of
    return np.bincount(flat, minlength=cs.n_c * k).reshape(cs.n_c, k)


def belonging_numerators(cs: ClusterSet, assign: np.ndarray, k: int, counts=None) -> np.ndarray:
    """``(n, k)`` integer matrix equal to ``l * b(x, e)``."""
    if counts is None:
        counts = intersection_counts(cs, assign, k)
    return counts[cs.membership].sum(axis=1)


def loss_numerator(cs: ClusterSet, assign: np.ndarray, k: int, B=None) -> int:
    """``l`` times the adjustment loss, as an exact integer.

    Unassigned samples count with belonging 0, which makes the value usable
    as a progress measure during diffusion as well.
    """
    if B is None:
        B = belonging_numerators(cs, assign, k)
    mask = assign != UNASSIGNED
    own = int(B[np.flatnonzero(mask), assign[mask]].sum())
    return cs.n * cs.n * cs.l - own


def top_two(B: np.ndarray):
    """Argmax (lowest index on ties) and max/second-max values per row."""
    best = np.argmax(B, axis=1)
    rows = np.arange(B.shape[0])
    top = B[rows, best]
    if B.shape[1] == 1:
        return best, top, np.zeros_like(top)
    second = np.partition(B, B.shape[1] - 2, axis=1)[:, -2]
    return best, top, second
