"""Executable checks of the distance/potential inequalities and of loss descent.

Everything here recomputes losses from sets via :func:`khem.core.belonging`,
independently of the vectorised path the algorithm uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    ClusterSet,
    HyperEdgeSet,
    InvalidInputError,
    adjust_loss_by_edges,
    belonging,
    best_placement,
    build_cluster_set,
)

ORACLE_MAX_N = 20
TOL = 1e-9


def edge_dist(e_i, e_j, n: int) -> int:
    """``n - |e_i & e_j|``."""
    return n - len(set(e_i) & set(e_j))


def phi(e_i, e_j, cs: ClusterSet) -> float:
    """Cost of serving every member of ``e_j`` from ``e_i``: ``sum (n - b(x, e_i))``."""
    e_i = frozenset(e_i)
    return sum(cs.n - belonging(x, e_i, cs) for x in e_j)


def _moved(E, x: int, src: int, dst: int) -> list:
    edges = [set(e) for e in E]
    edges[src].discard(x)
    edges[dst].add(x)
    return edges


@dataclass
class OracleResult:
    ok: bool
    witness: tuple | None = None  # (sample, from_edge, to_edge, loss_before, loss_after)

    def __bool__(self):
        return self.ok


def local_optimum_oracle(cs: ClusterSet, E: HyperEdgeSet, allow_empty: bool = False) -> OracleResult:
    """Brute-force check that no single move of a sample at its argmax edge lowers the loss.

    Only samples whose current edge maximises plain belonging are tried.
    Moves that would leave an edge empty are skipped unless ``allow_empty``;
    the adjustment keeps all ``k`` edges occupied.
    """
    if cs.n > ORACLE_MAX_N:
        raise InvalidInputError(f"oracle is exhaustive; refusing n={cs.n} > {ORACLE_MAX_N}")
    if E.covered() != cs.n:
        raise InvalidInputError("oracle needs a full cover")
    base = adjust_loss_by_edges(E, cs)
    for x in range(cs.n):
        src = next(i for i, e in enumerate(E) if x in e)
        if belonging(x, E[src], cs) < max(belonging(x, e, cs) for e in E):
            continue
        if not allow_empty and len(E[src]) == 1:
            continue
        for dst in range(E.k):
            if dst == src:
                continue
            after = adjust_loss_by_edges(_moved(E, x, src, dst), cs)
            if after < base - TOL:
                return OracleResult(False, (x, src, dst, base, after))
    return OracleResult(True)


# -- randomised instance generation ----------------------------------------


def random_cluster_set(rng: np.random.Generator, n: int, l_range=(2, 5), label_range=(2, 4)) -> ClusterSet:
    l = int(rng.integers(l_range[0], l_range[1] + 1))  # noqa: E741
    cols = [rng.integers(0, int(rng.integers(label_range[0], label_range[1] + 1)), size=n) for _ in range(l)]
    return build_cluster_set(np.column_stack(cols))


def random_edge(rng: np.random.Generator, n: int) -> frozenset:
    return frozenset(np.flatnonzero(rng.random(n) < 0.5).tolist())


def random_partition(rng: np.random.Generator, n: int, k: int) -> HyperEdgeSet:
    return HyperEdgeSet.from_assignment(rng.integers(0, k, size=n), k)


# -- property suites -------------------------------------------------------


@dataclass
class SuiteReport:
    suite: str
    trials: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "violations": len(self.violations)}


def triangle_suite(rng, trials: int, n_max: int = 30) -> SuiteReport:
    rep = SuiteReport("triangle", trials)
    for t in range(trials):
        n = int(rng.integers(1, n_max + 1))
        a, b, c = (random_edge(rng, n) for _ in range(3))
        if edge_dist(a, b, n) + edge_dist(b, c, n) < edge_dist(a, c, n):
            rep.violations.append({"trial": t, "n": n, "a": sorted(a), "b": sorted(b), "c": sorted(c)})
    return rep


def reverse_triangle_suite(rng, trials: int, n_max: int = 30) -> SuiteReport:
    rep = SuiteReport("reverse-triangle", trials)
    for t in range(trials):
        n = int(rng.integers(1, n_max + 1))
        a, b, c = (random_edge(rng, n) for _ in range(3))
        if edge_dist(a, b, n) - edge_dist(b, c, n) > edge_dist(a, c, n):
            rep.violations.append({"trial": t, "n": n, "a": sorted(a), "b": sorted(b), "c": sorted(c)})
    return rep


def phi_bound_suite(rng, trials: int, n_max: int = 30) -> SuiteReport:
    """``phi(a; b) >= |b| dist(a, b) - phi(b; b)`` on random cluster sets and edges."""
    rep = SuiteReport("phi-bound", trials)
    for t in range(trials):
        n = int(rng.integers(2, n_max + 1))
        cs = random_cluster_set(rng, n)
        a, b = random_edge(rng, n), random_edge(rng, n)
        lhs = phi(a, b, cs)
        rhs = len(b) * edge_dist(a, b, n) - phi(b, b, cs)
        if lhs < rhs - TOL:
            rep.violations.append({"trial": t, "n": n, "a": sorted(a), "b": sorted(b), "lhs": lhs, "rhs": rhs})
    return rep


def descent_trial(rng, n_max: int = 50, at_argmax=best_placement):
    """One (instance, sample at its best edge, other edge) draw.

    Returns ``(loss_before, loss_after, witness)`` or ``None`` when the draw
    has no sample sitting at its best edge.
    """
    n = int(rng.integers(2, n_max + 1))
    k = int(rng.integers(2, 5))
    cs = random_cluster_set(rng, n)
    E = random_partition(rng, n, k)
    settled = [x for x in range(n) if x in E[at_argmax(x, E, cs)]]
    if not settled:
        return None
    x = settled[int(rng.integers(len(settled)))]
    src = next(i for i, e in enumerate(E) if x in e)
    dst = int(rng.choice([j for j in range(k) if j != src]))
    before = adjust_loss_by_edges(E, cs)
    after = adjust_loss_by_edges(_moved(E, x, src, dst), cs)
    return before, after, {"n": n, "k": k, "sample": x, "from": src, "to": dst}


def descent_suite(rng, trials: int, n_max: int = 50, at_argmax=best_placement) -> SuiteReport:
    """Moving a sample away from its best edge never lowers the loss."""
    rep = SuiteReport("descent", trials)
    done = 0
    while done < trials:
        out = descent_trial(rng, n_max, at_argmax)
        if out is None:
            continue
        before, after, info = out
        if before > after + TOL:
            rep.violations.append({**info, "before": before, "after": after})
        done += 1
    return rep


def run_all(seed: int, trials: int) -> list:
    """Every suite with one seeded stream each; order and results are reproducible."""
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(4)]
    return [
        triangle_suite(streams[0], trials),
        reverse_triangle_suite(streams[1], trials),
        phi_bound_suite(streams[2], trials),
        descent_suite(streams[3], trials),
    ]
