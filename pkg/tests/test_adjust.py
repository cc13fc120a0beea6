import numpy as np
import pytest

from conftest import random_base
from khem.adjust import adjust, adjust_step, rescue_empty
from khem.core import HyperEdgeSet, adjust_loss, build_cluster_set
from khem.theory import local_optimum_oracle, random_cluster_set, random_partition

CONVERGED_T1 = HyperEdgeSet(({0, 1, 2, 5}, {3, 4}))


def test_step_keeps_converged_t1(t1):
    assert adjust_step(t1, CONVERGED_T1) == CONVERGED_T1


def test_step_keeps_consensus(consensus4):
    E = HyperEdgeSet(({0, 1}, {2, 3}))
    assert adjust_step(consensus4, E) == E


def test_misplaced_sample_moves_back_and_loss_drops(t1):
    E = HyperEdgeSet(({1, 2, 5}, {0, 3, 4}))
    after = adjust_step(t1, E)
    assert 0 in after[0]
    assert adjust_loss(after, t1) < adjust_loss(E, t1)


def test_t1_adjust(t1):
    res = adjust(t1, CONVERGED_T1)
    assert res.edges == CONVERGED_T1
    # b = [3, 3, 2, 2, 2, 2] -> 6 * 6 - 14
    assert res.loss_trace == [22.0, 22.0]
    assert local_optimum_oracle(t1, res.edges).ok


def test_consensus_trace(consensus4):
    res = adjust(consensus4, HyperEdgeSet(({0, 1}, {2, 3})))
    assert res.loss_trace in ([8.0], [8.0, 8.0])
    assert res.edges.edges == (frozenset({0, 1}), frozenset({2, 3}))


def test_single_edge(t1):
    res = adjust(t1, HyperEdgeSet((set(range(6)),)))
    assert len(res.loss_trace) <= 2
    assert len(set(res.loss_trace)) == 1


def test_rescue_fills_empty_edges(t1):
    assign = np.array([0, 0, 0, 0, 0, 0])
    moved = rescue_empty(t1, assign, 3)
    assert moved == 2
    assert sorted(np.bincount(assign, minlength=3).tolist()) == [1, 1, 4]


def test_monotone_and_valid_on_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(300):
        base = random_base(rng, n_max=120)
        cs = build_cluster_set(base)
        k = int(rng.integers(1, 7))
        res = adjust(cs, random_partition(rng, cs.n, k))
        trace = np.array(res.loss_trace)
        assert np.all(np.diff(trace) <= 1e-9)
        assert res.edges.covered() == cs.n
        assert res.stop_reason == "fixed-point"
        if cs.n >= k:
            assert all(len(e) > 0 for e in res.edges)
        assert trace[-1] == pytest.approx(adjust_loss(res.edges, cs))


def test_fixed_points_are_local_optima():
    rng = np.random.default_rng(23)
    for _ in range(150):
        n = int(rng.integers(2, 13))
        cs = random_cluster_set(rng, n)
        k = int(rng.integers(1, 5))
        res = adjust(cs, random_partition(rng, n, k))
        verdict = local_optimum_oracle(cs, res.edges)
        assert verdict.ok, verdict.witness


def test_max_iters_reported(caplog):
    rng = np.random.default_rng(4)
    cs = build_cluster_set(np.column_stack([rng.integers(0, 3, 200) for _ in range(5)]))
    res = adjust(cs, random_partition(rng, 200, 4), max_iters=1)
    assert res.iterations == 1
    assert res.stop_reason in ("fixed-point", "max-iters")
