import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khem.core import (
    EnsembleBase,
    HyperEdgeSet,
    InvalidInputError,
    adjust_loss,
    adjust_loss_by_edges,
    belonging,
    belonging_numerators,
    best_edge,
    best_placement,
    build_cluster_set,
    confidence,
    placement_belonging,
)


@st.composite
def instances(draw, n_max=15, k_max=4):
    n = draw(st.integers(1, n_max))
    l = draw(st.integers(1, 5))  # noqa: E741
    cols = [draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)) for _ in range(l)]
    cs = build_cluster_set(np.array(cols).T)
    k = draw(st.integers(1, k_max))
    assign = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    return cs, HyperEdgeSet.from_assignment(assign, k)


class TestBuildClusterSet:
    def test_t1_clusters_and_membership(self, t1):
        assert t1.clusters == (
            frozenset({0, 1, 2}),
            frozenset({3, 4, 5}),
            frozenset({0, 1, 5}),
            frozenset({2, 3, 4}),
        )
        assert t1.membership[0].tolist() == [0, 2]
        assert (t1.n, t1.l, t1.n_c) == (6, 2, 4)

    def test_single_cluster(self):
        cs = build_cluster_set(np.full((5, 1), 7))
        assert cs.n_c == 1 and cs.clusters[0] == frozenset(range(5))

    def test_identical_copies_repeat_clusters(self):
        part = [0, 0, 1, 2, 2, 1]
        cs = build_cluster_set(np.array([part] * 3).T)
        assert cs.n_c == 9
        assert cs.clusters[:3] == cs.clusters[3:6] == cs.clusters[6:]

    def test_noncontiguous_labels(self):
        cs = build_cluster_set(np.array([[10], [3], [10]]))
        assert cs.clusters == (frozenset({1}), frozenset({0, 2}))

    @pytest.mark.parametrize(
        "bad",
        [np.zeros((0, 2)), np.array([[1, -1], [1, 1]]), np.array([[1.0, np.nan]]), np.array([[0.5, 1.0]])],
    )
    def test_rejects(self, bad):
        with pytest.raises(InvalidInputError):
            build_cluster_set(bad)

    @given(st.data())
    @settings(max_examples=60)
    def test_roundtrip_columns(self, data):
        n = data.draw(st.integers(1, 12))
        l = data.draw(st.integers(1, 4))  # noqa: E741
        labels = np.array([data.draw(st.lists(st.integers(0, 4), min_size=n, max_size=n)) for _ in range(l)]).T
        cs = build_cluster_set(labels)
        assert all(len(m) == l for m in cs.membership)
        for j in range(l):
            rebuilt = np.empty(n, dtype=int)
            for c in np.flatnonzero(cs.column == j):
                rebuilt[list(cs.clusters[c])] = c
            # same partition up to relabeling
            pairs = set(zip(rebuilt.tolist(), labels[:, j].tolist()))
            assert len(pairs) == len(set(rebuilt.tolist())) == len(set(labels[:, j].tolist()))


class TestBelonging:
    def test_examples(self, t1):
        assert belonging(0, {0, 1, 2}, t1) == 2.5
        assert belonging(5, {0, 1, 2}, t1) == 1.0
        assert all(belonging(x, set(), t1) == 0 for x in range(6))

    def test_best_edge(self, t1):
        assert best_edge(5, [{0, 1, 2}, {3, 4, 5}], t1) == 1
        # b = 1.0 vs 1.0: lowest index wins
        assert best_edge(2, [{0, 1}, {3, 4}], t1) == 0
        assert best_edge(4, [{0, 1}], t1) == 0

    def test_confidence(self, t1):
        assert confidence(5, [{0, 1, 2}, {3, 4, 5}], t1) == 1.0
        assert confidence(2, [{0, 1}, {3, 4}], t1) == 0.0
        # every cluster of sample 0 lies inside {0,1,2,5}; the other edge is disjoint from them
        assert confidence(0, [{0, 1, 2, 5}, {3, 4}], t1) == belonging(0, {0, 1, 2, 5}, t1)
        assert confidence(0, [{0, 1, 2}], t1) == 2.5

    def test_placement_counts_sample_as_member(self, t1):
        assert placement_belonging(5, {0, 1, 2}, t1) == belonging(5, {0, 1, 2, 5}, t1) == 2.0
        # 5 sits in {0,1,2,5}; joining {3,4} is worth exactly as much, so it stays
        assert best_placement(5, [{0, 1, 2, 5}, {3, 4}], t1) == 0

    @given(instances(), st.data())
    @settings(max_examples=100)
    def test_additive_over_disjoint_edges(self, inst, data):
        cs, E = inst
        x = data.draw(st.integers(0, cs.n - 1))
        e1, e2 = E[0], E[min(1, E.k - 1)]
        if e1 is not e2:
            assert belonging(x, e1 | e2, cs) == pytest.approx(belonging(x, e1, cs) + belonging(x, e2, cs))

    @given(instances())
    @settings(max_examples=100)
    def test_normalisation_never_changes_argmax(self, inst):
        cs, E = inst
        for x in range(cs.n):
            raw = [sum(len(cs.clusters[c] & e) for c in cs.membership[x]) for e in E]
            assert best_edge(x, E, cs) == raw.index(max(raw))

    @given(instances())
    @settings(max_examples=100)
    def test_bounds(self, inst):
        cs, E = inst
        for x in range(cs.n):
            assert all(0 <= belonging(x, e, cs) <= cs.n for e in E)
            assert confidence(x, E, cs) >= 0

    @given(instances())
    @settings(max_examples=100)
    def test_vectorised_matches_reference(self, inst):
        cs, E = inst
        B = belonging_numerators(cs, E.assignment(cs.n), E.k)
        for x in range(cs.n):
            for i, e in enumerate(E):
                assert B[x, i] / cs.l == belonging(x, e, cs)


class TestAdjustLoss:
    def test_t1(self, t1):
        E = HyperEdgeSet(({0, 1, 2}, {3, 4, 5}))
        assert [belonging(x, E[x // 3], t1) for x in range(6)] == [2.5, 2.5, 2.0, 2.5, 2.5, 2.0]
        assert adjust_loss(E, t1) == 22.0

    def test_consensus(self, consensus4):
        assert adjust_loss([{0, 1}, {2, 3}], consensus4) == 8.0

    def test_full_agreement(self):
        cs = build_cluster_set(np.zeros((5, 1), dtype=int))
        assert adjust_loss([set(range(5))], cs) == 0.0

    def test_needs_cover(self, t1):
        with pytest.raises(InvalidInputError):
            adjust_loss([{0, 1}, {3, 4}], t1)

    @given(instances())
    @settings(max_examples=150)
    def test_two_forms_agree(self, inst):
        cs, E = inst
        loss = adjust_loss(E, cs)
        assert loss >= 0
        assert loss == pytest.approx(adjust_loss_by_edges(E, cs), abs=1e-9)


def test_hyperedgeset_rejects_overlap():
    with pytest.raises(InvalidInputError):
        HyperEdgeSet(({0, 1}, {1, 2}))


def test_ensemble_base_validation():
    assert EnsembleBase(np.array([1, 2, 3])).labels.shape == (3, 1)
    with pytest.raises(InvalidInputError):
        EnsembleBase(np.array([["a", "b"]]))
