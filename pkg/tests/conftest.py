import numpy as np
import pytest

from khem.core import build_cluster_set

# Two base clusterings of six samples:
#   column 0 -> {0,1,2}, {3,4,5};  column 1 -> {0,1,5}, {2,3,4}
T1_LABELS = [[1, 1], [1, 1], [1, 2], [2, 2], [2, 2], [2, 1]]


@pytest.fixture
def t1():
    return build_cluster_set(np.array(T1_LABELS))


@pytest.fixture
def consensus4():
    # n=4, two identical clusterings {0,1}, {2,3}
    return build_cluster_set(np.array([[0, 0], [0, 0], [1, 1], [1, 1]]))


def random_base(rng, n_max=500, l_max=10, labels_max=8, n_min=2):
    n = int(rng.integers(n_min, n_max + 1))
    l = int(rng.integers(1, l_max + 1))  # noqa: E741
    return np.column_stack([rng.integers(0, int(rng.integers(1, labels_max + 1)), size=n) for _ in range(l)])
