"""External validity indices: NMI (geometric-mean normalisation) and ARI."""

from __future__ import annotations

import numpy as np


def _contingency(a, b) -> np.ndarray:
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        raise ValueError(f"label vectors differ in length: {a.size} vs {b.size}")
    if a.size == 0:
        raise ValueError("label vectors must be non-empty")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
    np.add.at(table, (ia, ib), 1)
    return table


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(a, b) -> float:
    """Mutual information over the geometric mean of the two entropies.

    Two single-cluster partitions are identical, so their NMI is 1.
    """
    table = _contingency(a, b)
    n = int(table.sum())
    ha = _entropy(table.sum(axis=1), n)
    hb = _entropy(table.sum(axis=0), n)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    nz = table > 0
    if np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1):
        return 1.0
    pij = table[nz] / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0))[nz] / (n * n)
    mi = float((pij * np.log(pij / outer)).sum())
    return min(max(mi / np.sqrt(ha * hb), 0.0), 1.0)


def _pairs(x) -> int:
    x = np.asarray(x, dtype=object)
    return int((x * (x - 1) // 2).sum())


def ari(a, b) -> float:
    """Hubert-Arabie adjusted Rand index.

    Pair counts stay as Python integers and meet in one final division.
    """
    table = _contingency(a, b)
    n = int(table.sum())
    if n < 2:
        raise ValueError("ARI needs at least two samples")
    index = _pairs(table)
    rows = _pairs(table.sum(axis=1))
    cols = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    num = 2 * (total * index - rows * cols)
    den = total * (rows + cols) - 2 * rows * cols
    if den == 0:
        return 1.0
    return num / den
