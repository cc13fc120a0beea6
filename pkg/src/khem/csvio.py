"""Plain headerless CSV readers and writers for bases, labels, points and traces."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np


class MalformedInputError(ValueError):
    pass


def _rows(path, header: bool) -> list:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if header:
        rows = rows[1:]
    if not rows:
        raise MalformedInputError(f"{path}: no data rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise MalformedInputError(f"{path}: row {i + 1} has {len(r)} fields, expected {width}")
    return rows


def _int(tok: str, where: str) -> int:
    try:
        return int(tok.strip())
    except ValueError:
        raise MalformedInputError(f"{where}: {tok!r} is not an integer") from None


def read_label_matrix(path, header: bool = False) -> np.ndarray:
    rows = _rows(path, header)
    return np.array([[_int(t, f"{path}:{i + 1}") for t in r] for i, r in enumerate(rows)], dtype=np.int64)


def read_labels(path, header: bool = False) -> np.ndarray:
    m = read_label_matrix(path, header)
    if m.shape[1] != 1:
        raise MalformedInputError(f"{path}: expected one label per line, got {m.shape[1]} columns")
    return m[:, 0]


def read_points(path, header: bool = False) -> np.ndarray:
    rows = _rows(path, header)
    out = np.empty((len(rows), len(rows[0])))
    for i, r in enumerate(rows):
        for j, t in enumerate(r):
            try:
                out[i, j] = float(t)
            except ValueError:
                raise MalformedInputError(f"{path}:{i + 1}: {t!r} is not a number") from None
            if not math.isfinite(out[i, j]):
                raise MalformedInputError(f"{path}:{i + 1}: non-finite coordinate")
    return out


def write_matrix(path, m: np.ndarray) -> None:
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in m.tolist():
            w.writerow(row if m.dtype.kind in "iu" else [repr(float(v)) for v in row])


def write_trace(path, diffusion_trace, adjust_trace) -> None:
    """``stage,iteration,loss`` rows: stage ``d`` for diffusion rounds, ``a`` for adjustment."""
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["stage", "iteration", "loss"])
        for tag, trace in (("d", diffusion_trace), ("a", adjust_trace)):
            for i, loss in enumerate(trace):
                w.writerow([tag, i, repr(float(loss))])
