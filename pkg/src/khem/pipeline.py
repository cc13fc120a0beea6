"""End-to-end consensus: initialization, diffusion, adjustment, labels."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .adjust import adjust
from .core import (
    DegenerateInitializationError,
    EnsembleBase,
    HyperEdgeSet,
    InvalidKError,
    build_cluster_set,
)
from .diffusion import MODES, diffuse
from .init import claim_overlaps, initialize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CEHMConfig:
    max_iters: int = 100
    seed: int = 0
    diffusion_mode: str = "rebuild"
    # "fallback": when overlap removal empties every medoid, keep shared
    # samples with the earliest medoid instead.  "raise": propagate the error.
    on_degenerate: str = "fallback"

    def __post_init__(self):
        if self.on_degenerate not in ("fallback", "raise"):
            raise ValueError("on_degenerate must be 'fallback' or 'raise'")
        if self.diffusion_mode not in MODES:
            raise ValueError(f"diffusion_mode must be one of {MODES}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class ConsensusResult:
    labels: np.ndarray
    init_loss: float
    diffusion_rounds: int
    adjust_loss_trace: list
    seed: int
    n: int = 0
    l: int = 0  # noqa: E741
    n_c: int = 0
    k: int = 0
    medoids: list = field(default_factory=list)
    diffusion_loss_trace: list = field(default_factory=list)
    displaced: int = 0
    iterations: int = 0
    stop_reason: str = ""
    sweeps: int = 0
    rescued: int = 0
    degenerate_init: bool = False
    edges: HyperEdgeSet | None = field(default=None, repr=False)

    @property
    def final_loss(self) -> float:
        return self.adjust_loss_trace[-1]

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("edges")
        d["labels"] = [int(v) for v in self.labels]
        d["medoids"] = [int(m) for m in self.medoids]
        d["final_loss"] = self.final_loss
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def cehm(base, k: int, config: CEHMConfig | None = None) -> ConsensusResult:
    """Consensus partition of ``base`` into ``k`` clusters.

    ``base`` is an :class:`EnsembleBase` or an ``n x l`` integer array.
    Labels are edge indices; an edge can only end up empty when there are
    fewer samples than ``k``.  Inputs whose medoids overlap so much that
    nothing survives overlap removal take the fallback in
    :class:`CEHMConfig` and are flagged with ``degenerate_init``.
    """
    config = config or CEHMConfig()
    if not isinstance(base, EnsembleBase):
        base = EnsembleBase(np.asarray(base))
    cs = build_cluster_set(base)
    if not 1 <= k <= cs.n_c:
        raise InvalidKError(f"k must satisfy 1 ≤ k ≤ n_c (got k={k}, n_c={cs.n_c})")

    Ei, medoids, init_loss = initialize(cs, k, config.seed)
    degenerate = False
    try:
        dif = diffuse(cs, Ei, config.diffusion_mode)
    except DegenerateInitializationError:
        if config.on_degenerate == "raise":
            raise
        logger.warning("overlap removal emptied every medoid; shared samples go to the earliest medoid")
        degenerate = True
        dif = diffuse(cs, claim_overlaps([cs.clusters[m] for m in medoids]), config.diffusion_mode)
    adj = adjust(cs, dif.edges, config.max_iters)

    return ConsensusResult(
        labels=adj.edges.assignment(cs.n),
        init_loss=init_loss,
        diffusion_rounds=dif.rounds,
        adjust_loss_trace=adj.loss_trace,
        seed=config.seed,
        n=cs.n,
        l=cs.l,
        n_c=cs.n_c,
        k=k,
        medoids=list(medoids),
        diffusion_loss_trace=dif.loss_trace,
        displaced=dif.displaced,
        iterations=adj.iterations,
        stop_reason=adj.stop_reason,
        sweeps=adj.sweeps,
        rescued=adj.rescued,
        degenerate_init=degenerate,
        edges=adj.edges,
    )
