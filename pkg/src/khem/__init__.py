"""Clustering ensemble by k-hyperedge medoids discovery."""

from .core import (
    ClusterSet,
    DegenerateInitializationError,
    EnsembleBase,
    HyperEdgeSet,
    InvalidInputError,
    InvalidKError,
    KHEMError,
    adjust_loss,
    belonging,
    best_edge,
    best_placement,
    build_cluster_set,
    confidence,
)
from .metrics import ari, nmi
from .pipeline import CEHMConfig, ConsensusResult, cehm

__all__ = [
    "ClusterSet",
    "CEHMConfig",
    "ConsensusResult",
    "DegenerateInitializationError",
    "EnsembleBase",
    "HyperEdgeSet",
    "InvalidInputError",
    "InvalidKError",
    "KHEMError",
    "adjust_loss",
    "ari",
    "belonging",
    "best_edge",
    "best_placement",
    "build_cluster_set",
    "cehm",
    "confidence",
    "nmi",
]
