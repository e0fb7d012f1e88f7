"""Builders for the supported model families."""

from .gaussian import build_concentration, build_sem, cond_minor, sym_matrix, sym_names, sym_table
from .lyapunov import build_lyapunov, kron_system, recovery_system
from .specs import (
    DEFAULT_BOX,
    GraphSpec,
    LyapunovSpec,
    MalformedSpec,
    ModelSpec,
    StagedTreeSpec,
    parse_constraints,
)
from .staged import MASS, build_staged_tree

__all__ = [
    "DEFAULT_BOX",
    "GraphSpec",
    "LyapunovSpec",
    "MASS",
    "MalformedSpec",
    "ModelSpec",
    "StagedTreeSpec",
    "build_concentration",
    "build_lyapunov",
    "build_sem",
    "build_staged_tree",
    "cond_minor",
    "kron_system",
    "parse_constraints",
    "recovery_system",
    "sym_matrix",
    "sym_names",
    "sym_table",
]
