"""Groebner bases, normal forms, saturation and elimination."""

from .engine import Deadline, DeadlineExceeded
from .ideal import (
    GroebnerBasis,
    IdealGens,
    buchberger,
    eliminate,
    ideal_equal,
    ideal_quotient,
    intersect,
    is_homogeneous,
    normal_form,
    saturate,
    saturate_monoid,
)
from .kernel import BACKEND
from .order import MonomialCodec, TermOrder

__all__ = [
    "BACKEND",
    "Deadline",
    "DeadlineExceeded",
    "GroebnerBasis",
    "IdealGens",
    "MonomialCodec",
    "TermOrder",
    "buchberger",
    "eliminate",
    "ideal_equal",
    "ideal_quotient",
    "intersect",
    "is_homogeneous",
    "normal_form",
    "saturate",
    "saturate_monoid",
]
