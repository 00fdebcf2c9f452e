"""Exact-arithmetic toolkit for one-dimensional piecewise affine maps."""
from .exactnum import INFINITE, PrimeBasis, m_weight, m_weight_vector, padic_weight
from .pam import AffinePiece, Interval, PamMap, evaluate, iterate_orbit, validate

__all__ = [
    "INFINITE",
    "AffinePiece",
    "Interval",
    "PamMap",
    "PrimeBasis",
    "evaluate",
    "iterate_orbit",
    "m_weight",
    "m_weight_vector",
    "padic_weight",
    "validate",
]
