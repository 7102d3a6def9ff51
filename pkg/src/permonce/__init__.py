"""Permutations avoiding 3-letter patterns and containing a pattern exactly once."""

from .classify import Family, canonicalize, decompose, forbidden_set, is_member
from .formulas import GfResult, count_quad_quint, dispatch
from .oracle import avoidance_series, count_sequence, generate_avoiders
from .perm import parse, fmt
from .series import Polynomial, RationalGF, TruncatedSeries

__all__ = [
    "Family", "canonicalize", "decompose", "forbidden_set", "is_member",
    "GfResult", "count_quad_quint", "dispatch",
    "avoidance_series", "count_sequence", "generate_avoiders",
    "parse", "fmt", "Polynomial", "RationalGF", "TruncatedSeries",
]
