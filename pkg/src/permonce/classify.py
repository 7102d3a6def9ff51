"""
Forbidden sets, symmetry canonicalization and the structural parse of a
pattern inside each canonical family.

Every T-avoiding pattern in a canonical family has a rigid shape; the
parsers below read that shape off, and ``Decomposition.reassemble`` builds
the pattern back so the parse can be checked by round trip.

>>> T, tau, g = canonicalize(forbidden_set("213,312"), (2, 1, 3))
>>> [fmt(t) for t in T], fmt(tau), g.ops
(['132', '231'], '231', ('c',))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from .perm import Perm, PermError, avoids, complement, find_occurrence, fmt, inverse, parse, reverse

__all__ = [
    "S3", "Family", "ForbiddenSet", "SymmetryMap", "GROUP", "Decomposition",
    "NotInClass", "Unreducible", "forbidden_set", "is_member", "family_of",
    "canonicalize", "decompose", "layers", "increasing_runs", "side_word",
    "violation",
]

S3: tuple[Perm, ...] = tuple(itertools.permutations((1, 2, 3)))

# a sorted tuple of distinct patterns of length 3
ForbiddenSet = tuple[Perm, ...]


class NotInClass(ValueError):
    """The pattern contains a member of the forbidden set (or has the wrong shape)."""

    def __init__(self, message: str, witness: tuple[int, ...] | None = None,
                 pattern: Perm | None = None):
        super().__init__(message)
        self.witness = witness
        self.pattern = pattern


class Unreducible(ValueError):
    pass


def forbidden_set(spec: str | Iterable[Sequence[int]]) -> ForbiddenSet:
    """
    Build a forbidden set from ``"123,132"`` or an iterable of patterns.

    >>> forbidden_set("132, 123, 132")
    ((1, 2, 3), (1, 3, 2))
    """
    if isinstance(spec, str):
        items = [parse(s) for s in spec.replace(" ", "").split(",") if s]
    else:
        items = [tuple(t) for t in spec]
    T = tuple(sorted(set(items)))
    if not 1 <= len(T) <= 6:
        raise PermError(f"a forbidden set needs 1 to 6 patterns, got {len(T)}")
    for t in T:
        if len(t) != 3 or t not in S3:
            raise PermError(f"forbidden patterns must have length 3: {fmt(t)}")
    return T


def _fs(*codes: str) -> ForbiddenSet:
    return tuple(sorted(parse(c) for c in codes))


class Family(Enum):
    PAIR_123_132 = _fs("123", "132")
    PAIR_132_321 = _fs("132", "321")
    PAIR_132_213 = _fs("132", "213")
    PAIR_132_231 = _fs("132", "231")
    TRIPLE_123_132_213 = _fs("123", "132", "213")
    TRIPLE_123_132_231 = _fs("123", "132", "231")
    TRIPLE_123_231_312 = _fs("123", "231", "312")
    TRIPLE_132_213_231 = _fs("132", "213", "231")
    QUAD_123_132_213_231 = _fs("123", "132", "213", "231")
    QUAD_123_132_231_312 = _fs("123", "132", "231", "312")
    QUAD_132_213_231_312 = _fs("132", "213", "231", "312")
    QUINT_NO_123 = _fs("132", "213", "231", "312", "321")
    FULL = S3

    @property
    def T(self) -> ForbiddenSet:
        return self.value

    @property
    def size(self) -> int:
        return len(self.value)

    @property
    def label(self) -> str:
        return "{" + ",".join(fmt(t) for t in self.value) + "}"


_BY_SET = {f.value: f for f in Family}

PAIRS = tuple(f for f in Family if f.size == 2)
TRIPLES = tuple(f for f in Family if f.size == 3)
QUADS_AND_QUINTS = tuple(f for f in Family if f.size >= 4)


_OPS: dict[str, Callable[[Perm], Perm]] = {"r": reverse, "c": complement, "i": inverse}
_NAMES = {"r": "reverse", "c": "complement", "i": "inverse"}


@dataclass(frozen=True)
class SymmetryMap:
    """A word in reverse/complement/inverse, applied left to right."""

    ops: tuple[str, ...] = ()

    def __call__(self, p: Perm) -> Perm:
        for o in self.ops:
            p = _OPS[o](p)
        return p

    def apply_set(self, T: Iterable[Perm]) -> ForbiddenSet:
        return tuple(sorted(self(t) for t in T))

    def inverse(self) -> SymmetryMap:
        # every generator is an involution
        return SymmetryMap(tuple(reversed(self.ops)))

    def __str__(self) -> str:
        return "identity" if not self.ops else " then ".join(_NAMES[o] for o in self.ops)


# the dihedral group of order 8 generated by the three involutions
GROUP: tuple[SymmetryMap, ...] = tuple(SymmetryMap(w) for w in [
    (), ("c",), ("i",), ("r",), ("c", "i"), ("r", "c"), ("r", "i"), ("r", "c", "i"),
])


def family_of(T: Iterable[Perm]) -> Family | None:
    return _BY_SET.get(tuple(sorted(T)))


def canonicalize(T: Iterable[Perm], tau: Perm) -> tuple[ForbiddenSet, Perm, SymmetryMap]:
    """
    Map ``(T, tau)`` by one group element onto a canonical family.

    The first element of ``GROUP`` that works is used, so the identity wins
    whenever ``T`` is already canonical.
    """
    T = tuple(sorted(T))
    for g in GROUP:
        image = g.apply_set(T)
        if image in _BY_SET:
            return image, g(tuple(tau)), g
    raise Unreducible(f"no symmetry maps {{{','.join(fmt(t) for t in T)}}} to a known family")


def violation(tau: Perm, T: Iterable[Perm]) -> tuple[Perm, tuple[int, ...]] | None:
    """The first member of ``T`` occurring in ``tau`` and the occurrence found."""
    for t in sorted(T):
        occ = find_occurrence(tau, t)
        if occ is not None:
            return t, occ
    return None


def is_member(tau: Perm, T: Iterable[Perm]) -> bool:
    return avoids(tau, T)


def _not_in_class(tau: Perm, family: Family, why: str = "") -> NotInClass:
    v = violation(tau, family.T)
    if v is not None:
        t, occ = v
        return NotInClass(f"{fmt(tau)} contains {fmt(t)} at {occ}", occ, t)
    return NotInClass(f"{fmt(tau)} does not have the {family.label} shape: {why}")


# shape readers -------------------------------------------------------------

def layers(tau: Perm) -> list[int]:
    """
    Block sizes of a {123,132}-avoider.

    Such a permutation is a sequence of blocks on consecutive values with
    decreasing value ranges; a block of size s over ``top-s+1..top`` reads
    ``top-1, top-2, ..., top-s+1, top``.

    >>> layers((4, 3, 1, 2))
    [1, 1, 2]
    """
    out = []
    i, top = 0, len(tau)
    while i < len(tau):
        j = tau.index(top, i) if top in tau[i:] else -1
        if j < 0:
            raise ValueError("not layered")
        s = j - i + 1
        if tuple(tau[i:j]) != tuple(range(top - 1, top - s, -1)):
            raise ValueError("not layered")
        out.append(s)
        i, top = j + 1, top - s
    return out


def increasing_runs(tau: Perm) -> list[int]:
    """
    Run lengths of a {132,213}-avoider: increasing runs of consecutive
    values whose ranges decrease from left to right.

    >>> increasing_runs((3, 4, 1, 2))
    [2, 2]
    """
    out = []
    i, top = 0, len(tau)
    while i < len(tau):
        s = top - tau[i] + 1
        if s < 1 or tuple(tau[i:i + s]) != tuple(range(tau[i], top + 1)):
            raise ValueError("not a run sequence")
        out.append(s)
        i, top = i + s, top - s
    return out


def side_word(tau: Perm) -> str:
    """
    For a {132,231}-avoider (decreasing then increasing), the side of the
    minimum on which each of ``k, k-1, ..., 2`` sits, as a word over L/R.

    >>> side_word((4, 2, 1, 3))
    'LRL'
    """
    k = len(tau)
    if k == 0:
        return ""
    p1 = tau.index(1)
    left, right = tau[:p1], tau[p1 + 1:]
    if any(a < b for a, b in zip(left, left[1:])) or any(a > b for a, b in zip(right, right[1:])):
        raise ValueError("not a valley")
    pos = {v: i for i, v in enumerate(tau)}
    return "".join("L" if pos[v] < p1 else "R" for v in range(k, 1, -1))


def _dec(k: int) -> Perm:
    return tuple(range(k, 0, -1))


def _inc(k: int) -> Perm:
    return tuple(range(1, k + 1))


# decompositions ------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """One structural parse step of ``tau`` within ``family``."""

    family: Family
    tau: Perm
    shape: str
    params: dict = field(default_factory=dict, compare=False)
    remainder: Perm | None = None

    def reassemble(self) -> Perm:
        return _REASSEMBLE[self.family](self)

    def to_dict(self) -> dict:
        return {
            "family": self.family.name,
            "tau": fmt(self.tau),
            "shape": self.shape,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
            "remainder": None if self.remainder is None else (fmt(self.remainder) or "()"),
        }


def _dec_pair_123_132(tau: Perm) -> Decomposition:
    k = len(tau)
    blocks = layers(tau)
    fam = Family.PAIR_123_132
    if k == 1:
        return Decomposition(fam, tau, "base", {"blocks": tuple(blocks)})
    if tau[0] != k:
        r = tau.index(k) + 1
        return Decomposition(fam, tau, "max-after-prefix", {"r": r, "blocks": tuple(blocks)},
                             tau[r:])
    m = 1
    while m < k and tau[m] == k - m:
        m += 1
    return Decomposition(fam, tau, "max-first", {"m": m, "blocks": tuple(blocks)}, tau[m:])


def _re_pair_123_132(d: Decomposition) -> Perm:
    k = len(d.tau)
    if d.shape == "base":
        return (1,)
    rest = d.remainder
    if d.shape == "max-after-prefix":
        r = d.params["r"]
        k = r + len(rest)
        return tuple(range(k - 1, k - r, -1)) + (k,) + rest
    m = d.params["m"]
    k = m + len(rest)
    return tuple(range(k, k - m, -1)) + rest


def _dec_pair_132_321(tau: Perm) -> Decomposition:
    k = len(tau)
    fam = Family.PAIR_132_321
    if tau == _inc(k):
        return Decomposition(fam, tau, "identity", {"k": k})
    # tau = (d+1, ..., m-1, 1, ..., d, m, ..., k)
    pos = tau.index(1)
    if pos == 0:
        raise ValueError("not a rotated prefix")
    m = tau[pos - 1] + 1
    d = m - 1 - pos
    expect = tuple(range(d + 1, m)) + tuple(range(1, d + 1)) + tuple(range(m, k + 1))
    if d < 1 or tau != expect:
        raise ValueError("not a rotated prefix")
    shape = "rotation" if m == k + 1 else "rotated-prefix"
    return Decomposition(fam, tau, shape, {"d": d, "m": m, "k": k})


def _re_pair_132_321(d: Decomposition) -> Perm:
    k = d.params["k"]
    if d.shape == "identity":
        return _inc(k)
    dd, m = d.params["d"], d.params["m"]
    return tuple(range(dd + 1, m)) + tuple(range(1, dd + 1)) + tuple(range(m, k + 1))


def _dec_pair_132_213(tau: Perm) -> Decomposition:
    k = len(tau)
    runs = increasing_runs(tau)
    bounds = [k + 1]
    for s in runs:
        bounds.append(bounds[-1] - s)
    fam = Family.PAIR_132_213
    if len(runs) == 1:
        return Decomposition(fam, tau, "identity", {"boundaries": tuple(bounds)})
    return Decomposition(fam, tau, "leading-run", {"boundaries": tuple(bounds), "run": runs[0]},
                         tau[runs[0]:])


def _re_pair_132_213(d: Decomposition) -> Perm:
    b = d.params["boundaries"]
    out: tuple[int, ...] = ()
    for hi, lo in zip(b, b[1:]):
        out += tuple(range(lo, hi))
    return out


def _dec_pair_132_231(tau: Perm) -> Decomposition:
    k = len(tau)
    word = side_word(tau)
    fam = Family.PAIR_132_231
    if k <= 1 or tau in (_inc(k), _dec(k)):
        return Decomposition(fam, tau, "monotone", {"k": k, "word": word})
    if tau[0] == k:
        r = 0
        while tau[r] == k - r:
            r += 1
        if tau[-1] != k - r:
            raise ValueError("descending prefix not closed by k-r")
        return Decomposition(fam, tau, "descending-prefix", {"r": r, "word": word},
                             tau[r:-1])
    if tau[-1] != k:
        raise ValueError("maximum is not at an end")
    r = 0
    while tau[k - 1 - r] == k - r:
        r += 1
    if tau[0] != k - r:
        raise ValueError("ascending suffix not opened by k-r")
    return Decomposition(fam, tau, "ascending-suffix", {"r": r, "word": word}, tau[1:k - r])


def _re_pair_132_231(d: Decomposition) -> Perm:
    if d.shape == "monotone":
        k, word = d.params["k"], d.params["word"]
        if k <= 1:
            return _inc(k)
        return _dec(k) if word[0] == "L" else _inc(k)
    r, rest = d.params["r"], d.remainder
    k = r + 1 + len(rest)
    if d.shape == "descending-prefix":
        return tuple(range(k, k - r, -1)) + rest + (k - r,)
    return (k - r,) + rest + tuple(range(k - r + 1, k + 1))


def _dec_triple_123_132_213(tau: Perm) -> Decomposition:
    k = len(tau)
    blocks = layers(tau)
    if any(s > 2 for s in blocks):
        raise ValueError("block larger than 2")
    fam = Family.TRIPLE_123_132_213
    if k <= 2:
        return Decomposition(fam, tau, "base", {"blocks": tuple(blocks)})
    if tau[0] == k - 1:
        return Decomposition(fam, tau, "pair-first", {"blocks": tuple(blocks)}, tau[2:])
    return Decomposition(fam, tau, "max-first", {"blocks": tuple(blocks)}, tau[1:])


def _re_triple_123_132_213(d: Decomposition) -> Perm:
    if d.shape == "base":
        return (1,) if d.params["blocks"] == (1,) else _reassemble_layers(d.params["blocks"])
    rest = d.remainder
    if d.shape == "pair-first":
        k = len(rest) + 2
        return (k - 1, k) + rest
    return (len(rest) + 1,) + rest


def _reassemble_layers(blocks: Sequence[int]) -> Perm:
    top = sum(blocks)
    out: tuple[int, ...] = ()
    for s in blocks:
        out += tuple(range(top - 1, top - s, -1)) + (top,)
        top -= s
    return out


def _dec_triple_123_132_231(tau: Perm) -> Decomposition:
    # tau = (k, ..., k-r+1, k-r-1, ..., 1, k-r), 0 <= r <= k-1
    k = len(tau)
    fam = Family.TRIPLE_123_132_231
    for r in range(k - 1, -1, -1):
        if tau == tuple(range(k, k - r, -1)) + tuple(range(k - r - 1, 0, -1)) + (k - r,):
            shape = "decreasing" if r == k - 1 else ("max-last" if r == 0 else "general")
            return Decomposition(fam, tau, shape, {"r": r, "k": k})
    raise ValueError("not of the one-parameter shape")


def _re_triple_123_132_231(d: Decomposition) -> Perm:
    k, r = d.params["k"], d.params["r"]
    return tuple(range(k, k - r, -1)) + tuple(range(k - r - 1, 0, -1)) + (k - r,)


def _dec_triple_123_231_312(tau: Perm) -> Decomposition:
    # tau = (r, ..., 1, k, ..., r+1), 1 <= r <= k
    k = len(tau)
    fam = Family.TRIPLE_123_231_312
    for r in range(k, 0, -1):
        if tau == tuple(range(r, 0, -1)) + tuple(range(k, r, -1)):
            return Decomposition(fam, tau, "decreasing" if r == k else "general", {"r": r, "k": k})
    raise ValueError("not of the one-parameter shape")


def _re_triple_123_231_312(d: Decomposition) -> Perm:
    k, r = d.params["k"], d.params["r"]
    return tuple(range(r, 0, -1)) + tuple(range(k, r, -1))


def _dec_triple_132_213_231(tau: Perm) -> Decomposition:
    # tau = (k, ..., r+1, 1, ..., r), 1 <= r <= k
    k = len(tau)
    fam = Family.TRIPLE_132_213_231
    for r in range(k, 0, -1):
        if tau == tuple(range(k, r, -1)) + tuple(range(1, r + 1)):
            shape = "identity" if r == k and k >= 2 else "general"
            return Decomposition(fam, tau, shape, {"r": r, "k": k})
    raise ValueError("not of the one-parameter shape")


def _re_triple_132_213_231(d: Decomposition) -> Perm:
    k, r = d.params["k"], d.params["r"]
    return tuple(range(k, r, -1)) + tuple(range(1, r + 1))


def _dec_small(family: Family) -> Callable[[Perm], Decomposition]:
    def parse_shape(tau: Perm) -> Decomposition:
        k = len(tau)
        shapes = {
            "decreasing": _dec(k),
            "increasing": _inc(k),
            "dec-then-12": _dec(k)[:-2] + (1, 2) if k >= 2 else None,
            "dec-then-max": tuple(range(k - 1, 0, -1)) + (k,) if k >= 1 else None,
        }
        for name, shape in shapes.items():
            if tau == shape:
                return Decomposition(family, tau, name, {"k": k})
        raise ValueError("no quartet/quintet shape")
    return parse_shape


def _re_small(d: Decomposition) -> Perm:
    k = d.params["k"]
    return {
        "decreasing": lambda: _dec(k),
        "increasing": lambda: _inc(k),
        "dec-then-12": lambda: _dec(k)[:-2] + (1, 2),
        "dec-then-max": lambda: tuple(range(k - 1, 0, -1)) + (k,),
    }[d.shape]()


_DECOMPOSE: dict[Family, Callable[[Perm], Decomposition]] = {
    Family.PAIR_123_132: _dec_pair_123_132,
    Family.PAIR_132_321: _dec_pair_132_321,
    Family.PAIR_132_213: _dec_pair_132_213,
    Family.PAIR_132_231: _dec_pair_132_231,
    Family.TRIPLE_123_132_213: _dec_triple_123_132_213,
    Family.TRIPLE_123_132_231: _dec_triple_123_132_231,
    Family.TRIPLE_123_231_312: _dec_triple_123_231_312,
    Family.TRIPLE_132_213_231: _dec_triple_132_213_231,
}
_REASSEMBLE: dict[Family, Callable[[Decomposition], Perm]] = {
    Family.PAIR_123_132: _re_pair_123_132,
    Family.PAIR_132_321: _re_pair_132_321,
    Family.PAIR_132_213: _re_pair_132_213,
    Family.PAIR_132_231: _re_pair_132_231,
    Family.TRIPLE_123_132_213: _re_triple_123_132_213,
    Family.TRIPLE_123_132_231: _re_triple_123_132_231,
    Family.TRIPLE_123_231_312: _re_triple_123_231_312,
    Family.TRIPLE_132_213_231: _re_triple_132_213_231,
}
for _f in QUADS_AND_QUINTS:
    _DECOMPOSE[_f] = _dec_small(_f)
    _REASSEMBLE[_f] = _re_small


def decompose(tau: Perm, family: Family) -> Decomposition:
    """
    Parse ``tau`` according to the structure of ``family``.

    >>> d = decompose((3, 4, 1, 2), Family.PAIR_132_213)
    >>> d.params["boundaries"], d.remainder
    ((5, 3, 1), (1, 2))
    """
    tau = tuple(tau)
    if not tau:
        raise NotInClass("the empty pattern has no decomposition")
    if not is_member(tau, family.T):
        raise _not_in_class(tau, family)
    try:
        return _DECOMPOSE[family](tau)
    except ValueError as e:
        raise _not_in_class(tau, family, str(e)) from None
