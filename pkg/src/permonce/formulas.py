"""
Generating functions ``sum_n |S_n(T; tau)| x^n`` for forbidden sets of
patterns of length 3.

Every pattern in a canonical family has a rigid shape (see ``classify``);
the functions here walk that shape and multiply one factor per step. A
result is a closed ``RationalGF`` unless some step had to fall back on an
oracle-computed avoidance series, in which case it is a ``TruncatedSeries``.

>>> str(dispatch(forbidden_set("132,321"), (1, 2, 3)).value)
'x^3 + 4x^4 + 2x^5'
>>> str(dispatch(forbidden_set("123,132"), (2, 1, 3), cofactor="closed").value)
'x^3/(1-x-x^2)^2'
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from . import oracle
from .classify import (
    Family, ForbiddenSet, QUADS_AND_QUINTS, TRIPLES, canonicalize, decompose, family_of,
    increasing_runs, violation,
)
from .classify import forbidden_set  # noqa: F401  (used in the examples above)
from .perm import DEFAULT_GUARD, Perm, PermError, avoids, fmt, standardize
from .series import DEFAULT_ORDER, ONE, Polynomial, RationalGF, TruncatedSeries

__all__ = [
    "Step", "GfResult", "Unsupported", "UnknownTriple",
    "gf_pair_123_132", "gf_pair_132_321", "gf_pair_132_213", "gf_pair_132_231",
    "gf_triple", "gf_quad", "count_quad_quint", "dispatch", "COFACTOR_MODES",
]

Value = Union[RationalGF, TruncatedSeries]

COFACTOR_MODES = ("oracle", "closed")


class Unsupported(ValueError):
    pass


class UnknownTriple(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    rule: str
    paper_locator: str
    factor: str
    remainder: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "paper_locator": self.paper_locator,
                "factor": self.factor, "remainder": self.remainder}


@dataclass(frozen=True)
class GfResult:
    """A generating function together with the steps that produced it."""

    value: Value
    derivation: tuple[Step, ...] = ()
    order: int = DEFAULT_ORDER

    @property
    def closed(self) -> bool:
        return isinstance(self.value, RationalGF)

    def series(self, order: int | None = None) -> TruncatedSeries:
        order = self.order if order is None else order
        if isinstance(self.value, RationalGF):
            return self.value.expand(order)
        return self.value.truncate(order)

    def coefficients(self, n_max: int | None = None) -> tuple[int, ...]:
        return self.series(n_max).coeffs

    def to_dict(self) -> dict:
        if isinstance(self.value, RationalGF):
            value = {"kind": "rational", "num": list(self.value.num.coeffs),
                     "den": list(self.value.den.coeffs), "text": str(self.value)}
        else:
            value = {"kind": "series", "coeffs": list(self.value.coeffs)}
        return {"value": value, "order": self.order,
                "derivation": [s.to_dict() for s in self.derivation]}

    @classmethod
    def from_dict(cls, d: dict) -> GfResult:
        v = d["value"]
        if v["kind"] == "rational":
            value: Value = RationalGF(Polynomial(tuple(v["num"])), Polynomial(tuple(v["den"])))
        else:
            value = TruncatedSeries(tuple(v["coeffs"]))
        steps = tuple(Step(**s) for s in d["derivation"])
        return cls(value, steps, d["order"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> GfResult:
        return cls.from_dict(json.loads(text))


# arithmetic on mixed closed/truncated values --------------------------------

def _mul(a: Value, b: Value) -> Value:
    if isinstance(a, TruncatedSeries):
        return a * b
    if isinstance(b, TruncatedSeries):
        return b * a
    return a * b


def _add(a: Value, b: Value) -> Value:
    if isinstance(a, RationalGF) and isinstance(b, RationalGF):
        return a + b
    n = min(x.order for x in (a, b) if isinstance(x, TruncatedSeries))
    sa = a.expand(n) if isinstance(a, RationalGF) else a
    sb = b.expand(n) if isinstance(b, RationalGF) else b
    return sa + sb


def _x(e: int) -> RationalGF:
    return RationalGF(Polynomial.monomial(1, e))


def _frac(num: Polynomial, den: Polynomial = ONE) -> RationalGF:
    return RationalGF(num, den).reduced()


def _one_minus_x(power: int) -> Polynomial:
    return Polynomial((1, -1)) ** power


def _d(r: int) -> Polynomial:
    # 1 - x - x^2 - ... - x^(r-1); the GF of compositions into parts < r is 1/_d(r)
    return Polynomial((1,) + (-1,) * (r - 1))


def _s(v: Value) -> str:
    return str(v)


def _rem(p: Perm) -> str:
    return fmt(p) if p else "()"


_ALL_LAYERS = _frac(Polynomial((1, -1)), Polynomial((1, -2)))  # (1-x)/(1-2x), i.e. 2^(n-1)


# {123,132} ------------------------------------------------------------------

def _max_descent_block(r: int) -> Perm:
    # (r-1, ..., 1, r): the single block of size r
    return tuple(range(r - 1, 0, -1)) + (r,)


def _layer_tail(r: int | None, order: int, cofactor: str, guard: int,
                steps: list[Step]) -> Value:
    # GF of {123,132}-avoiders all of whose blocks are shorter than r
    if r is None:
        return _ALL_LAYERS
    if r == 1:
        return RationalGF(ONE)
    if cofactor == "closed":
        value: Value = _frac(ONE, _d(r))
        how = "closed"
    else:
        counts = oracle.avoidance_series(Family.PAIR_123_132.T, _max_descent_block(r), order,
                                         guard).counts
        value = TruncatedSeries(counts)
        how = "oracle"
    steps.append(Step("avoidance-cofactor", f"{{123,132}} avoiders also avoiding "
                      f"{fmt(_max_descent_block(r))} ({how})", _s(value), "()"))
    return value


def _layered(blocks: tuple[int, ...], tau: Perm, r: int | None, order: int, cofactor: str,
             guard: int, steps: list[Step]) -> Value:
    """
    Count over the block structure. ``r`` bounds the size of the blocks
    that may follow the part of the permutation already placed (None for
    no bound).
    """
    if not blocks:
        return _layer_tail(r, order, cofactor, guard, steps)
    e = blocks[0]
    rest = standardize(tau[e:]) if tau[e:] else ()
    if e >= 2:
        bound = e if r is None else min(e, r)
        factor = _frac(Polynomial.monomial(1, e), _d(bound))
        steps.append(Step("block-then-max", "{123,132}: descending prefix closed by the maximum",
                          _s(factor), _rem(rest)))
        return _mul(factor, _layered(blocks[1:], rest, e, order, cofactor, guard, steps))
    m = 0
    while m < len(blocks) and blocks[m] == 1:
        m += 1
    steps.append(Step("max-first", f"{{123,132}}: {m} leading single blocks",
                      " + ".join(["x"] + [f"x^{j + 1}" for j in range(2, m + 1)]), _rem(rest)))
    acc = _mul(_x(1), _layered(blocks[1:], rest, 1, order, cofactor, guard, steps))
    for j in range(2, m + 1):
        sub = standardize(tau[j:]) if tau[j:] else ()
        acc = _add(acc, _mul(_x(j + 1),
                             _layered(blocks[j:], sub, 1, order, cofactor, guard, steps)))
    return acc


def gf_pair_123_132(tau: Perm, order: int = DEFAULT_ORDER, cofactor: str = "oracle",
                    guard: int = DEFAULT_GUARD) -> GfResult:
    """
    ``T = {123,132}``. The result is closed unless the shape needs the
    avoidance cofactor and ``cofactor="oracle"``.

    >>> str(gf_pair_123_132((3, 2, 1)).value)
    'x^3 + 3x^4'
    >>> gf_pair_123_132((2, 1, 3)).coefficients(6)
    (0, 0, 0, 1, 2, 5, 10)
    """
    d = decompose(tau, Family.PAIR_123_132)
    steps: list[Step] = []
    blocks = d.params["blocks"]
    v = _layered(tuple(blocks), tuple(tau), None, order, cofactor, guard, steps)
    return GfResult(v, tuple(steps), order)


# {132,321} ------------------------------------------------------------------

def gf_pair_132_321(tau: Perm) -> GfResult:
    """
    >>> str(gf_pair_132_321((2, 3, 1)).value)
    'x^3/(1-x)'
    """
    d = decompose(tau, Family.PAIR_132_321)
    k = len(tau)
    if d.shape == "identity":
        p = Polynomial.monomial(1, k)
        for j in range(k + 1, 2 * k):
            p = p + Polynomial.monomial(2 * (2 * k - j), j)
        v = _frac(p)
        rule = "{132,321}: identity"
    elif d.shape == "rotation":
        v = _frac(Polynomial.monomial(1, k), _one_minus_x(1))
        rule = "{132,321}: rotation (d+1..k, 1..d)"
    else:
        v = _x(k)
        rule = "{132,321}: rotated prefix followed by m..k"
    return GfResult(v, (Step(d.shape, rule, _s(v), "()"),))


# {132,213} ------------------------------------------------------------------

def _runs(runs: tuple[int, ...], tau: Perm, r: int | None, steps: list[Step]) -> RationalGF:
    if not runs:
        return _ALL_LAYERS if r is None else _frac(ONE, _d(r))
    e = runs[0]
    rest = standardize(tau[e:]) if tau[e:] else ()
    bound = e if r is None else min(e, r)
    factor = _frac(Polynomial.monomial(1, e), _d(bound))
    steps.append(Step("leading-run", f"{{132,213}}: increasing run of length {e}",
                      _s(factor), _rem(rest)))
    return factor * _runs(runs[1:], rest, e, steps)


def gf_pair_132_213(tau: Perm) -> GfResult:
    """
    ``T = {132,213}``: peel increasing runs of consecutive values.

    >>> str(gf_pair_132_213((1, 2, 3)).value)
    'x^3/(1-x-x^2)^2'
    >>> str(gf_pair_132_213((3, 2, 1)).value)
    'x^3'
    """
    decompose(tau, Family.PAIR_132_213)
    steps: list[Step] = []
    v = _runs(tuple(increasing_runs(tau)), tuple(tau), None, steps)
    return GfResult(v, tuple(steps))


# {132,231} ------------------------------------------------------------------

def _starts_with_max(p: Perm) -> bool:
    return p[0] == len(p)


def _ends_with_max(p: Perm) -> bool:
    return p[-1] == len(p)


def _valley(tau: Perm, steps: list[Step]) -> RationalGF:
    k = len(tau)
    d = decompose(tau, Family.PAIR_132_231)
    if d.shape == "monotone":
        v = _x(1) if k == 1 else _frac(Polynomial.monomial(1, k), _one_minus_x(k - 1))
        steps.append(Step("monotone", "{132,231}: monotone base", _s(v), "()"))
        return v
    r, rest = d.params["r"], standardize(d.remainder)
    if d.shape == "descending-prefix":
        same = len(rest) <= 1 or _ends_with_max(rest)
        where = "{132,231}: descending prefix k..k-r+1, trailing k-r"
    else:
        same = len(rest) <= 1 or _starts_with_max(rest)
        where = "{132,231}: leading k-r, ascending suffix k-r+1..k"
    factor = _frac(Polynomial.monomial(1, r + 1), _one_minus_x(r - 1 + int(same)))
    steps.append(Step(d.shape, where, _s(factor), _rem(rest)))
    return factor * _valley(rest, steps)


def gf_pair_132_231(tau: Perm) -> GfResult:
    """
    ``T = {132,231}``. The closed form is ``x^k/(1-x)^(k-m)`` where m counts
    the maximal stretches of ``k, k-1, ..., 2`` lying on one side of 1.

    >>> str(gf_pair_132_231((2, 1, 3)).value)
    'x^3/(1-x)'
    >>> str(gf_pair_132_231((1, 2, 3, 4)).value)
    'x^4/(1-x)^3'
    """
    steps: list[Step] = []
    v = _valley(tuple(tau), steps)
    return GfResult(v, tuple(steps))


# triples --------------------------------------------------------------------

def _dec(k: int) -> Perm:
    return tuple(range(k, 0, -1))


def _inc(k: int) -> Perm:
    return tuple(range(1, k + 1))


_E_BASES: dict[Perm, RationalGF] = {
    (1,): _x(1),
    (1, 2): _frac(Polynomial.monomial(1, 2), _one_minus_x(2)),
    (2, 1): _x(2),
    (2, 3, 1): _frac(Polynomial.monomial(1, 3), _one_minus_x(1)),
    (3, 1, 2): _frac(Polynomial.monomial(1, 3), _one_minus_x(1)),
    (3, 2, 1): _x(3),
    (4, 2, 3, 1): _x(4),
}


def _gf_e(tau: Perm, steps: list[Step]) -> RationalGF:
    k = len(tau)
    if tau in _E_BASES:
        v = _E_BASES[tau]
        steps.append(Step("base", "{123,132,213}: listed base", _s(v), "()"))
        return v
    if tau[0] == k - 1:
        rest = tau[2:]
        factor = _frac(Polynomial.monomial(1, 2), _one_minus_x(1))
        steps.append(Step("pair-first", "{123,132,213}: prefix (k-1,k)", _s(factor), _rem(rest)))
        return factor * _gf_e(rest, steps)
    rest = tau[1:]
    if len(rest) >= 2 and rest[0] == k - 2 and rest[1] == k - 1:
        # the maximum sits directly above a (k-2, k-1) pair, which costs a
        # factor (1-x) compared to the plain rule; 4231 is the smallest case
        factor = _frac(Polynomial((0, 1, -1)))
        rule = "max-before-pair"
        where = "{123,132,213}: prefix k followed by (k-2,k-1)"
    else:
        factor = _x(1)
        rule = "max-first"
        where = "{123,132,213}: prefix k"
    steps.append(Step(rule, where, _s(factor), _rem(rest)))
    return factor * _gf_e(rest, steps)


def _gf_f(tau: Perm) -> tuple[RationalGF, str]:
    k = len(tau)
    if tau == _dec(k):
        return _frac(Polynomial.monomial(1, k) + Polynomial.monomial(k - 1, k + 1)), "decreasing"
    if tau == _dec(k - 1) + (k,):
        return _frac(Polynomial.monomial(1, k), _one_minus_x(1)), "max-last"
    return _x(k), "general"


def _gf_g(tau: Perm) -> tuple[RationalGF, str]:
    k = len(tau)
    if tau == _dec(k):
        # x^k (1 + 2x + ... + 2x^(k-1))
        num = Polynomial.monomial(1, k) + Polynomial.monomial(1, k + 1) \
            - Polynomial.monomial(2, 2 * k)
        return _frac(num, _one_minus_x(1)), "decreasing"
    return _x(k), "general"


def _gf_h(tau: Perm) -> tuple[RationalGF, str]:
    k = len(tau)
    if k >= 2 and tau == _inc(k):
        return _frac(Polynomial.monomial(1, k), _one_minus_x(1)), "identity"
    return _x(k), "general"


_SHAPE_TRIPLES = {
    Family.TRIPLE_123_132_231: _gf_f,
    Family.TRIPLE_123_231_312: _gf_g,
    Family.TRIPLE_132_213_231: _gf_h,
}


def gf_triple(T: ForbiddenSet, tau: Perm, order: int = DEFAULT_ORDER) -> GfResult:
    """
    One of the four canonical triples.

    >>> str(gf_triple(Family.TRIPLE_123_231_312.T, (4, 3, 2, 1)).value)
    'x^4 + 2x^5 + 2x^6 + 2x^7'
    >>> gf_triple(Family.TRIPLE_123_132_213.T, (4, 2, 3, 1)).coefficients(6)
    (0, 0, 0, 0, 1, 0, 0)
    """
    fam = family_of(T)
    if fam not in TRIPLES:
        raise UnknownTriple(f"not a canonical triple: {{{','.join(fmt(t) for t in T)}}}")
    tau = tuple(tau)
    d = decompose(tau, fam)
    if fam is Family.TRIPLE_123_132_213:
        steps: list[Step] = []
        v = _gf_e(tau, steps)
        return GfResult(v, tuple(steps), order)
    v, shape = _SHAPE_TRIPLES[fam](tau)
    step = Step(shape, f"{fam.label}: one-parameter shape {d.shape}, r={d.params['r']}",
                _s(v), "()")
    return GfResult(v, (step,), order)


# quartets, the quintet and S_3 ----------------------------------------------

# The indicator statements assume k >= 3. These are the patterns of length
# at most 2 whose counts differ from them, checked against the oracle.
_SMALL: dict[tuple[Family, Perm], RationalGF] = {
    (Family.QUAD_123_132_213_231, (1, 2)): _frac(Polynomial.monomial(1, 2), _one_minus_x(1)),
    (Family.QUAD_123_132_231_312, (1,)): _x(1),
    (Family.QUINT_NO_123, (2, 1)): _x(2),
    (Family.FULL, (1,)): _x(1),
    (Family.FULL, (1, 2)): _x(2),
    (Family.FULL, (2, 1)): _x(2),
}


def _indicator(fam: Family, tau: Perm) -> tuple[RationalGF, str]:
    k = len(tau)
    if (fam, tau) in _SMALL:
        return _SMALL[(fam, tau)], "small-pattern exception"
    xk = _x(k)
    zero = RationalGF(Polynomial())
    if fam is Family.QUAD_123_132_213_231:
        hit = tau == _dec(k) or (k >= 2 and tau == _dec(k)[:-2] + (1, 2))
        return (xk, "n=k") if hit else (zero, "zero")
    if fam is Family.QUAD_123_132_231_312:
        if tau == _dec(k):
            return _frac(Polynomial.monomial(1, k) + Polynomial.monomial(1, k + 1)), "n=k,k+1"
        if tau == _dec(k - 1) + (k,):
            return xk, "n=k"
        return zero, "zero"
    if fam is Family.QUAD_132_213_231_312:
        return (xk, "n=k") if tau in (_dec(k), _inc(k)) else (zero, "zero")
    if fam is Family.QUINT_NO_123:
        return (xk, "n=k") if tau == _inc(k) else (zero, "zero")
    return zero, "zero"


def gf_quad(T: ForbiddenSet, tau: Perm) -> GfResult:
    """
    Canonical sets of four or more patterns. For these the counts vanish
    except at one or two sizes.

    >>> gf_quad(Family.QUAD_123_132_231_312.T, (3, 2, 1)).coefficients(5)
    (0, 0, 0, 1, 1, 0)
    """
    fam = family_of(T)
    if fam not in QUADS_AND_QUINTS:
        raise Unsupported("not a canonical set of four or more patterns")
    tau = tuple(tau)
    if not avoids(tau, fam.T):
        v = RationalGF(Polynomial())
        return GfResult(v, (Step("contains-forbidden", "tau contains a member of T", "0", "()"),))
    v, how = _indicator(fam, tau)
    return GfResult(v, (Step("indicator", f"{fam.label}: {how}", _s(v), "()"),))


def count_quad_quint(T: ForbiddenSet, tau: Perm, n: int) -> int:
    """
    ``|S_n(T; tau)|`` for ``|T| >= 4``; ``T`` need not be canonical.

    >>> count_quad_quint(forbidden_set("123,132,213,231"), (3, 1, 2), 3)
    1
    """
    T = tuple(sorted(T))
    if len(T) < 4:
        raise Unsupported("count_quad_quint needs at least four patterns")
    image, t, _ = canonicalize(T, tuple(tau))
    return gf_quad(image, t).value.expand(max(n, 0))[n] if n >= 0 else 0


# dispatch -------------------------------------------------------------------

def _route(fam: Family, tau: Perm, order: int, cofactor: str, guard: int) -> GfResult:
    if fam is Family.PAIR_123_132:
        return gf_pair_123_132(tau, order, cofactor, guard)
    if fam is Family.PAIR_132_321:
        return gf_pair_132_321(tau)
    if fam is Family.PAIR_132_213:
        return gf_pair_132_213(tau)
    if fam is Family.PAIR_132_231:
        return gf_pair_132_231(tau)
    if fam in TRIPLES:
        return gf_triple(fam.T, tau, order)
    return gf_quad(fam.T, tau)


@lru_cache(maxsize=4096)
def _dispatch(T: ForbiddenSet, tau: Perm, order: int, cofactor: str, guard: int) -> GfResult:
    if len(T) <= 1:
        raise Unsupported("at least two forbidden patterns are required")
    if not tau:
        raise PermError("tau must be nonempty")
    v = violation(tau, T)
    if v is not None:
        t, occ = v
        step = Step("contains-forbidden", f"tau contains {fmt(t)} at {occ}", "0", "()")
        return GfResult(RationalGF(Polynomial()), (step,), order)
    if (1, 2, 3) in T and (3, 2, 1) in T:
        # every permutation of length >= 7 has a monotone subsequence of length 3
        top = min(order, 6)
        counts = oracle.exactly_once_counts(T, tau, top, guard) + (0,) * (order - top)
        step = Step("erdos-szekeres", "T contains 123 and 321: zero from n=7, oracle below",
                    "", "()")
        return GfResult(TruncatedSeries(counts), (step,), order)
    image, t, g = canonicalize(T, tau)
    fam = family_of(image)
    steps: list[Step] = []
    if g.ops:
        steps.append(Step("symmetry", f"map by {g} onto {fam.label}", "1", _rem(t)))
    res = _route(fam, t, order, cofactor, guard)
    value = res.value.reduced() if isinstance(res.value, RationalGF) else res.value
    return GfResult(value, tuple(steps) + res.derivation, order)


def dispatch(T: ForbiddenSet, tau: Perm, order: int = DEFAULT_ORDER, cofactor: str = "oracle",
             guard: int = DEFAULT_GUARD) -> GfResult:
    """
    ``sum_n |S_n(T; tau)| x^n`` for any forbidden set of 2 to 6 patterns
    of length 3.

    >>> dispatch(forbidden_set("123,132"), (1, 2, 3)).coefficients(5)
    (0, 0, 0, 0, 0, 0)
    >>> str(dispatch(forbidden_set("213,312"), (1, 2, 3)).value)
    'x^3/(1-x)^2'
    """
    if cofactor not in COFACTOR_MODES:
        raise ValueError(f"cofactor must be one of {COFACTOR_MODES}")
    return _dispatch(tuple(sorted(set(T))), tuple(tau), order, cofactor, guard)

