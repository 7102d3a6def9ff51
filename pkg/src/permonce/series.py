"""
Exact integer polynomials, rational generating functions with a unit
constant term in the denominator, and truncated power series.

>>> f = RationalGF(Polynomial.monomial(1, 3), Polynomial((1, -1)) ** 2)
>>> str(f)
'x^3/(1-x)^2'
>>> f.expand(6).coeffs
(0, 0, 0, 1, 2, 3, 4)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

__all__ = ["Polynomial", "RationalGF", "TruncatedSeries", "DEFAULT_ORDER", "X", "ONE"]

DEFAULT_ORDER = 12


def _strip(cs: Iterable[int]) -> tuple[int, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in x; ``coeffs[i]`` is the coefficient of x^i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(int(c) for c in self.coeffs))

    @classmethod
    def monomial(cls, c: int, e: int) -> Polynomial:
        if e < 0:
            raise ValueError("negative exponent")
        return cls((0,) * e + (c,))

    @classmethod
    def const(cls, c: int) -> Polynomial:
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Union[Polynomial, int]) -> Polynomial:
        if isinstance(other, int):
            return Polynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        out = ONE
        for _ in range(e):
            out = out * self
        return out

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def low_degree(self) -> int:
        """Exponent of the lowest nonzero term (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def exact_div(self, other: Polynomial) -> Polynomial:
        q, r = _divmod(self, other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __str__(self) -> str:
        return render_poly(self, spaced=True)


def _divmod(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial]:
    # division with remainder over the integers; b must have a unit leading
    # coefficient, or the quotient must happen to be integral
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a.coeffs]
    q = [Fraction(0)] * max(len(r) - len(b.coeffs) + 1, 0)
    lead = b.coeffs[-1]
    for i in range(len(q) - 1, -1, -1):
        c = r[i + b.degree] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b.coeffs):
                r[i + j] -= c * y
    if any(c.denominator != 1 for c in q + r):
        raise ValueError(f"non-integral division of {a} by {b}")
    return Polynomial(int(c) for c in q), Polynomial(int(c) for c in r)


def _primitive_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    # Euclid over Q, returned as a primitive integer polynomial
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        while x and len(x) >= len(y):
            c = x[-1] / y[-1]
            shift = len(x) - len(y)
            for j, v in enumerate(y):
                x[shift + j] -= c * v
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    if not x:
        return Polynomial()
    den = 1
    for c in x:
        den = den * c.denominator // gcd(den, c.denominator)
    p = Polynomial(int(c * den) for c in x)
    cont = p.content()
    p = Polynomial(c // cont for c in p.coeffs)
    if p[p.low_degree()] < 0:
        p = -p
    return p


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive greatest common divisor, normalized to a positive lowest term."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return _primitive_gcd(a, b)


ONE = Polynomial((1,))
X = Polynomial((0, 1))


def _fmt_term(c: int, e: int) -> str:
    if e == 0:
        return str(c)
    mag = "" if c == 1 else str(c)
    return f"{mag}x" if e == 1 else f"{mag}x^{e}"


def render_poly(p: Polynomial, spaced: bool = False) -> str:
    """Ascending-exponent rendering, e.g. ``1-2x+x^3`` or ``x^3 + 4x^4``."""
    if p.is_zero():
        return "0"
    plus, minus = (" + ", " - ") if spaced else ("+", "-")
    out = ""
    for e, c in enumerate(p.coeffs):
        if not c:
            continue
        if not out:
            out = ("-" if c < 0 else "") + _fmt_term(abs(c), e)
        else:
            out += (minus if c < 0 else plus) + _fmt_term(abs(c), e)
    return out


def _squarefree_parts(p: Polynomial) -> list[tuple[Polynomial, int]]:
    # Yun's algorithm; p(0) = 1 so every part has a unit constant term
    parts = []
    a = p
    b = a.derivative()
    c = poly_gcd(a, b)
    w = a.exact_div(c)
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w.exact_div(y)
        if z.degree > 0:
            parts.append((_unit_const(z), i))
        i += 1
        w = y
        c = c.exact_div(y)
    return parts


def _unit_const(p: Polynomial) -> Polynomial:
    return -p if p[0] < 0 else p


def _render_factor(p: Polynomial, mult: int) -> str:
    body = render_poly(p)
    if p.degree == 1 and p[0] == 0:
        base = body
    else:
        base = f"({body})"
    return base if mult == 1 else f"{base}^{mult}"


@dataclass(frozen=True)
class RationalGF:
    """
    ``num/den`` with ``den(0) == 1``. Construction normalizes the sign of the
    denominator; :meth:`reduced` cancels common polynomial factors.
    """

    num: Polynomial
    den: Polynomial = ONE

    def __post_init__(self):
        c0 = self.den[0]
        if c0 == -1:
            object.__setattr__(self, "num", -self.num)
            object.__setattr__(self, "den", -self.den)
        elif c0 != 1:
            raise ValueError(f"denominator must have constant term 1: {self.den}")

    @classmethod
    def poly(cls, p: Polynomial) -> RationalGF:
        return cls(p, ONE)

    def __add__(self, other: RationalGF) -> RationalGF:
        if self.den == other.den:
            return RationalGF(self.num + other.num, self.den).reduced()
        return RationalGF(self.num * other.den + other.num * self.den,
                          self.den * other.den).reduced()

    def __mul__(self, other: Union[RationalGF, Polynomial, int]) -> RationalGF:
        if isinstance(other, (Polynomial, int)):
            return self.scale_by_poly(other if isinstance(other, Polynomial) else Polynomial.const(other))
        return RationalGF(self.num * other.num, self.den * other.den).reduced()

    def scale_by_poly(self, p: Polynomial) -> RationalGF:
        return RationalGF(self.num * p, self.den).reduced()

    def reduced(self) -> RationalGF:
        if self.num.is_zero():
            return RationalGF(Polynomial(), ONE)
        g = poly_gcd(self.num, self.den)
        if g.degree <= 0:
            return self
        g = _unit_const(g)
        return RationalGF(self.num.exact_div(g), self.den.exact_div(g))

    def is_polynomial(self) -> bool:
        return self.reduced().den == ONE

    def expand(self, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        """First ``order + 1`` coefficients, by long division."""
        den = self.den.coeffs
        out = []
        for n in range(order + 1):
            c = self.num[n]
            for i in range(1, min(n, len(den) - 1) + 1):
                c -= den[i] * out[n - i]
            out.append(c)
        return TruncatedSeries(tuple(out))

    def equals(self, other: RationalGF) -> bool:
        return (self.num * other.den - other.num * self.den).is_zero()

    def __str__(self) -> str:
        f = self.reduced()
        num, den = f.num, f.den
        if den == ONE:
            return render_poly(num, spaced=True)
        e = num.low_degree()
        rest = Polynomial(num.coeffs[e:])
        if rest.degree == 0:
            top = _fmt_term(abs(rest[0]), e) if e else str(abs(rest[0]))
            if rest[0] < 0:
                top = "-" + top
        else:
            cont = rest.content() * (1 if rest[0] > 0 else -1)
            rest = Polynomial(c // cont for c in rest.coeffs)
            lead = "" if cont == 1 else ("-" if cont == -1 else str(cont))
            mono = _fmt_term(1, e) if e else ""
            top = f"{lead}{mono}({render_poly(rest)})"
        bottom = "".join(_render_factor(p, m) for p, m in _squarefree_parts(den))
        return f"{top}/{bottom}"


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c_0..c_N`` of a power series, exact."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a truncated series needs at least c_0")

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> TruncatedSeries:
        return cls(tuple(counts))

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        return cls((0,) * (order + 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[:order + 1])

    def _common(self, other: TruncatedSeries) -> tuple[tuple[int, ...], tuple[int, ...]]:
        n = min(self.order, other.order) + 1
        return self.coeffs[:n], other.coeffs[:n]

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        a, b = self._common(other)
        return TruncatedSeries(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other: Union[TruncatedSeries, RationalGF, Polynomial, int]) -> TruncatedSeries:
        if isinstance(other, int):
            return TruncatedSeries(tuple(c * other for c in self.coeffs))
        if isinstance(other, Polynomial):
            other = RationalGF.poly(other)
        if isinstance(other, RationalGF):
            other = other.expand(self.order)
        a, b = self._common(other)
        n = len(a)
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    out[i + j] += x * b[j]
        return TruncatedSeries(tuple(out))

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = render_poly(Polynomial(self.coeffs), spaced=True)
        return f"{terms} + O(x^{self.order + 1})"
