"""
Permutations in one-line notation, stored as plain tuples of ``1..n``.

>>> occurrences((2, 4, 1, 3), (1, 2))
3
>>> fmt(inverse(parse("231")))
'312'
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Perm", "DEFAULT_GUARD", "PermError",
    "parse", "fmt", "is_perm", "check_perm", "standardize",
    "reverse", "complement", "inverse",
    "occurrences", "occurrences_ending_last", "contains_exactly_once",
    "avoids", "find_occurrence", "enumerate_perms",
]

# a permutation of [n] in one-line notation
Perm = tuple[int, ...]

# largest n for which S_n is generated on request
DEFAULT_GUARD = 12


class PermError(ValueError):
    """Raised for malformed permutations, words and patterns."""


def parse(text: str) -> Perm:
    """
    Parse ``"4231"`` or ``"10,9,1,2"`` style text into a permutation.

    >>> parse("4231")
    (4, 2, 3, 1)
    >>> parse("3,1,2")
    (3, 1, 2)
    >>> parse("")
    ()
    """
    text = text.strip()
    if text in ("", "()", "e"):
        return ()
    if "," in text:
        parts = [s.strip() for s in text.strip("()").split(",")]
    else:
        parts = list(text)
    try:
        values = tuple(int(s) for s in parts)
    except ValueError:
        raise PermError(f"not a permutation: {text!r}") from None
    return check_perm(values)


def fmt(p: Sequence[int]) -> str:
    """Compact digit string for n <= 9, comma separated otherwise."""
    if len(p) <= 9 and all(v <= 9 for v in p):
        return "".join(map(str, p))
    return ",".join(map(str, p))


def is_perm(values: Sequence[int]) -> bool:
    return sorted(values) == list(range(1, len(values) + 1))


def check_perm(values: Iterable[int]) -> Perm:
    p = tuple(values)
    if not is_perm(p):
        raise PermError(f"not a permutation of 1..{len(p)}: {p}")
    return p


def standardize(word: Sequence[int]) -> Perm:
    """
    The permutation order-isomorphic to a word of distinct values.

    >>> standardize((5, 9, 2))
    (2, 3, 1)
    """
    if len(set(word)) != len(word):
        raise PermError(f"word has repeated entries: {tuple(word)}")
    rank = {v: i for i, v in enumerate(sorted(word), 1)}
    return tuple(rank[v] for v in word)


def reverse(p: Perm) -> Perm:
    return tuple(reversed(p))


def complement(p: Perm) -> Perm:
    n = len(p)
    return tuple(n + 1 - v for v in p)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p, 1):
        inv[v - 1] = i
    return tuple(inv)


def _bounds(tau: Sequence[int]) -> list[tuple[int, int]]:
    # For pattern position j: the earlier positions holding the nearest
    # smaller and nearest larger pattern values (-1 when absent).
    out = []
    for j, t in enumerate(tau):
        lo = hi = -1
        for l in range(j):
            u = tau[l]
            if u < t and (lo < 0 or u > tau[lo]):
                lo = l
            elif u > t and (hi < 0 or u < tau[hi]):
                hi = l
        out.append((lo, hi))
    return out


def _count(pi: Sequence[int], tau: Sequence[int], cap: int | None,
           last_fixed: bool) -> int:
    n, k = len(pi), len(tau)
    if k == 0:
        return 0 if last_fixed else 1
    if k > n:
        return 0
    bounds = _bounds(tau)
    chosen = [0] * k
    limit = cap if cap is not None else -1
    found = 0

    def rec(j: int, start: int) -> bool:
        # returns True when the cap has been reached
        nonlocal found
        lo, hi = bounds[j]
        low = chosen[lo] if lo >= 0 else 0
        high = chosen[hi] if hi >= 0 else n + 1
        if last_fixed and j == k - 1:
            candidates: Iterable[int] = (n - 1,) if start <= n - 1 else ()
        else:
            candidates = range(start, n - (k - 1 - j))
        for i in candidates:
            v = pi[i]
            if low < v < high:
                if j == k - 1:
                    found += 1
                    if found == limit:
                        return True
                else:
                    chosen[j] = v
                    if rec(j + 1, i + 1):
                        return True
        return False

    rec(0, 0)
    return found


def occurrences(pi: Sequence[int], tau: Sequence[int], cap: int | None = None) -> int:
    """
    Number of subsequences of ``pi`` order-isomorphic to ``tau``.

    With ``cap`` the search stops as soon as ``cap`` occurrences are seen,
    so the result is exact below ``cap`` and equals ``cap`` otherwise.

    >>> occurrences((1, 2, 3), (1, 2))
    3
    >>> occurrences((1, 2, 3, 4), (1, 2), cap=2)
    2
    >>> occurrences((3, 2, 1), ())
    1
    """
    return _count(pi, tau, cap, last_fixed=False)


def occurrences_ending_last(pi: Sequence[int], tau: Sequence[int],
                            cap: int | None = None) -> int:
    """Occurrences of ``tau`` in ``pi`` that use the last letter of ``pi``."""
    return _count(pi, tau, cap, last_fixed=True)


def contains_exactly_once(pi: Sequence[int], tau: Sequence[int]) -> bool:
    return occurrences(pi, tau, cap=2) == 1


def avoids(pi: Sequence[int], patterns: Iterable[Sequence[int]]) -> bool:
    return all(occurrences(pi, t, cap=1) == 0 for t in patterns)


def find_occurrence(pi: Sequence[int], tau: Sequence[int]) -> tuple[int, ...] | None:
    """First occurrence of ``tau`` in ``pi`` as a tuple of values, if any."""
    for idx in itertools.combinations(range(len(pi)), len(tau)):
        sub = tuple(pi[i] for i in idx)
        if standardize(sub) == tuple(tau):
            return sub
    return None


def enumerate_perms(n: int, guard: int = DEFAULT_GUARD) -> Iterator[Perm]:
    """All permutations of [n] in lexicographic order."""
    if n < 0:
        raise PermError(f"negative length {n}")
    if n > guard:
        raise PermError(f"n={n} exceeds the enumeration guard {guard}")
    return itertools.permutations(range(1, n + 1))
