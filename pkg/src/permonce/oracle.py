"""
Brute-force ground truth for the counting sequences.

Permutations are grown one letter at a time on the right: a permutation of
[n] is obtained from its standardized prefix of length n-1 by appending a
new last value and bumping the larger ones. Every occurrence inside the
prefix survives the extension, so only occurrences through the new last
letter need to be examined, and both T-avoidance and "at most one copy of
tau" are inherited by prefixes. That keeps the search inside the set that
can still contribute.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator

from .perm import DEFAULT_GUARD, Perm, PermError, fmt, occurrences_ending_last

__all__ = [
    "Mode", "SequenceTable", "generate_avoiders", "avoider_count",
    "count_sequence", "avoidance_series", "exactly_once_counts",
]


class Mode(str, Enum):
    EXACTLY_ONCE = "EXACTLY_ONCE"
    AVOID_BOTH = "AVOID_BOTH"


@dataclass(frozen=True)
class SequenceTable:
    T: tuple[Perm, ...]
    tau: Perm
    counts: tuple[int, ...]
    mode: Mode = Mode.EXACTLY_ONCE

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    def to_json(self) -> str:
        return json.dumps({
            "T": [fmt(t) for t in self.T],
            "tau": fmt(self.tau),
            "mode": self.mode.value,
            "counts": list(self.counts),
        })

    @classmethod
    def from_json(cls, text: str) -> SequenceTable:
        from .perm import parse
        d = json.loads(text)
        return cls(tuple(parse(t) for t in d["T"]), parse(d["tau"]),
                   tuple(d["counts"]), Mode(d["mode"]))

    def to_bfile(self) -> str:
        # OEIS convention: indices start at n=1, c_0 only in the header
        head = (f"# T={{{','.join(fmt(t) for t in self.T)}}} tau={fmt(self.tau) or '()'}"
                f" mode={self.mode.value} c_0={self.counts[0]}")
        lines = [head] + [f"{n} {c}" for n, c in enumerate(self.counts) if n >= 1]
        return "\n".join(lines) + "\n"


def _key(T: Iterable[Perm]) -> tuple[Perm, ...]:
    return tuple(sorted(set(tuple(t) for t in T)))


def _check_guard(n: int, guard: int) -> None:
    if n < 0:
        raise PermError(f"negative length {n}")
    if n > guard:
        raise PermError(f"n={n} exceeds the oracle guard {guard}")


def _children(p: Perm) -> Iterator[Perm]:
    for v in range(1, len(p) + 2):
        yield tuple(x + 1 if x >= v else x for x in p) + (v,)


@lru_cache(maxsize=None)
def _level(T: tuple[Perm, ...], tau: Perm | None, n: int) -> tuple[tuple[Perm, int], ...]:
    # (permutation, occurrences of tau so far) for T-avoiders of [n] holding
    # at most one occurrence of tau; tau=None tracks avoidance only.
    if n == 0:
        start = 1 if tau == () else 0
        return ((), start),
    out = []
    for parent, seen in _level(T, tau, n - 1):
        for child in _children(parent):
            if any(occurrences_ending_last(child, t, cap=1) for t in T):
                continue
            c = seen
            if tau is not None and tau:
                c += occurrences_ending_last(child, tau, cap=2 - seen)
                if c > 1:
                    continue
            out.append((child, c))
    return tuple(out)


def generate_avoiders(T: Iterable[Perm], n: int, guard: int = DEFAULT_GUARD) -> Iterator[Perm]:
    """
    All permutations of [n] avoiding every pattern of ``T``.

    >>> sum(1 for _ in generate_avoiders([(1, 3, 2)], 4))
    14
    """
    _check_guard(n, guard)
    T = _key(T)
    if () in T:
        return iter(())
    return (p for p, _ in _level(T, None, n))


def avoider_count(T: Iterable[Perm], n: int, guard: int = DEFAULT_GUARD) -> int:
    return sum(1 for _ in generate_avoiders(T, n, guard))


def exactly_once_counts(T: Iterable[Perm], tau: Perm, n_max: int,
                        guard: int = DEFAULT_GUARD) -> tuple[int, ...]:
    _check_guard(n_max, guard)
    T = _key(T)
    tau = tuple(tau)
    if () in T:
        return (0,) * (n_max + 1)
    return tuple(sum(1 for _, c in _level(T, tau, n) if c == 1)
                 for n in range(n_max + 1))


def count_sequence(T: Iterable[Perm], tau: Perm, n_max: int,
                   guard: int = DEFAULT_GUARD) -> SequenceTable:
    """
    ``c_n`` = number of T-avoiding permutations of [n] containing ``tau``
    exactly once, for ``0 <= n <= n_max``.

    >>> count_sequence([(1, 3, 2), (3, 2, 1)], (1, 2, 3), 6).counts
    (0, 0, 0, 1, 4, 2, 0)
    """
    T = _key(T)
    return SequenceTable(T, tuple(tau), exactly_once_counts(T, tau, n_max, guard),
                         Mode.EXACTLY_ONCE)


def avoidance_series(T: Iterable[Perm], tau: Perm, n_max: int,
                     guard: int = DEFAULT_GUARD) -> SequenceTable:
    """``c_n = |S_n(T u {tau})|``."""
    _check_guard(n_max, guard)
    T = _key(T)
    both = _key(T + (tuple(tau),))
    counts = tuple(avoider_count(both, n, guard) for n in range(n_max + 1))
    return SequenceTable(T, tuple(tau), counts, Mode.AVOID_BOTH)
