import itertools
from math import comb

import pytest

from permonce.classify import Family
from permonce.oracle import (
    Mode, SequenceTable, avoidance_series, avoider_count, count_sequence, exactly_once_counts,
    generate_avoiders,
)
from permonce.perm import PermError, avoids, enumerate_perms, occurrences

S3 = list(itertools.permutations((1, 2, 3)))


def filtered(T, n):
    return {p for p in enumerate_perms(n) if avoids(p, T)}


@pytest.mark.parametrize("fam", list(Family), ids=lambda f: f.name)
def test_generator_is_complete(fam):
    for n in range(8):
        assert set(generate_avoiders(fam.T, n)) == filtered(fam.T, n)


def test_known_avoider_counts():
    assert [avoider_count([(1, 3, 2)], n) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    for fam in (Family.PAIR_123_132, Family.PAIR_132_213, Family.PAIR_132_231):
        assert [avoider_count(fam.T, n) for n in range(1, 10)] == [2 ** (n - 1) for n in range(1, 10)]
    assert [avoider_count(Family.PAIR_132_321.T, n) for n in range(1, 10)] == \
        [comb(n, 2) + 1 for n in range(1, 10)]
    assert avoider_count([(1, 2, 3), (3, 2, 1)], 7) == 0


def test_cap_soundness():
    # exactly-once counts from the incremental generator equal a full count
    for T in ([(1, 2, 3), (1, 3, 2)], [(1, 3, 2), (2, 1, 3)], [(2, 3, 1)]):
        for tau in [(2, 1, 3), (3, 2, 1), (1, 2)]:
            got = exactly_once_counts(T, tau, 7)
            want = tuple(sum(1 for p in filtered(T, n) if occurrences(p, tau) == 1)
                         for n in range(8))
            assert got == want


def test_frozen_sequences():
    assert count_sequence([(1, 3, 2), (3, 2, 1)], (1, 2, 3), 6).counts == (0, 0, 0, 1, 4, 2, 0)
    assert count_sequence([(1, 2, 3), (1, 3, 2)], (3, 2, 1), 6).counts == (0, 0, 0, 1, 3, 0, 0)
    assert count_sequence([(1, 2, 3), (1, 3, 2)], (2, 1, 3), 10).counts == \
        (0, 0, 0, 1, 2, 5, 10, 20, 38, 71, 130)
    assert count_sequence([(1, 2, 3), (2, 3, 1), (3, 1, 2)], (4, 3, 2, 1), 9).counts == \
        (0, 0, 0, 0, 1, 2, 2, 2, 0, 0)


def test_tau_in_T_gives_zero():
    for t in S3:
        assert set(exactly_once_counts([t, (3, 2, 1) if t != (3, 2, 1) else (1, 2, 3)], t, 7)) == {0}


def test_avoidance_series():
    assert avoidance_series([(1, 2, 3), (1, 3, 2)], (2, 1), 3).counts == (1, 1, 1, 0)
    assert avoidance_series([(1, 3, 2), (2, 1, 3)], (1,), 5).counts == (1, 0, 0, 0, 0, 0)
    t = avoidance_series([(1, 2, 3), (1, 3, 2)], (2, 1, 3), 8)
    assert t.mode is Mode.AVOID_BOTH
    assert t.counts == (1, 1, 2, 3, 5, 8, 13, 21, 34)


def test_counts_bounded_by_avoiders():
    T = Family.PAIR_132_321.T
    for tau in [(1, 2), (2, 3, 1), (1, 2, 3)]:
        c = exactly_once_counts(T, tau, 8)
        assert all(0 <= c[n] <= avoider_count(T, n) for n in range(9))
        assert all(c[n] == 0 for n in range(len(tau)))


def test_guard():
    with pytest.raises(PermError):
        count_sequence([(1, 3, 2)], (1, 2), 13)
    with pytest.raises(PermError):
        list(generate_avoiders([(1, 3, 2)], 6, guard=5))


def test_determinism():
    a = count_sequence(Family.PAIR_132_231.T, (2, 1, 3), 9)
    b = count_sequence(Family.PAIR_132_231.T, (2, 1, 3), 9)
    assert a == b


def test_table_serialization():
    t = count_sequence(Family.PAIR_132_321.T, (1, 2, 3), 6)
    assert SequenceTable.from_json(t.to_json()) == t
    lines = t.to_bfile().splitlines()
    assert lines[0].startswith("#") and "c_0=0" in lines[0]
    assert lines[1:] == ["1 0", "2 0", "3 1", "4 4", "5 2", "6 0"]
    assert t.n_max == 6
