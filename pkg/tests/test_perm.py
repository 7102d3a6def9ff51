import itertools

import pytest
from hypothesis import given, strategies as st

from permonce.perm import (
    PermError, avoids, check_perm, complement, contains_exactly_once, enumerate_perms,
    find_occurrence, fmt, inverse, occurrences, occurrences_ending_last, parse, reverse,
    standardize,
)


def brute_occurrences(pi, tau):
    return sum(1 for idx in itertools.combinations(range(len(pi)), len(tau))
               if standardize([pi[i] for i in idx]) == tuple(tau))


perms = st.integers(0, 8).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)
small_patterns = st.integers(0, 4).flatmap(
    lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


def test_parse_forms():
    assert parse("4231") == (4, 2, 3, 1)
    assert parse("10,9,1,2,3,4,5,6,7,8") == (10, 9, 1, 2, 3, 4, 5, 6, 7, 8)
    assert parse("(3,1,2)") == (3, 1, 2)
    assert parse("") == parse("()") == parse("e") == ()


@pytest.mark.parametrize("bad", ["122", "013", "12a", "1,,2", "24"])
def test_parse_rejects(bad):
    with pytest.raises(PermError):
        parse(bad)


def test_fmt_switches_to_commas_above_nine():
    assert fmt((2, 1)) == "21"
    assert fmt(tuple(range(1, 11))) == "1,2,3,4,5,6,7,8,9,10"
    assert parse(fmt(tuple(range(10, 0, -1)))) == tuple(range(10, 0, -1))


def test_standardize_rejects_repeats():
    with pytest.raises(PermError):
        standardize((1, 1))


def test_check_perm():
    assert check_perm([2, 1]) == (2, 1)
    with pytest.raises(PermError):
        check_perm([0, 1])


@given(perms)
def test_symmetries_are_involutions(p):
    assert reverse(reverse(p)) == p
    assert complement(complement(p)) == p
    assert inverse(inverse(p)) == p


@given(perms, small_patterns)
def test_occurrences_match_brute_force(pi, tau):
    assert occurrences(pi, tau) == brute_occurrences(pi, tau)


@given(perms, small_patterns, st.integers(1, 3))
def test_cap_is_exact_below_the_cap(pi, tau, cap):
    assert occurrences(pi, tau, cap=cap) == min(cap, brute_occurrences(pi, tau))


@given(perms, small_patterns)
def test_occurrences_ending_last(pi, tau):
    if not pi or not tau:
        return
    want = brute_occurrences(pi, tau) - brute_occurrences(pi[:-1], tau)
    assert occurrences_ending_last(pi, tau) == want


@given(perms, small_patterns)
def test_symmetry_transports_occurrences(pi, tau):
    n = brute_occurrences(pi, tau)
    for op in (reverse, complement, inverse):
        assert occurrences(op(pi), op(tau)) == n


def test_exactly_once_and_avoids():
    assert contains_exactly_once((1, 3, 2), (1, 2)) is False
    assert contains_exactly_once((3, 1, 2), (1, 2)) is True
    assert avoids((3, 2, 1), [(1, 2, 3), (1, 3, 2)])
    assert not avoids((1, 3, 2), [(1, 2, 3), (1, 3, 2)])


def test_find_occurrence():
    assert find_occurrence((2, 4, 1, 3), (1, 2)) == (2, 4)
    assert find_occurrence((3, 2, 1), (1, 2)) is None


def test_enumerate_is_lexicographic_and_guarded():
    assert list(enumerate_perms(3)) == sorted(itertools.permutations((1, 2, 3)))
    assert sum(1 for _ in enumerate_perms(6)) == 720
    with pytest.raises(PermError):
        enumerate_perms(13)
    with pytest.raises(PermError):
        enumerate_perms(5, guard=4)
