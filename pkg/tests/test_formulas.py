import itertools

import pytest

from permonce.classify import S3, Family, canonicalize, forbidden_set
from permonce.formulas import (
    GfResult, UnknownTriple, Unsupported, count_quad_quint, dispatch, gf_pair_123_132,
    gf_pair_132_213, gf_pair_132_231, gf_pair_132_321, gf_quad, gf_triple,
)
from permonce.oracle import exactly_once_counts, generate_avoiders
from permonce.perm import PermError, parse
from permonce.series import Polynomial, RationalGF, TruncatedSeries

ORDER = 12


def closed(tau, T):
    return str(dispatch(forbidden_set(T), parse(tau), ORDER, "closed").value)


# closed forms computed once and checked against the oracle for n <= 10
FROZEN = [
    ("123,132", "3214", "x^4/(1-x-x^2-x^3)^2"),
    ("123,132", "3241", "x^4/(1-x-x^2)"),
    ("123,132", "3412", "x^4/(1-x)^3"),
    ("123,132", "3421", "x^4(1+x)/(1-x)"),
    ("123,132", "4231", "x^4"),
    ("123,132", "4321", "x^4 + 6x^5 + x^6"),
    ("132,321", "1234", "x^4 + 6x^5 + 4x^6 + 2x^7"),
    ("132,321", "2314", "x^4"),
    ("132,321", "4123", "x^4/(1-x)"),
    ("132,213", "1234", "x^4/(1-x-x^2-x^3)^2"),
    ("132,213", "4123", "x^4/(1-x-x^2)"),
    ("132,213", "3421", "x^4/(1-x)"),
    ("132,231", "1234", "x^4/(1-x)^3"),
    ("132,231", "4213", "x^4/(1-x)"),
    ("132,231", "4312", "x^4/(1-x)^2"),
    ("123,132,213", "3412", "x^4/(1-x)^3"),
    ("123,132,213", "4312", "x^4/(1-x)"),
    ("123,132,231", "4321", "x^4 + 3x^5"),
    ("123,132,231", "3214", "x^4/(1-x)"),
    ("123,231,312", "4321", "x^4 + 2x^5 + 2x^6 + 2x^7"),
    ("132,213,231", "1234", "x^4/(1-x)"),
    ("132,213,231", "4312", "x^4"),
]


@pytest.mark.parametrize("T,tau,text", FROZEN)
def test_frozen_closed_forms(T, tau, text):
    assert closed(tau, T) == text


@pytest.mark.parametrize("T,tau,text", [
    ("123,132", "213", "x^3/(1-x-x^2)^2"),
    ("123,132", "231", "x^3/(1-x)"),
    ("123,132", "312", "x^3/(1-x)"),
    ("123,132", "321", "x^3 + 3x^4"),
    ("132,321", "123", "x^3 + 4x^4 + 2x^5"),
    ("132,321", "213", "x^3"),
    ("132,321", "231", "x^3/(1-x)"),
    ("132,321", "312", "x^3/(1-x)"),
    ("132,213", "123", "x^3/(1-x-x^2)^2"),
    ("132,213", "231", "x^3/(1-x)"),
    ("132,213", "312", "x^3/(1-x)"),
    ("132,213", "321", "x^3"),
    ("132,231", "123", "x^3/(1-x)^2"),
    ("132,231", "321", "x^3/(1-x)^2"),
    ("132,231", "213", "x^3/(1-x)"),
    ("132,231", "312", "x^3/(1-x)"),
])
def test_length_three_examples(T, tau, text):
    assert closed(tau, T) == text


def test_oracle_cofactor_gives_a_series_with_the_same_coefficients():
    a = gf_pair_123_132((2, 1, 3))
    b = gf_pair_123_132((2, 1, 3), cofactor="closed")
    assert isinstance(a.value, TruncatedSeries) and not a.closed
    assert isinstance(b.value, RationalGF) and b.closed
    assert a.coefficients(ORDER) == b.coefficients(ORDER)
    assert any(s.rule == "avoidance-cofactor" for s in a.derivation)


def test_shapes_without_cofactor_stay_closed():
    for tau in [(2, 3, 1), (3, 2, 1), (4, 2, 3, 1), (4, 3, 2, 1)]:
        assert gf_pair_123_132(tau).closed
    # a trailing block of size 2 needs the cofactor for blocks shorter than 2
    assert not gf_pair_123_132((3, 1, 2)).closed


def _layered_product(r):
    # product over blocks x^r_i (1-x)/(1-2x+x^r_i), times (1-x)/(1-2x+x^r_m)
    def frac(e):
        return RationalGF(Polynomial((1, -1)), Polynomial((1, -2)) + Polynomial.monomial(1, e))
    f = RationalGF(Polynomial((1,)))
    for ri in r:
        f = f * frac(ri) * Polynomial.monomial(1, ri)
    return f * frac(r[-1])


def _blocks_to_perm(r):
    top = sum(r)
    out = ()
    for s in r:
        out += tuple(range(top - 1, top - s, -1)) + (top,)
        top -= s
    return out


@pytest.mark.parametrize("r", [(2,), (3,), (2, 2), (3, 2), (4, 2), (3, 3), (2, 2, 2), (4, 3, 2),
                               (5, 3)])
def test_layered_product_for_nonincreasing_blocks(r):
    tau = _blocks_to_perm(r)
    got = gf_pair_123_132(tau, cofactor="closed").coefficients(ORDER)
    assert got == _layered_product(r).expand(ORDER).coeffs


def test_layered_product_fails_when_blocks_grow():
    # with a larger block after a smaller one the product overcounts
    tau = _blocks_to_perm((2, 3))
    got = gf_pair_123_132(tau, cofactor="closed").coefficients(10)
    assert got == exactly_once_counts(Family.PAIR_123_132.T, tau, 10)
    assert got != _layered_product((2, 3)).expand(10).coeffs


def test_reversed_identity_in_run_family():
    for k in range(1, 9):
        assert str(gf_pair_132_213(tuple(range(k, 0, -1))).value) == ("x" if k == 1 else f"x^{k}")


def test_run_family_identity_base():
    for k in range(2, 8):
        v = gf_pair_132_213(tuple(range(1, k + 1))).value
        num = Polynomial.monomial(1, k) * Polynomial((1, -1)) ** 2
        den = (Polynomial((1, -2)) + Polynomial.monomial(1, k)) ** 2
        assert v.equals(RationalGF(num, den))


def test_valley_family_closed_form():
    # x^k/(1-x)^(k-m) with m the number of side changes plus one
    for k in range(2, 8):
        for tau in generate_avoiders(Family.PAIR_132_231.T, k):
            pos = {v: i for i, v in enumerate(tau)}
            word = ["L" if pos[v] < pos[1] else "R" for v in range(k, 1, -1)]
            m = 1 + sum(a != b for a, b in zip(word, word[1:]))
            want = RationalGF(Polynomial.monomial(1, k), Polynomial((1, -1)) ** (k - m))
            assert gf_pair_132_231(tau).value.equals(want)


def test_rotation_family_cases():
    assert str(gf_pair_132_321((1,)).value) == "x"
    assert str(gf_pair_132_321((2, 1)).value) == "x^2/(1-x)"
    assert str(gf_pair_132_321((1, 2)).value) == "x^2 + 2x^3"


def test_triple_examples():
    E = Family.TRIPLE_123_132_213.T
    for k in (4, 5):
        dec = tuple(range(k, 0, -1))
        alt = tuple(range(k, 4, -1)) + (4, 2, 3, 1)
        assert str(gf_triple(E, dec).value) == f"x^{k}"
        assert str(gf_triple(E, alt).value) == f"x^{k}"
    F = Family.TRIPLE_123_132_231.T
    for k in (3, 4, 5):
        tau = tuple(range(k - 1, 0, -1)) + (k,)
        assert str(gf_triple(F, tau).value) == f"x^{k}/(1-x)"
        assert gf_triple(F, tuple(range(k, 0, -1))).coefficients(k + 2)[k:] == (1, k - 1, 0)
    G = Family.TRIPLE_123_231_312.T
    assert gf_triple(G, (4, 3, 2, 1)).coefficients(8)[4:] == (1, 2, 2, 2, 0)
    H = Family.TRIPLE_132_213_231.T
    for k in (3, 4, 5):
        for r in range(1, k):
            tau = tuple(range(k, r, -1)) + tuple(range(1, r + 1))
            assert str(gf_triple(H, tau).value) == f"x^{k}"


def test_max_before_top_pair_rule():
    # (k, k-2, k-1, ...) carries an extra (1-x) factor; 4231 is its smallest case
    E = Family.TRIPLE_123_132_213.T
    res = gf_triple(E, (5, 3, 4, 2, 1))
    assert any(s.rule == "max-before-pair" for s in res.derivation)
    assert res.coefficients(10) == exactly_once_counts(E, (5, 3, 4, 2, 1), 10)


def test_unknown_triple():
    with pytest.raises(UnknownTriple):
        gf_triple(forbidden_set("213,231,312"), (1, 2, 3))


@pytest.mark.parametrize("fam", [f for f in Family if f.size >= 4], ids=lambda f: f.name)
def test_quad_indicators_match_oracle(fam):
    for k in range(1, 7):
        for tau in generate_avoiders(fam.T, k):
            want = exactly_once_counts(fam.T, tau, 8)
            assert tuple(count_quad_quint(fam.T, tau, n) for n in range(9)) == want


def test_quad_examples():
    Q1 = forbidden_set("123,132,213,231")
    assert [count_quad_quint(Q1, (3, 1, 2), n) for n in range(2, 6)] == [0, 1, 0, 0]
    Q2 = forbidden_set("123,132,231,312")
    for k in (3, 4, 5):
        dec = tuple(range(k, 0, -1))
        assert [count_quad_quint(Q2, dec, n) for n in (k, k + 1, k + 2)] == [1, 1, 0]
    for n in range(9):
        assert count_quad_quint(tuple(S3), (1, 2, 3), n) == 0
    assert gf_quad(Q2, (1, 2, 3)).coefficients(6) == (0,) * 7


def test_small_pattern_exceptions():
    Q1 = forbidden_set("123,132,213,231")
    assert gf_quad(Q1, (1, 2)).coefficients(6) == (0, 0, 1, 1, 1, 1, 1)
    Q2 = forbidden_set("123,132,231,312")
    assert gf_quad(Q2, (1,)).coefficients(4) == (0, 1, 0, 0, 0)


def test_dispatch_guards():
    z = dispatch(forbidden_set("123,132"), (1, 2, 3))
    assert z.closed and set(z.coefficients(9)) == {0}
    both = dispatch(forbidden_set("123,321"), (2, 1, 3), ORDER)
    assert not both.closed
    c = both.coefficients(ORDER)
    assert c[:7] == exactly_once_counts(forbidden_set("123,321"), (2, 1, 3), 6)
    assert set(c[7:]) == {0}
    with pytest.raises(Unsupported):
        dispatch(forbidden_set("123"), (1,))
    with pytest.raises(PermError):
        dispatch(forbidden_set("123,132"), ())
    with pytest.raises(ValueError):
        dispatch(forbidden_set("123,132"), (1,), cofactor="guess")


def test_symmetry_transport_through_dispatch():
    for size in (2, 3):
        for T in itertools.combinations(S3, size):
            if {(1, 2, 3), (3, 2, 1)} <= set(T):
                continue
            for tau in generate_avoiders(T, 4):
                image, t, _ = canonicalize(T, tau)
                assert dispatch(T, tau, 10, "closed").coefficients(10) == \
                    dispatch(image, t, 10, "closed").coefficients(10)


def test_base_normalization():
    for fam in list(Family)[:12]:
        for k in range(1, 6):
            for tau in generate_avoiders(fam.T, k):
                c = dispatch(fam.T, tau, ORDER, "closed").coefficients(ORDER)
                assert c[:k] == (0,) * k and c[k] == 1
                assert all(x >= 0 for x in c)


def test_derivation_records_symmetry():
    res = dispatch(forbidden_set("213,312"), (1, 2, 3))
    assert res.derivation[0].rule == "symmetry"
    assert res.derivation[0].remainder == "321"


def test_gf_result_json_round_trip():
    for res in (dispatch(forbidden_set("123,132"), (2, 1, 3)),
                dispatch(forbidden_set("132,231"), (2, 1, 3)),
                dispatch(forbidden_set("123,321"), (1, 2))):
        back = GfResult.from_json(res.to_json())
        assert back == res


def test_order_controls_series_length():
    res = dispatch(forbidden_set("123,132"), (2, 1, 3), order=8)
    assert res.value.order == 8
    with pytest.raises(ValueError):
        res.coefficients(9)
