import math

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sigflow.algebra import (
    FONE, FZERO, Frac, Poly, X, format_frac, format_poly, frac_from_json, frac_normalize,
    frac_to_json, is_rational_fraction, laurent_expand, parse_frac, parse_poly, rat,
    series_expand, valuation,
)
from sigflow.errors import NotRational, ZeroDenominator

# ---------------------------------------------------------------------------
# strategies

small_rat = st.builds(lambda a, b: mpq(a, b), st.integers(-6, 6), st.integers(1, 4))
polys = st.lists(small_rat, max_size=4).map(Poly)
nonzero_polys = polys.filter(bool)
fracs = st.builds(Frac, polys, nonzero_polys)
rationals = st.builds(
    lambda n, d0, d: Frac(n, Poly([d0] + list(d.coeffs[1:]))),
    polys, small_rat.filter(bool), polys,
)


def P(text):
    return parse_poly(text)


# ---------------------------------------------------------------------------
# normalisation


def test_normalize_constant_denominator():
    f = frac_normalize(P("2x"), P("4"))
    assert f.num == Poly([0, mpq(1, 2)]) and f.den == 1


def test_normalize_cancels_common_factor():
    f = frac_normalize(P("x^2 - 1"), P("x - 1"))
    assert f.num == P("x + 1") and f.den == 1


def test_normalize_makes_denominator_monic():
    # frozen from a computer-algebra oracle
    f = frac_normalize(X, P("1 - x - x^2"))
    assert f.num.coeffs == (0, -1)
    assert f.den.coeffs == (-1, 1, 1)


def test_normalize_zero_denominator():
    with pytest.raises(ZeroDenominator):
        frac_normalize(X, Poly([]))


def test_cancel_matches_oracle():
    # (x^2 - 1) / (2x^2 + 4x + 2) == (x - 1) / (2x + 2), frozen oracle value
    f = Frac(P("x^2 - 1"), P("2 + 4x + 2x^2"))
    assert f == Frac(P("x - 1"), P("2x + 2"))
    assert f.den.coeffs == (1, 1)


@given(fracs)
def test_representation_is_canonical(f):
    assert f.den.coeffs[-1] == 1
    assert f.num.gcd(f.den) == 1 or not f.num


# ---------------------------------------------------------------------------
# polynomial arithmetic


def test_divmod_matches_oracle():
    q, r = divmod(P("x^3 + 2x + 1"), P("2x - 1"))
    assert q == Poly([mpq(9, 8), mpq(1, 4), mpq(1, 2)])
    assert r == Poly([mpq(17, 8)])


def test_gcd_matches_oracle():
    assert P("x^3 - 1").gcd(P("x^2 - 1")) == P("x - 1")


@given(polys, polys, polys)
def test_poly_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a) == Poly([])


@given(polys, nonzero_polys)
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, polys)
def test_gcd_divides_both(a, b):
    g = a.gcd(b)
    if g:
        assert not (a % g) and not (b % g)


# ---------------------------------------------------------------------------
# fields


@settings(max_examples=200)
@given(fracs, fracs)
def test_cross_multiplication(f, g):
    s = f + g
    assert s.num * f.den * g.den == s.den * (f.num * g.den + g.num * f.den)
    p = f * g
    assert p.num * f.den * g.den == p.den * f.num * g.num


@settings(max_examples=200)
@given(fracs.filter(bool))
def test_inverse(f):
    assert f * f.inverse() == FONE
    assert f / f == FONE


@given(fracs, fracs)
def test_valuation_laws(f, g):
    assert valuation(f * g) == valuation(f) + valuation(g)
    vs = valuation(f + g)
    assert vs >= min(valuation(f), valuation(g))
    if valuation(f) != valuation(g):
        assert vs == min(valuation(f), valuation(g))


@given(rationals, rationals)
def test_rationals_form_a_subring(f, g):
    assert is_rational_fraction(f + g)
    assert is_rational_fraction(f - g)
    assert is_rational_fraction(f * g)


def test_valuation_examples():
    assert valuation(FZERO) == math.inf
    assert valuation(Frac(X, P("1 - x"))) == 1
    assert valuation(Frac(1, X)) == -1


def test_is_rational_examples():
    assert is_rational_fraction(Frac(X, P("1 - x - x^2")))
    assert not is_rational_fraction(Frac(1, X))
    assert is_rational_fraction(FZERO)


# ---------------------------------------------------------------------------
# streams


def test_series_fibonacci():
    assert series_expand(Frac(X, P("1 - x - x^2")), 8) == [0, 1, 1, 2, 3, 5, 8, 13]


def test_series_geometric_and_constant():
    assert series_expand(Frac(1, P("1 - x")), 4) == [1, 1, 1, 1]
    assert series_expand(Frac(5), 3) == [5, 0, 0]


@pytest.mark.parametrize("num, den, expected", [
    # frozen from a computer-algebra oracle
    ("1 + 2x", "1 - 3x + x^3", [1, 5, 15, 44, 127, 366, 1054, 3035, 8739, 25163]),
    ("1/2", "2 - x", [mpq(1, 2 ** (k + 2)) for k in range(10)]),
    ("x^2 - 1", "1 + x + x^2", [-1, 1, 1, -2, 1, 1, -2, 1, 1, -2]),
])
def test_series_matches_oracle(num, den, expected):
    assert series_expand(Frac(P(num), P(den)), 10) == expected


def test_series_rejects_nonrational():
    with pytest.raises(NotRational):
        series_expand(Frac(1, X), 3)


@given(rationals, st.integers(0, 12))
def test_series_times_denominator_is_numerator(f, T):
    s = series_expand(f, T)
    d = f.den.coeffs
    for k in range(T):
        conv = sum((d[i] * s[k - i] for i in range(min(k, len(d) - 1) + 1)), mpq(0))
        want = f.num.coeffs[k] if k < len(f.num.coeffs) else 0
        assert conv == want


def test_laurent_examples():
    lp = laurent_expand(Frac(1, X), 3)
    assert (lp.offset, list(lp.coeffs)) == (-1, [1, 0, 0])
    lp = laurent_expand(Frac(X * X), 2)
    assert (lp.offset, list(lp.coeffs)) == (2, [1, 0])
    # frozen oracle: (1 + x)/x^2 = x^-2 + x^-1
    lp = laurent_expand(Frac(P("1 + x"), X * X), 3)
    assert (lp.offset, list(lp.coeffs)) == (-2, [1, 1, 0])
    assert lp.at(-1) == 1 and lp.at(0) == 0


def test_laurent_zero():
    lp = laurent_expand(FZERO, 3)
    assert lp.offset == 0 and list(lp.coeffs) == []


# ---------------------------------------------------------------------------
# text and JSON


def test_poly_text():
    assert format_poly(P("1 - x - x^2")) == "1 - x - x^2"
    assert format_poly(P("3/2*x")) == "3/2*x"
    assert format_poly(Poly([])) == "0"


@given(polys)
def test_poly_text_round_trip(p):
    assert parse_poly(format_poly(p)) == p


@given(fracs)
def test_frac_text_round_trip(f):
    assert parse_frac(format_frac(f)) == f


def test_frac_text_scales_to_unit_constant():
    assert format_frac(Frac(X, P("1 - x - x^2"))) == "x/(1 - x - x^2)"
    assert format_frac(Frac(1, P("2 - x"))) == "(1/2)/(1 - 1/2*x)"


def test_json_is_normalized():
    f = Frac(X, P("1 - x - x^2"))
    assert frac_to_json(f) == {"num": ["0", "-1"], "den": ["-1", "1", "1"]}
    assert frac_from_json({"num": ["0", "2"], "den": ["2", "-2", "-2"]}) == f


@given(fracs)
def test_json_round_trip(f):
    assert frac_from_json(frac_to_json(f)) == f


def test_rat_coercion():
    assert rat("3/6") == mpq(1, 2)
    with pytest.raises(ZeroDenominator):
        rat("1/0")
