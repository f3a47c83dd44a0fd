from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fuchsian_forge.errors import NonSquarefree
from fuchsian_forge.exact import (
    RealInterval,
    UniPoly,
    count_real_roots,
    frac_str,
    is_squarefree,
    isolate_real_roots,
    parse_frac,
    parse_poly,
    poly_gcd,
    poly_xgcd,
    rational_sqrt,
    refine_root,
    root_bound,
    sign_variations,
    sturm_sequence,
)

from .conftest import small_fraction

X = UniPoly.x()


def P(text: str) -> UniPoly:
    return parse_poly(text)


# --- rationals -------------------------------------------------------------

def test_frac_str_round_trip():
    assert frac_str(Fraction(3, 1)) == "3"
    assert frac_str(Fraction(-6, 4)) == "-3/2"
    assert parse_frac("-3/2") == Fraction(-3, 2)
    assert parse_frac("0") == Fraction(0)
    with pytest.raises(TypeError):
        parse_frac(0.5)


# --- polynomials -----------------------------------------------------------

def test_poly_basics():
    p = P("x^2 - 2")
    assert p.coeffs == (-2, 0, 1)
    assert p.degree == 2 and p.lc == 1
    assert UniPoly().degree == -1 and UniPoly().is_zero()
    assert UniPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert p(Fraction(3, 2)) == Fraction(1, 4)
    assert p.derivative() == 2 * X
    assert str(P("x^3 - x - 1")) != ""


def test_parse_poly_forms():
    assert P("1/2*x + 3") == UniPoly([3, Fraction(1, 2)])
    assert P("(x+1)**2") == UniPoly([1, 2, 1])
    assert P("-x") == UniPoly([0, -1])
    assert P("7") == UniPoly([7])
    for bad in ("y + 1", "x/x", "x^(1/2)", "1.5*x", "x +"):
        with pytest.raises(ValueError):
            P(bad)


def test_divmod_and_compose():
    q, r = divmod(P("x^3 - x - 1"), P("x - 2"))
    assert q * P("x - 2") + r == P("x^3 - x - 1")
    assert r.degree < 1
    assert P("x^2").compose(P("x + 1")) == P("x^2 + 2*x + 1")
    assert UniPoly.from_roots([1, -1]) == P("x^2 - 1")


@pytest.mark.parametrize(
    "p, q, g",
    [("x^2-1", "x-1", "x-1"), ("x^2-2", "x^2-3", "1"), ("x^3-x", "x^2", "x")],
)
def test_poly_gcd_examples(p, q, g):
    assert poly_gcd(P(p), P(q)) == P(g)


def test_poly_gcd_with_zero():
    assert poly_gcd(P("2*x - 4"), UniPoly()) == P("x - 2")


@given(
    st.lists(small_fraction(), min_size=1, max_size=5),
    st.lists(small_fraction(), min_size=1, max_size=5),
)
def test_xgcd_bezout(a, b):
    p, q = UniPoly(a), UniPoly(b)
    if p.is_zero() and q.is_zero():
        return
    g, s, t = poly_xgcd(p, q)
    assert s * p + t * q == g
    assert g == poly_gcd(p, q)
    if not p.is_zero():
        assert (p % g).is_zero()
    if not q.is_zero():
        assert (q % g).is_zero()


def test_squarefree():
    assert is_squarefree(P("x^2 - 2"))
    assert not is_squarefree(P("(x-1)^2*(x+2)"))


# --- real roots ------------------------------------------------------------

def test_isolate_x2_minus_2():
    ivs = isolate_real_roots(P("x^2 - 2"))
    assert len(ivs) == 2
    assert RealInterval(-2, -1).contains(ivs[0])
    assert RealInterval(1, 2).contains(ivs[1])


def test_isolate_no_real_roots():
    assert isolate_real_roots(P("x^2 + 1")) == []


def test_isolate_exact_roots_are_degenerate():
    ivs = isolate_real_roots(P("x^3 - x"))
    assert ivs == [RealInterval(-1), RealInterval(0), RealInterval(1)]


def test_isolate_cubic_in_unit_interval():
    assert isolate_real_roots(P("x^3 - x - 1")) == [RealInterval(1, 2)]


def test_isolate_rejects_nonsquarefree():
    with pytest.raises(NonSquarefree):
        isolate_real_roots(P("(x-1)^2"))


def test_refine_root_examples():
    p = P("x^2 - 2")
    assert refine_root(RealInterval(1, 2), p, Fraction(1, 2)) == RealInterval(Fraction(5, 4), Fraction(3, 2))
    assert refine_root(RealInterval(-2, -1), p, Fraction(1, 2)) == RealInterval(Fraction(-3, 2), Fraction(-5, 4))
    assert refine_root(RealInterval(0, 2), P("x - 1"), Fraction(1, 1000)) == RealInterval(1)


@st.composite
def squarefree_polys(draw):
    coeffs = draw(st.lists(st.integers(-9, 9), min_size=2, max_size=7))
    p = UniPoly(coeffs)
    if p.degree < 1:
        p = p + X
    g = poly_gcd(p, p.derivative())
    p = p // g
    return p


@given(squarefree_polys())
def test_isolation_matches_sturm_count(p):
    ivs = isolate_real_roots(p)
    seq = sturm_sequence(p)
    b = root_bound(p)
    assert len(ivs) == sign_variations(seq, -b) - sign_variations(seq, b) == count_real_roots(p)
    for a, c in zip(ivs, ivs[1:]):
        assert a.hi < c.lo
    for iv in ivs:
        if iv.is_degenerate():
            assert p(iv.lo) == 0
        else:
            assert p(iv.lo) * p(iv.hi) < 0


@given(squarefree_polys(), st.integers(1, 40))
def test_refine_root_monotone(p, k):
    for iv in isolate_real_roots(p):
        width = Fraction(1, 2**k)
        out = refine_root(iv, p, width)
        assert iv.contains(out)
        assert out.width <= width
        if not out.is_degenerate():
            assert p(out.lo) * p(out.hi) < 0
        # one bisection step at least halves the width
        if not iv.is_degenerate():
            step = refine_root(iv, p, iv.width)
            assert step.width <= iv.width / 2


# --- intervals -------------------------------------------------------------

@st.composite
def interval_and_point(draw):
    lo = draw(small_fraction(20, 8))
    w = draw(small_fraction(20, 8).map(abs))
    iv = RealInterval(lo, lo + w)
    t = draw(st.fractions(0, 1, max_denominator=50))
    return iv, iv.lo + t * iv.width


@given(interval_and_point(), interval_and_point())
def test_interval_containment(a, b):
    (iv, x), (jv, y) = a, b
    assert (iv + jv).contains(x + y)
    assert (iv - jv).contains(x - y)
    assert (iv * jv).contains(x * y)
    assert (-iv).contains(-x)
    assert (iv ** 2).contains(x * x)
    assert (iv ** 3).contains(x ** 3)
    if jv.sign() not in (None, 0):
        assert jv.inverse().contains(1 / y)
        assert (iv / jv).contains(x / y)
    if iv.lo >= 0:
        assert _sqrt_in(iv.sqrt(30), x)
    assert iv.round_out(10).contains(iv)


def _sqrt_in(iv: RealInterval, x: Fraction) -> bool:
    return iv.lo * iv.lo <= x <= iv.hi * iv.hi and iv.lo >= 0


def test_interval_sqrt_brackets():
    iv = RealInterval(2).sqrt(64)
    assert iv.lo ** 2 <= 2 <= iv.hi ** 2
    assert iv.width <= Fraction(1, 2**63)
    with pytest.raises(ValueError):
        RealInterval(-1, 1).sqrt(10)


def test_interval_sign_and_json():
    assert RealInterval(1, 2).sign() == 1
    assert RealInterval(-2, -1).sign() == -1
    assert RealInterval(0).sign() == 0
    assert RealInterval(-1, 1).sign() is None
    with pytest.raises(ZeroDivisionError):
        RealInterval(-1, 1).inverse()
    with pytest.raises(ValueError):
        RealInterval(2, 1)
    iv = RealInterval(Fraction(-1, 3), Fraction(5, 7))
    assert RealInterval.from_json(iv.to_json()) == iv
    assert iv.to_json() == ["-1/3", "5/7"]


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-4)) is None


def test_poly_json_round_trip():
    p = P("1/3*x^2 - 5")
    assert p.to_json() == ["-5", "0", "1/3"]
    assert UniPoly.from_json(p.to_json()) == p
