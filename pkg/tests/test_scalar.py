from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffgalois.errors import ParseError, PoleError
from diffgalois.scalar import (
    RatFunc,
    UniPoly,
    eval_at_integer,
    factor,
    integer_roots,
    parse_ratfunc,
    parse_unipoly,
    poly_gcd,
    rational_roots,
)
from strategies import ratfuncs, small_ints, unipolys

X = UniPoly.x()


def test_factor_difference_of_squares():
    f = factor(parse_unipoly("x^2 - 1"))
    assert f.unit == 1
    assert [p for p, _ in f.factors] == [X - 1, X + 1]


def test_factor_product_of_consecutive():
    f = factor(X * (X + 1))
    assert f.unit == 1 and dict(f.factors) == {X: 1, X + 1: 1}


def test_factor_irreducible_quadratic():
    f = factor(parse_unipoly("x^2+1"))
    assert f.factors == ((parse_unipoly("x^2+1"), 1),)
    assert rational_roots(parse_unipoly("x^2+1")) == []


def test_factor_rational_function_with_unit():
    f = factor(parse_ratfunc("-3*x/(2*(x+1)^2)"))
    assert f.unit == Fraction(-3, 2)
    assert dict(f.factors) == {X: 1, X + 1: -2}


@pytest.mark.parametrize("p, m, expected", [("x", 1, "x+1"), ("x-3", 3, "x"), ("x^2", 2, "x^2+4*x+4")])
def test_shift_examples(p, m, expected):
    assert parse_unipoly(p).shift(m) == parse_unipoly(expected)


@pytest.mark.parametrize("p, roots", [("x*(x-3)", [0, 3]), ("x^2+1", []), ("2*x-1", [])])
def test_integer_roots_examples(p, roots):
    assert integer_roots(parse_unipoly(p)) == roots


def test_eval_at_integer_examples():
    assert eval_at_integer(parse_ratfunc("1/x"), 2) == Fraction(1, 2)
    assert eval_at_integer(parse_ratfunc("x/(x+1)"), 1) == Fraction(1, 2)
    with pytest.raises(PoleError):
        eval_at_integer(parse_ratfunc("1/x"), 0)


def test_parse_errors():
    for bad in ["x +", "(x", "x ^ y", "y", "1/0", ""]:
        with pytest.raises((ParseError, ZeroDivisionError)):
            parse_ratfunc(bad)


def test_denominator_normalised_monic():
    f = parse_ratfunc("1/(2*x+4)")
    assert f.den == X + 2 and f.num == UniPoly([Fraction(1, 2)])


@given(unipolys(nonzero=True))
def test_factor_expands_back(p):
    if p.is_zero():
        return
    assert factor(p).expand() == RatFunc(p)


@given(unipolys(), small_ints, small_ints)
def test_shift_composes(p, a, b):
    assert p.shift(a).shift(b) == p.shift(a + b)


@given(st.lists(small_ints, min_size=1, max_size=4), st.integers(1, 3))
def test_integer_roots_match_scan(roots, lead):
    p = UniPoly([lead])
    for r in roots:
        p = p * (X - r)
    p = p * (X * X + 1)
    bound = max(abs(c) for c in p.coeffs) + 1
    scanned = sorted(i for i in range(-int(bound), int(bound) + 1) if p(i) == 0)
    assert integer_roots(p) == scanned == sorted(set(roots))


@given(ratfuncs(), ratfuncs(), ratfuncs())
@settings(max_examples=60)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(ratfuncs(), ratfuncs(), small_ints)
@settings(max_examples=60)
def test_shift_is_ring_homomorphism(a, b, m):
    assert (a * b).shift(m) == a.shift(m) * b.shift(m)
    assert (a + b).shift(m) == a.shift(m) + b.shift(m)


@given(unipolys(nonzero=True), unipolys(nonzero=True))
def test_gcd_divides(a, b):
    if a.is_zero() or b.is_zero():
        return
    g = poly_gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()


@given(ratfuncs())
@settings(max_examples=60)
def test_text_round_trip(f):
    assert parse_ratfunc(str(f)) == f
