from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffgalois.errors import ExtensionNeeded
from diffgalois.hypergeom import (
    petkovsek,
    polynomial_solutions,
    rational_solutions,
    similar_certificates,
    system_hyper_solutions,
)
from diffgalois.linalg import mat_vec
from diffgalois.scalar import R_ONE, R_ZERO, RatFunc, UniPoly, parse_ratfunc, parse_unipoly
from diffgalois.system import ScalarOperator

R = parse_ratfunc
P = parse_unipoly


def op(*coeffs, step=1):
    return ScalarOperator(tuple(P(c) if isinstance(c, str) else UniPoly([c]) for c in coeffs), step)


def certificate_annihilated(L, r):
    """sum_t a_t(x) * prod_{j<t} r(x + j*step) == 0 as a rational function."""
    total, prod = R_ZERO, R_ONE
    for t, a in enumerate(L.coeffs):
        total = total + prod * RatFunc.coerce(a)
        prod = prod * r.shift(t * L.step)
    return not total


def diag(*entries):
    n = len(entries)
    return [[R(entries[i]) if i == j else R_ZERO for j in range(n)] for i in range(n)]


def test_petkovsek_step_three():
    # E^3 - (x + 2)
    L = ScalarOperator((P("-x-2"), UniPoly(()), UniPoly(()), P("1")), 1)
    L3 = ScalarOperator((P("-x-2"), P("1")), 3)
    certs = petkovsek(L3)
    assert [str(c.r) for c in certs] == ["x+2"]
    assert L.order == 3


def test_petkovsek_first_order_returns_its_class():
    L = op("-x^2-x", "2")
    certs = petkovsek(L)
    assert len(certs) == 1
    assert similar_certificates(certs[0].r, R("(x^2+x)/2"), 1)


def test_petkovsek_fibonacci_needs_extension():
    L = op(-1, -1, 1)
    diagnostics = []
    assert petkovsek(L, diagnostics=diagnostics) == []
    assert diagnostics
    with pytest.raises(ExtensionNeeded):
        petkovsek(L, strict=True)


def test_polynomial_solutions_examples():
    # x*C(x+1) - (x+1)*C(x) = 0 has C = x
    sols = polynomial_solutions([P("-x-1"), P("x")], 1)
    assert sols == [P("x")]
    # C(x+1) - C(x) = 0: constants only
    assert polynomial_solutions([P("-1"), P("1")], 1) == [P("1")]
    # C(x+2) - C(x) - 2 = inhomogeneous shape not allowed; C(x+1) - 2 C(x): none
    assert polynomial_solutions([P("-2"), P("1")], 1) == []


def test_rational_solutions_examples():
    assert rational_solutions([[R_ONE]], 1) == [(R_ONE,)]
    assert rational_solutions([[R("x/(x+1)")]], 1) == [(R("1/x"),)]
    assert rational_solutions([[R("2")]], 1) == []


def test_rational_solutions_step_two():
    # c(x+2) = x/(x+2) c(x): c = 1/x
    sols = rational_solutions([[R("x/(x+2)")]], 2)
    assert len(sols) == 1
    c = sols[0][0]
    assert c.shift(2) == R("x/(x+2)") * c


def test_rational_solutions_coupled_block():
    M = [[R_ONE, R("1/(x*(x+1))")], [R_ZERO, R_ONE]]
    sols = rational_solutions(M, 1)
    for c in sols:
        assert [v.shift(1) for v in c] == mat_vec(M, list(c))
    # (1, 0) and (-1/x, 1) solve it
    assert len(sols) == 2


def test_system_solutions_two_coset_quotient():
    # inverse of the shift-matrix on the slice {y12, y21, y33} at step 2
    M = diag("1/x", "1/(x+1)", "x^2+x")
    sols = system_hyper_solutions(M, 2)
    certs = sorted(str(s.certificate.r) for s in sols)
    assert certs == sorted(["1/x", "1/(x+1)", "x^2+x"])
    for s in sols:
        assert sum(1 for v in s.c if v) == 1


def test_system_solutions_identity():
    sols = system_hyper_solutions(diag("1", "1", "1"), 1)
    assert len(sols) == 3 and all(s.certificate.r == R_ONE for s in sols)


def test_system_solutions_cyclic_slice():
    sols = system_hyper_solutions(diag("1/x", "1/(x+1)", "1/(x+2)"), 3)
    assert sorted(str(s.certificate.r) for s in sols) == ["1/(x+1)", "1/(x+2)", "1/x"]


def test_system_solutions_jordan_block():
    M = [[R_ONE, R_ONE], [R_ZERO, R_ONE]]
    sols = system_hyper_solutions(M, 1)
    assert [tuple(str(v) for v in s.c) for s in sols] == [("1", "0"), ("x", "1")] or len(sols) == 2


def test_system_solutions_coupled_needs_petkovsek():
    # companion of E^2 - (2x+3)E + (x+1)^2 ... built from two hypergeometric classes x and x+1
    r1, r2 = R("x"), R("x+1")
    a1 = -(r1.shift(1) + r2)
    a0 = r2 * r1
    M = [[R_ZERO, R_ONE], [-a0, -a1]]
    sols = system_hyper_solutions(M, 1)
    assert sols
    for s in sols:
        assert [v.shift(1) * s.certificate.r for v in s.c] == mat_vec(M, list(s.c))
    assert any(similar_certificates(s.certificate.r, r1, 1) for s in sols)


def _pairwise_not_similar(sols, delta):
    for i, a in enumerate(sols):
        for b in sols[i + 1:]:
            if not similar_certificates(a.certificate.r, b.certificate.r, delta):
                continue
            # same class: vectors must not be proportional over Q(x)
            k = next(j for j, v in enumerate(a.c) if v)
            if b.c[k]:
                ratio = a.c[k] / b.c[k]
                assert any(x != ratio * y for x, y in zip(a.c, b.c))


@given(st.lists(st.sampled_from(["x", "x+1", "2", "1/x", "x^2+1", "-1", "(x+3)/(x+1)"]), min_size=1, max_size=3),
       st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_diagonal_solutions_verify(entries, delta):
    sols = system_hyper_solutions(diag(*entries), delta)
    assert len(sols) == len(entries)
    _pairwise_not_similar(sols, delta)


linear_factors = st.sampled_from(["x", "x+1", "x+2", "x-1", "2*x+1", "3", "-2", "1/2"])


@given(linear_factors, linear_factors, linear_factors)
@settings(max_examples=30, deadline=None)
def test_petkovsek_finds_right_factor(a, b, c):
    r1 = R(a) * R(b)
    r2 = R(c)
    # (E - r2)(E - r1) = E^2 - (r1(x+1) + r2) E + r2 r1, cleared of denominators
    coeffs = [r2 * r1, -(r1.shift(1) + r2), R_ONE]
    den = UniPoly([1])
    for v in coeffs:
        den = den * v.den
    L = ScalarOperator(tuple((v * RatFunc.coerce(den)).num for v in coeffs), 1)
    certs = petkovsek(L)
    for cert in certs:
        assert certificate_annihilated(L, cert.r)
    assert any(similar_certificates(cert.r, r1, 1) for cert in certs)
