"""Hypergeometric solutions of scalar recurrences and first-order systems.

Everything works with a step ``delta``: a certificate r describes the class
of h with sigma^delta(h) = r*h, where sigma^delta shifts x by delta.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import ExtensionNeeded
from .lattice import shift_offset, shift_quotient_witness
from .linalg import inverse as mat_inverse, mat_vec, nullspace
from .scalar import (
    ONE_POLY,
    R_ONE,
    R_ZERO,
    RatFunc,
    UniPoly,
    factor,
    integer_roots,
    poly_gcd,
    poly_lcm,
)
from .system import ScalarOperator, cyclic_vector_scalarize

log = logging.getLogger(__name__)

__all__ = [
    "HyperCertificate",
    "SystemHyperSolution",
    "petkovsek",
    "polynomial_solutions",
    "rational_solutions",
    "scalar_rational_solutions",
    "system_hyper_solutions",
    "similar_certificates",
]


@dataclass(frozen=True)
class HyperCertificate:
    r: RatFunc
    step: int = 1

    def __post_init__(self):
        if not self.r:
            raise ValueError("certificate must be nonzero")

    def __str__(self):
        return str(self.r)


@dataclass(frozen=True)
class SystemHyperSolution:
    """c*h with sigma^step(h) = r*h solving sigma^step(Y) = M Y."""

    c: tuple
    certificate: HyperCertificate
    M: tuple = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if not any(self.c):
            raise ValueError("solution vector must be nonzero")
        if self.M:
            check_system_solution(self.M, self.c, self.certificate)


def check_system_solution(M, c, cert: HyperCertificate) -> None:
    lhs = [ci.shift(cert.step) * cert.r for ci in c]
    rhs = mat_vec([list(row) for row in M], list(c))
    if any(a != b for a, b in zip(lhs, rhs)):
        raise AssertionError("hypergeometric solution identity fails")


def similar_certificates(r1: RatFunc, r2: RatFunc, step: int) -> bool:
    """True when r1/r2 = g(x+step)/g(x) for some nonzero rational g."""
    return shift_quotient_witness(RatFunc.coerce(r1) / RatFunc.coerce(r2), step) is not None


# ---------------------------------------------------------------------------
# polynomial solutions
# ---------------------------------------------------------------------------


def _falling(N: UniPoly, k: int) -> UniPoly:
    out = ONE_POLY
    for i in range(k):
        out = out * (N - i)
    return out


def polynomial_degree_bound(coeffs: Sequence[UniPoly], step: int) -> int:
    """Upper bound on deg C for sum_t coeffs[t](x) C(x + t*step) = 0; -1 if none."""
    l = len(coeffs) - 1
    R = []
    for k in range(l + 1):
        s = UniPoly(())
        for t in range(k, l + 1):
            if coeffs[t]:
                s = s + coeffs[t] * comb(t, k)
        R.append(s)
    b = max(r.degree - k for k, r in enumerate(R) if r)
    N = UniPoly((0, 1))
    phi = UniPoly(())
    for k, r in enumerate(R):
        if r and r.degree - k == b:
            phi = phi + _falling(N, k) * (r.lc * Fraction(step) ** k)
    roots = [z for z in integer_roots(phi) if z >= 0] if phi.degree > 0 else []
    return max(roots, default=-1)


def polynomial_solutions(coeffs: Sequence[UniPoly], step: int = 1) -> list:
    """Q-basis of polynomials C with sum_t coeffs[t](x) C(x + t*step) = 0.

    Basis elements are sorted by degree and reduced against each other.
    """
    coeffs = [UniPoly(c.coeffs) if isinstance(c, UniPoly) else UniPoly((c,)) for c in coeffs]
    if not any(coeffs):
        raise ValueError("zero operator")
    N = polynomial_degree_bound(coeffs, step)
    if N < 0:
        return []
    images = []
    for i in range(N + 1):
        mono = UniPoly((0,) * i + (1,))
        acc = UniPoly(())
        for t, a in enumerate(coeffs):
            if a:
                acc = acc + a * mono.shift(t * step)
        images.append(acc)
    height = max((p.degree for p in images), default=0) + 1
    # unknowns ordered from high degree to low so the kernel basis has distinct degrees
    cols = list(range(N, -1, -1))
    rows = [[images[i].coeffs[e] if e < len(images[i].coeffs) else 0 for i in cols] for e in range(height)]
    kernel = nullspace(rows, N + 1, one=Fraction(1))
    sols = []
    for v in kernel:
        p = UniPoly([v[cols.index(i)] for i in range(N + 1)])
        sols.append(p.monic())
    sols.sort(key=lambda p: p.degree)
    return sols


# ---------------------------------------------------------------------------
# Petkovsek
# ---------------------------------------------------------------------------


def _monic_divisors(p: UniPoly):
    fr = factor(p)
    choices = [[(q, k) for k in range(e + 1)] for q, e in fr.factors]
    for pick in itertools.product(*choices):
        d = ONE_POLY
        for q, k in pick:
            if k:
                d = d * q**k
        yield d


def _rational_z_roots(poly: UniPoly, strict: bool, diagnostics):
    fr = factor(poly)
    roots = []
    for q, _ in fr.factors:
        if q.degree == 1:
            z = -q.coeffs[0]
            if z != 0:
                roots.append(z)
        else:
            msg = f"constant candidates need roots of {q}"
            if strict:
                raise ExtensionNeeded(msg, [q])
            if diagnostics is not None:
                diagnostics.append(str(q))
            log.info(msg)
    return roots


def petkovsek(L: ScalarOperator, *, strict: bool = False, diagnostics: list | None = None) -> list:
    """Hypergeometric certificates over Q(x) of L = sum a_t(x) E^{t*step}.

    One certificate per shift-quotient class, sorted by text.  Classes whose
    constant part is irrational are skipped (listed in ``diagnostics``), or
    raise ExtensionNeeded when ``strict``.
    """
    a = [UniPoly(c.coeffs) for c in L.coeffs]
    delta = L.step
    l = len(a) - 1
    if l < 1:
        raise ValueError("operator of order >= 1 required")
    if not a[0] or not a[-1]:
        raise ValueError("leading and trailing coefficients must be nonzero")
    found: list = []
    trail = a[0]
    lead = a[l].shift(-(l - 1) * delta)
    A_list = list(_monic_divisors(trail))
    B_list = list(_monic_divisors(lead))
    for A in A_list:
        A_shifts = [A.shift(j * delta) for j in range(l)]
        for B in B_list:
            B_shifts = [B.shift(j * delta) for j in range(l)]
            P = []
            for t in range(l + 1):
                p = a[t]
                for j in range(t):
                    p = p * A_shifts[j]
                for j in range(t, l):
                    p = p * B_shifts[j]
                P.append(p)
            D = max(p.degree for p in P if p)
            zpoly = UniPoly([P[t].lc if P[t] and P[t].degree == D else 0 for t in range(l + 1)])
            if zpoly.degree < 1:
                continue
            for z in _rational_z_roots(zpoly, strict, diagnostics):
                Q = [p * (z**t) for t, p in enumerate(P)]
                sols = polynomial_solutions(Q, delta)
                if not sols:
                    continue
                C = sols[0]
                r = RatFunc(A * z, B) * RatFunc(C.shift(delta), C)
                if not any(similar_certificates(r, s.r, delta) for s in found):
                    found.append(HyperCertificate(r, delta))
    found.sort(key=lambda c: (c.r.num.degree + c.r.den.degree, str(c.r)))
    return found


# ---------------------------------------------------------------------------
# rational solutions
# ---------------------------------------------------------------------------


def _dispersion_set(A: UniPoly, B: UniPoly) -> list:
    """Nonnegative h with gcd(A(x), B(x+h)) nontrivial."""
    if A.degree < 1 or B.degree < 1:
        return []
    hs = set()
    for p, _ in factor(A).factors:
        for q, _ in factor(B).factors:
            m = shift_offset(q, p, 1)  # p(x) = q(x + m)
            if m is not None and m >= 0:
                hs.add(m)
    return sorted(hs, reverse=True)


def universal_denominator(coeffs: Sequence[UniPoly]) -> UniPoly:
    """Abramov denominator bound for rational solutions of a step-1 operator."""
    l = len(coeffs) - 1
    A = coeffs[l].shift(-l).monic()
    B = coeffs[0].monic()
    U = ONE_POLY
    for h in _dispersion_set(A, B):
        d = poly_gcd(A, B.shift(h))
        if d.degree < 1:
            continue
        A = A.exact_div(d)
        B = B.exact_div(d.shift(-h))
        for i in range(h + 1):
            U = U * d.shift(-i)
    return U


def scalar_rational_solutions(L: ScalarOperator) -> list:
    """Q-basis of rational solutions of a step-1 operator."""
    if L.step != 1:
        raise ValueError("step-1 operator required")
    coeffs = [UniPoly(c.coeffs) for c in L.coeffs]
    U = universal_denominator(coeffs)
    l = len(coeffs) - 1
    dens = [U.shift(t) for t in range(l + 1)]
    common = ONE_POLY
    for d in dens:
        common = poly_lcm(common, d)
    Q = [coeffs[t] * common.exact_div(dens[t]) for t in range(l + 1)]
    return [RatFunc(p, U) for p in polynomial_solutions(Q, 1)]


def _scaled_matrix(M, delta):
    return [[RatFunc.coerce(a).scale_arg(delta) for a in row] for row in M]


def rational_solutions(M: Sequence[Sequence[RatFunc]], delta: int = 1) -> list:
    """Q-basis of rational vectors c with c(x + delta) = M(x) c(x)."""
    n = len(M)
    M = [[RatFunc.coerce(a) for a in row] for row in M]
    if delta != 1:
        # x = delta*u turns the step-delta equation into a step-1 one
        sols = rational_solutions(_scaled_matrix(M, delta), 1)
        inv = Fraction(1, delta)
        return [tuple(c.scale_arg(inv) for c in v) for v in sols]
    blocks = _blocks(M)
    if len(blocks) > 1:
        out = []
        for blk in blocks:
            sub = [[M[i][j] for j in blk] for i in blk]
            for v in rational_solutions(sub, 1):
                full = [R_ZERO] * n
                for i, val in zip(blk, v):
                    full[i] = val
                out.append(tuple(full))
        return out
    if n == 1:
        # c(x+1) = m c(x)  <=>  den(x) c(x+1) - num(x) c(x) = 0
        m = M[0][0]
        L = ScalarOperator((-m.num, m.den), 1)
        return [(y,) for y in scalar_rational_solutions(L)]
    L, gauge = cyclic_vector_scalarize(M, 1)
    ys = scalar_rational_solutions(L)
    T_inv = mat_inverse(gauge)
    out = []
    for y in ys:
        vec = [y.shift(i) for i in range(n)]
        c = tuple(mat_vec(T_inv, vec))
        out.append(c)
    for c in out:
        check_system_solution(M, c, HyperCertificate(R_ONE, 1))
    return out


def _blocks(M) -> list:
    """Index sets of the connected components of the nonzero pattern of M."""
    n = len(M)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(n):
            if i != j and M[i][j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


def _primitive_vector(c):
    """Rescale a rational vector to coprime polynomial entries; returns (w, g) with c = w*g."""
    den = ONE_POLY
    for v in c:
        if v:
            den = poly_lcm(den, v.den)
    polys = [(v * RatFunc.coerce(den)).num if v else UniPoly(()) for v in c]
    g = UniPoly(())
    for p in polys:
        if p:
            g = poly_gcd(g, p) if g else p.monic()
    w = [p.exact_div(g) if p else p for p in polys]
    lc = next(p for p in w if p).lc  # first nonzero entry made monic
    w = [RatFunc.coerce(p * (1 / lc)) if p else R_ZERO for p in w]
    return w, RatFunc(g * lc, den)


def system_hyper_solutions(M: Sequence[Sequence[RatFunc]], delta: int = 1, *, strict: bool = False,
                           diagnostics: list | None = None) -> list:
    """Hypergeometric solutions c*h of sigma^delta(Y) = M Y over Q(x).

    Returns, for every certificate class, a Q-basis of the rational vectors
    solving sigma^delta(c) * r = M c.  Vectors are primitive polynomial
    vectors and the certificate is adjusted accordingly.
    """
    n = len(M)
    M = [[RatFunc.coerce(a) for a in row] for row in M]
    Mt = tuple(tuple(row) for row in M)
    out: list = []
    for blk in _blocks(M):
        sub = [[M[i][j] for j in blk] for i in blk]
        if len(blk) == 1:
            certs = [HyperCertificate(sub[0][0], delta)]
        else:
            L, _ = cyclic_vector_scalarize(sub, delta)
            certs = petkovsek(L, strict=strict, diagnostics=diagnostics)
        for cert in certs:
            scaled = [[a / cert.r for a in row] for row in sub]
            for v in rational_solutions(scaled, delta):
                full = [R_ZERO] * n
                for i, val in zip(blk, v):
                    full[i] = val
                w, g = _primitive_vector(full)
                # c = w*g, so sigma(w) * r * sigma(g)/g = M w
                r = cert.r * g.shift(delta) / g
                out.append(SystemHyperSolution(tuple(w), HyperCertificate(r, delta), Mt))
    out.sort(key=_solution_key)
    return out


def _solution_key(s: SystemHyperSolution):
    first = next(i for i, v in enumerate(s.c) if v)
    return (first, str(s.certificate.r), [str(v) for v in s.c])
