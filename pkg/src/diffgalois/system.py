"""First-order difference systems ``sigma(Y) = A Y`` over Q(x).

Covers germ-sequence solutions, the shift action on polynomials in the
matrix entries ``Y``, annihilating operators for monomial sequences, cyclic
vectors and exterior powers.
"""

from __future__ import annotations

import itertools
import logging

import flint
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .groebner import QQ, QQX, GREVLEX, Poly, Ring
from .linalg import det as mat_det, identity, inverse as mat_inverse, mat_mul
from .scalar import (
    ONE_POLY,
    R_ONE,
    R_X,
    R_ZERO,
    RatFunc,
    UniPoly,
    eval_at,
    from_flint,
    integer_roots,
    parse_ratfunc,
    poly_gcd,
    poly_lcm,
    to_flint,
)

log = logging.getLogger(__name__)


def variable_names(n: int) -> list:
    if n < 10:
        return [f"y{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    return [f"y{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]


class DifferenceSystem:
    """``sigma(Y) = A Y`` with ``A`` an invertible n x n matrix over Q(x)."""

    def __init__(self, A: Sequence[Sequence]):
        self.A = [[RatFunc.coerce(a) if not isinstance(a, str) else parse_ratfunc(a) for a in row] for row in A]
        self.n = len(self.A)
        if any(len(row) != self.n for row in self.A):
            raise ValueError("matrix must be square")
        self.det = mat_det(self.A)
        if not self.det:
            raise ValueError("matrix is singular over Q(x)")
        self._powers = {1: self.A}

    @classmethod
    def parse(cls, rows: Sequence[Sequence[str]]) -> "DifferenceSystem":
        return cls([[parse_ratfunc(str(a)) for a in row] for row in rows])

    def to_json(self) -> dict:
        return {"n": self.n, "A": [[str(a) for a in row] for row in self.A]}

    def __repr__(self):
        return f"DifferenceSystem({[[str(a) for a in row] for row in self.A]})"

    def is_constant(self) -> bool:
        return all(a.is_constant() for row in self.A for a in row)

    def shifted(self, m: int):
        return [[a.shift(m) for a in row] for row in self.A]

    def power_matrix(self, delta: int):
        """``A_delta = sigma^{delta-1}(A) ... sigma(A) A`` so that sigma^delta(Y) = A_delta Y."""
        if delta < 1:
            raise ValueError("delta must be positive")
        if delta not in self._powers:
            prev = self.power_matrix(delta - 1)
            self._powers[delta] = mat_mul(self.shifted(delta - 1), prev)
        return self._powers[delta]

    def at(self, i: int):
        return [[eval_at(a, i) for a in row] for row in self.A]

    def ring(self, field: str = QQX, order=GREVLEX) -> Ring:
        return Ring(variable_names(self.n), order, field)

    def det_poly(self, ring: Ring) -> Poly:
        """det(Y) in ``ring`` (whose first n^2 variables are the entries of Y)."""
        return det_of_variables(ring, self.n)


def det_of_variables(ring: Ring, n: int, offset: int = 0) -> Poly:
    """Determinant of the n x n matrix of ring variables starting at ``offset``."""
    total = ring.const(0)
    for perm in itertools.permutations(range(n)):
        term = ring.const(_perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * ring.var(offset + i * n + j)
        total = total + term
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# germ sequences
# ---------------------------------------------------------------------------


def choose_rho(S: DifferenceSystem) -> int:
    """Least rho >= 0 with no poles of A and det A(i) != 0 for every i >= rho."""
    bad = []
    for row in S.A:
        for a in row:
            if a.den.degree > 0:
                bad.extend(integer_roots(a.den))
    if S.det.num.degree > 0:
        bad.extend(integer_roots(S.det.num))
    if S.det.den.degree > 0:
        bad.extend(integer_roots(S.det.den))
    return max([b + 1 for b in bad if b >= 0], default=0)


@dataclass
class GermSequence:
    """Terms Z_rho, Z_{rho+1}, ... with Z_{i+1} = A(i) Z_i."""

    system: DifferenceSystem
    rho: int
    terms: list = field(default_factory=list)

    def term(self, i: int):
        if i < self.rho:
            raise IndexError(f"germ starts at {self.rho}")
        self.extend(i - self.rho + 1)
        return self.terms[i - self.rho]

    def extend(self, count: int):
        while len(self.terms) < count:
            i = self.rho + len(self.terms) - 1
            self.terms.append(mat_mul(self.system.at(i), self.terms[-1]))


def germ_terms(S: DifferenceSystem, rho: int | None = None, count: int = 1, Z_rho=None) -> GermSequence:
    if rho is None:
        rho = choose_rho(S)
    if rho < choose_rho(S):
        raise ValueError(f"rho={rho} is below the admissible start {choose_rho(S)}")
    if Z_rho is None:
        Z_rho = identity(S.n)
    Z_rho = [[Fraction(v) for v in row] for row in Z_rho]
    if not mat_det(Z_rho):
        raise ValueError("initial matrix must be invertible")
    seq = GermSequence(S, rho, [Z_rho])
    seq.extend(count)
    return seq


# ---------------------------------------------------------------------------
# shift action on k[Y]
# ---------------------------------------------------------------------------


def _image_matrix(S: DifferenceSystem, ring: Ring, delta: int):
    """Images of the variables y_ij under sigma^delta (entries of A_delta Y)."""
    n = S.n
    Ad = S.power_matrix(delta)
    images = []
    for i in range(n):
        for j in range(n):
            terms = {}
            for k in range(n):
                c = Ad[i][k]
                if c:
                    e = [0] * ring.nvars
                    e[k * n + j] = 1
                    terms[tuple(e)] = ring.coerce_coeff(c)
            images.append(Poly(ring, terms))
    # extra variables beyond Y are fixed
    for v in range(n * n, ring.nvars):
        images.append(ring.var(v))
    return images


def sigma_poly(P: Poly, S: DifferenceSystem, delta: int = 1) -> Poly:
    """sigma^delta(P): shift coefficients by delta, substitute Y -> A_delta Y."""
    if delta < 1:
        raise ValueError("delta must be positive")
    ring = P.ring
    images = _image_matrix(S, ring, delta)
    if ring.field == QQ:
        return P.substitute(images, ring)
    return P.substitute(images, ring, coeff_map=lambda c: c.shift(delta))


# ---------------------------------------------------------------------------
# scalar operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarOperator:
    """L = sum_t a_t(x) E^{t*step}; ``coeffs[t]`` is a_t."""

    coeffs: tuple
    step: int = 1

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> UniPoly:
        return self.coeffs[-1]

    @property
    def trailing(self) -> UniPoly:
        return self.coeffs[0]

    def apply(self, seq, m: int):
        """(L s)(m) for a sequence given as a callable or indexable."""
        get = seq if callable(seq) else seq.__getitem__
        total = Fraction(0)
        for t, a in enumerate(self.coeffs):
            if a:
                total += a(Fraction(m)) * get(m + t * self.step)
        return total

    def __str__(self):
        parts = []
        for t in range(self.order, -1, -1):
            a = self.coeffs[t]
            if not a:
                continue
            op = "1" if t == 0 else ("E" if t * self.step == 1 else f"E^{t * self.step}")
            parts.append(f"({a})*{op}")
        return " + ".join(parts)


def _clear_denominators(values) -> list:
    """Scale RatFuncs by the lcm of denominators and remove rational content."""
    den = ONE_POLY
    for v in values:
        if v:
            den = poly_lcm(den, v.den)
    polys = [(v * RatFunc.coerce(den)).num if v else UniPoly(()) for v in values]
    from math import gcd, lcm

    d, g = 1, 0
    for p in polys:
        for c in p.coeffs:
            d = lcm(d, c.denominator)
    for p in polys:
        for c in p.coeffs:
            g = gcd(g, int(c * d))
    sign = 1
    last = next((p for p in reversed(polys) if p), None)
    if last is not None and last.lc < 0:
        sign = -1
    scale = Fraction(sign * d, g) if g else Fraction(1)
    return [p * scale for p in polys]


class DependenceFinder:
    """Incremental search for the first Q(x)-linear dependence among vectors.

    Vectors are sparse dicts of ``flint.fmpq_poly``.  Elimination is
    fraction free: rows stay polynomial and their common polynomial gcd is
    divided out after every step.  ``add`` returns ``{index: coefficient}``
    for a relation ``sum c_j v_j = 0`` as soon as the new vector lies in the
    span of the earlier ones, otherwise None.
    """

    def __init__(self):
        self.pivots: list = []  # (key, row, combination) in creation order
        self.count = 0

    def add(self, vec: dict):
        idx = self.count
        self.count += 1
        r = {k: v for k, v in vec.items() if v != 0}
        comb_ = {idx: flint.fmpq_poly([1])}
        for key, prow, pcomb in self.pivots:
            f = r.get(key)
            if f is None:
                continue
            p = prow[key]
            r = _combine(r, p, prow, f)
            comb_ = _combine(comb_, p, pcomb, f)
            r, comb_ = _remove_gcd(r, comb_)
        if not r:
            return comb_
        key = min(r, key=lambda k: (r[k].degree(), k))
        self.pivots.append((key, r, comb_))
        return None


def _combine(r: dict, p, src: dict, f) -> dict:
    """p*r - f*src."""
    out = {k: v * p for k, v in r.items()}
    for k, v in src.items():
        nv = out.get(k, 0) - f * v
        if nv != 0:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _remove_gcd(r: dict, comb_: dict):
    g = None
    for v in itertools.chain(r.values(), comb_.values()):
        g = v if g is None else g.gcd(v)
        if g.degree() == 0:
            return r, comb_
    if g is None:
        return r, comb_
    return {k: v / g for k, v in r.items()}, {k: v / g for k, v in comb_.items()}


def _denominator_lcm(values) -> UniPoly:
    den = ONE_POLY
    for v in values:
        if v:
            den = poly_lcm(den, v.den)
    return den


def _to_poly_vector(vals: dict):
    """Scale a RatFunc vector to polynomials; returns (flint dict, scale)."""
    den = _denominator_lcm(vals.values())
    rd = RatFunc.coerce(den)
    return {k: to_flint((v * rd).num) for k, v in vals.items() if v}, den


def _relation_to_operator(rel: dict, length: int, step: int, multipliers=None) -> ScalarOperator:
    """Primitive integer operator from a relation found on rescaled vectors.

    The relation on the original vectors has coefficient
    ``rel[t] * multipliers[t]`` (both ``flint.fmpq_poly``).
    """
    zero = flint.fmpq_poly([])
    coeffs = []
    for t in range(length):
        c = rel.get(t, zero)
        if multipliers is not None:
            c = c * multipliers[t]
        coeffs.append(c)
    g = zero
    for c in coeffs:
        g = g.gcd(c) if g != 0 else c
    coeffs = [c / g for c in coeffs]
    return ScalarOperator(tuple(_primitive(coeffs)), step)


def _primitive(polys) -> list:
    """Scale flint polynomials to coprime integer coefficients, last leading positive."""
    from math import gcd, lcm

    den, g = 1, 0
    for p in polys:
        for c in p.coeffs():
            den = lcm(den, int(c.q))
    ints = [[int(c * den) for c in p.coeffs()] for p in polys]
    for row in ints:
        for c in row:
            g = gcd(g, c)
    last = next((row for row in reversed(ints) if row), None)
    if last is not None and last[-1] < 0:
        g = -g
    return [UniPoly(Fraction(c, g) for c in row) for row in ints]


# ---------------------------------------------------------------------------
# monomial systems and annihilators
# ---------------------------------------------------------------------------


def monomial_transition(S: DifferenceSystem, d: int, ell: int = 0):
    """Sparse transition matrix of the sequences m^i * Z_m^e (|e| <= d, i <= ell).

    Returns (basis, T) with basis a list of (i, e) and T a dict
    {(row, col): RatFunc} such that u_{m+1} = T(m) u_m.
    """
    ring = S.ring(QQX)
    monos = ring.monomials_up_to(d)
    index = {e: k for k, e in enumerate(monos)}
    images = _image_matrix(S, ring, 1)
    sigma_cols = []
    for e in monos:
        img = ring.const(1)
        for v, k in enumerate(e):
            if k:
                img = img * images[v] ** k
        sigma_cols.append(img)
    basis = [(i, e) for e in monos for i in range(ell + 1)]
    bindex = {b: k for k, b in enumerate(basis)}
    T: dict = {}
    for e, img in zip(monos, sigma_cols):
        for i in range(ell + 1):
            row = bindex[(i, e)]
            for e2, c in img.terms.items():
                for j in range(i + 1):
                    col = bindex[(j, e2)]
                    v = c * comb(i, j)
                    T[(row, col)] = T.get((row, col), R_ZERO) + v
    T = {k: v for k, v in T.items() if v}
    del index
    return basis, T


def _sparse_matmul(A: dict, B: dict) -> dict:
    by_row: dict = {}
    for (k, j), v in B.items():
        by_row.setdefault(k, []).append((j, v))
    out: dict = {}
    for (i, k), a in A.items():
        for j, b in by_row.get(k, ()):
            key = (i, j)
            prev = out.get(key)
            p = a * b
            out[key] = p if prev is None else prev + p
    return {k: v for k, v in out.items() if v != 0}


def monomial_annihilator(S: DifferenceSystem, d: int, ell: int = 0, max_order: int | None = None) -> ScalarOperator:
    """Nonzero operator annihilating every sequence m^i Z_m^e, |e| <= d, i <= ell.

    Finds the first Q(x)-linear dependence among the iterated transition
    products I, T(x), T(x+1)T(x), ...  Such a dependence annihilates every
    solution of the monomial system whatever its initial value.  The search
    runs on the polynomial matrices q(x+t-1)...q(x) * T(x+t-1)...T(x), with q
    the common denominator of T.
    """
    if d < 1 or ell < 0:
        raise ValueError("need d >= 1 and ell >= 0")
    basis, T = monomial_transition(S, d, ell)
    D = len(basis)
    q = _denominator_lcm(T.values())
    qr = RatFunc.coerce(q)
    T_num = {k: to_flint((v * qr).num) for k, v in T.items()}
    bound = max_order if max_order is not None else D * D
    finder = DependenceFinder()
    M = {(i, i): flint.fmpq_poly([1]) for i in range(D)}
    rel = finder.add(M)
    t = 0
    while rel is None:
        t += 1
        if t > bound:
            raise RuntimeError("no dependence found within the order bound")
        shift = flint.fmpq_poly([t - 1, 1])
        M = _sparse_matmul({k: v(shift) for k, v in T_num.items()}, M)
        rel = finder.add(M)
    log.debug("annihilator of order %d for %d monomial sequences", t, D)
    # M_j = q(x)...q(x+j-1) * (true iterate), so the operator coefficient is rel[j] times that product
    qf = to_flint(q)
    mult = [flint.fmpq_poly([1])]
    for s in range(t):
        mult.append(mult[-1] * qf(flint.fmpq_poly([s, 1])))
    return _relation_to_operator(rel, t + 1, 1, mult)


def monomial_system(S: DifferenceSystem, d: int) -> list:
    """Dense matrix of the degree <= d monomial system (columns act on u_m)."""
    basis, T = monomial_transition(S, d, 0)
    D = len(basis)
    return [[T.get((i, j), R_ZERO) for j in range(D)] for i in range(D)]


# ---------------------------------------------------------------------------
# cyclic vectors
# ---------------------------------------------------------------------------


def _cyclic_candidates(n: int):
    yield from ([R_ONE if i == j else R_ZERO for i in range(n)] for j in range(n))
    yield [R_ONE] * n
    yield [RatFunc.coerce(i + 1) for i in range(n)]
    for shift in range(n + 2):
        yield [RatFunc.coerce(UniPoly((shift, 1)) ** i) for i in range(n)]
    for a in range(1, 6):
        yield [RatFunc.coerce(UniPoly((a * i + 1, i + 1)) ** (i + 1)) for i in range(n)]


def cyclic_vector_scalarize(M: Sequence[Sequence[RatFunc]], delta: int = 1):
    """Scalar operator for u = lam·Y when sigma^delta(Y) = M Y.

    Returns (L, gauge) where gauge lists the rows lam_0, ..., lam_{n-1}
    (lam_{i+1} = sigma^delta(lam_i) M) so that sigma^{i delta}(u) = lam_i Y.
    """
    n = len(M)
    M = [[RatFunc.coerce(a) for a in row] for row in M]
    for lam in _cyclic_candidates(n):
        finder = DependenceFinder()
        rows, dens = [], []
        cur = lam
        rel = None
        for i in range(n + 1):
            rows.append(cur)
            vec, den = _to_poly_vector(dict(enumerate(cur)))
            dens.append(den)
            rel = finder.add(vec)
            if rel is not None:
                break
            cur = _row_times(_shift_vec(cur, delta), M)
        if rel is not None and len(rows) == n + 1:
            mult = [to_flint(dd) for dd in dens]
            return _relation_to_operator(rel, n + 1, delta, mult), rows[:n]
    raise RuntimeError("no cyclic vector found in the candidate schedule")


def _shift_vec(v, m):
    return [a.shift(m) for a in v]


def _row_times(v, M):
    n = len(M)
    out = []
    for j in range(n):
        s = R_ZERO
        for i in range(n):
            if v[i] and M[i][j]:
                s = s + v[i] * M[i][j]
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# exterior powers
# ---------------------------------------------------------------------------


def exterior_power_matrix(A: Sequence[Sequence], r: int):
    n = len(A)
    if not 1 <= r <= n:
        raise ValueError("1 <= r <= n required")
    subsets = list(itertools.combinations(range(n), r))
    return [[mat_det([[A[i][j] for j in J] for i in I]) for J in subsets] for I in subsets]


def exterior_power(S: DifferenceSystem, r: int) -> DifferenceSystem:
    return DifferenceSystem(exterior_power_matrix(S.A, r))


def companion_operator(M) -> ScalarOperator | None:
    """Operator read off a companion matrix (last row free, superdiagonal ones)."""
    n = len(M)
    for i in range(n - 1):
        for j in range(n):
            want = R_ONE if j == i + 1 else R_ZERO
            if M[i][j] != want:
                return None
    vals = [-RatFunc.coerce(M[n - 1][j]) for j in range(n)] + [R_ONE]
    return ScalarOperator(tuple(_clear_denominators(vals)), 1)


__all__ = [
    "DifferenceSystem",
    "det_of_variables",
    "GermSequence",
    "ScalarOperator",
    "choose_rho",
    "germ_terms",
    "sigma_poly",
    "monomial_annihilator",
    "monomial_system",
    "monomial_transition",
    "cyclic_vector_scalarize",
    "exterior_power",
    "exterior_power_matrix",
    "companion_operator",
    "variable_names",
    "R_X",
    "mat_inverse",
]
