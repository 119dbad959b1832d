"""Exact linear algebra over Q, Q(x) and Z.

Field routines work on any element type supporting ``+ - * /`` and truth
testing (Fraction, RatFunc).  Rows are kept sparse as ``{column: value}``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .scalar import RatFunc


def _inv(c):
    return c.inverse() if isinstance(c, RatFunc) else 1 / c


def _zero_like(c):
    return RatFunc.coerce(0) if isinstance(c, RatFunc) else Fraction(0)


def _one_like(c):
    return RatFunc.coerce(1) if isinstance(c, RatFunc) else Fraction(1)


def _sparse(row):
    if isinstance(row, dict):
        return {j: v for j, v in row.items() if v}
    return {j: v for j, v in enumerate(row) if v}


def rref_sparse(rows, ncols: int):
    """Reduced row echelon form; returns (pivot_rows, pivot_columns).

    Rows are consumed in input order and each new pivot is the leftmost
    surviving column, so the result is deterministic.
    """
    pivots: dict = {}  # column -> normalised row, zero in every other pivot column
    for row in rows:
        r = _sparse(row)
        for col in [c for c in r if c in pivots]:
            f = r.get(col)
            if not f:
                continue
            for j, v in pivots[col].items():
                nv = r.get(j)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
        if not r:
            continue
        col = min(r)
        inv = _inv(r[col])
        r = {j: v * inv for j, v in r.items()}
        for prow in pivots.values():
            f = prow.get(col)
            if f:
                for j, v in r.items():
                    nv = prow.get(j)
                    nv = -f * v if nv is None else nv - f * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        pivots[col] = r
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def nullspace(rows, ncols: int, one=None):
    """Basis of ``{v : rows · v = 0}``; one vector per free column, ascending."""
    prows, pcols = rref_sparse(rows, ncols)
    pset = set(pcols)
    if one is None:
        sample = next((v for r in prows for v in r.values()), Fraction(1))
        one = _one_like(sample)
    zero = one - one
    basis = []
    for free in range(ncols):
        if free in pset:
            continue
        v = [zero] * ncols
        v[free] = one
        for pc, prow in zip(pcols, prows):
            c = prow.get(free)
            if c:
                v[pc] = -c
        basis.append(v)
    return basis


def rank(rows, ncols: int) -> int:
    return len(rref_sparse(rows, ncols)[1])


def solve(rows, rhs, ncols: int):
    """One solution of ``rows · v = rhs`` or None."""
    aug = []
    for row, b in zip(rows, rhs):
        r = _sparse(row)
        if b:
            r[ncols] = b
        aug.append(r)
    prows, pcols = rref_sparse(aug, ncols + 1)
    if ncols in pcols:
        return None
    sample = next((v for r in prows for v in r.values()), Fraction(1))
    zero = _zero_like(sample)
    v = [zero] * ncols
    for pc, prow in zip(pcols, prows):
        v[pc] = prow.get(ncols, zero)
    return v


# ---------------------------------------------------------------------------
# dense matrices over a field
# ---------------------------------------------------------------------------


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(p):
            s = None
            for k in range(m):
                a = Ai[k]
                if a:
                    b = B[k][j]
                    if b:
                        s = a * b if s is None else s + a * b
            row.append(s if s is not None else _zero_like(Ai[0] if Ai else Fraction(0)))
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        s = None
        for a, b in zip(row, v):
            if a and b:
                s = a * b if s is None else s + a * b
        out.append(s if s is not None else _zero_like(row[0]))
    return out


def identity(n: int, one=Fraction(1)):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def det(A):
    """Determinant by Gaussian elimination over the field."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [list(r) for r in A]
    result = _one_like(M[0][0])
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return _zero_like(M[0][0])
        if p != c:
            M[c], M[p] = M[p], M[c]
            result = -result
        piv = M[c][c]
        result = result * piv
        inv = _inv(piv)
        for r in range(c + 1, n):
            f = M[r][c]
            if f:
                f = f * inv
                for j in range(c, n):
                    if M[c][j]:
                        M[r][j] = M[r][j] - f * M[c][j]
    return result


def inverse(A):
    n = len(A)
    one = _one_like(A[0][0])
    zero = one - one
    M = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = _inv(M[c][c])
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b if b else a for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list:
    """Row-style HNF of the lattice spanned by ``rows`` (zero rows dropped).

    Pivots are positive, entries above each pivot reduced into [0, pivot).
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out = []
    r = 0
    for c in range(ncols):
        # gather rows r.. with nonzero in column c, combine by extended gcd
        idx = [i for i in range(r, len(A)) if A[i][c]]
        if not idx:
            continue
        # bring the gcd into row r
        first = idx[0]
        A[r], A[first] = A[first], A[r]
        for i in range(r + 1, len(A)):
            if not A[i][c]:
                continue
            a, b = A[r][c], A[i][c]
            g, s, t = _xgcd(a, b)
            ra, rb = A[r], A[i]
            new_r = [s * x + t * y for x, y in zip(ra, rb)]
            new_i = [(a // g) * y - (b // g) * x for x, y in zip(ra, rb)]
            A[r], A[i] = new_r, new_i
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    out = [row for row in A[:r] if any(row)]
    return out


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> list:
    """HNF basis of ``{z in Z^ncols : M z = 0}``."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    rows = [list(r) for r in M if any(r)]
    if not rows:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    m = len(rows)
    # augmented [M^T | I]; row-reduce the M^T block, the identity block records combinations
    aug = [[rows[k][j] for k in range(m)] + [1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    H = hermite_normal_form(aug)
    kernel = [row[m:] for row in H if not any(row[:m])]
    # rows of H with zero M-part come after all pivot rows of the M-block
    return hermite_normal_form(kernel)


def lattice_is_saturated(basis: Sequence[Sequence[int]]) -> bool:
    """True when ``(Q·L) ∩ Z^n = L``."""
    rows = [list(r) for r in basis if any(r)]
    if not rows:
        return True
    n = len(rows[0])
    K = integer_kernel(rows, n)
    sat = integer_kernel(K, n) if K else [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return hermite_normal_form(sat) == hermite_normal_form(rows)


def vec_gcd(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g
