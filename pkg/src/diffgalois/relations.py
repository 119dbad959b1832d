"""Algebraic relations of bounded degree among the entries of a germ solution.

``relations_ideal`` returns generators of the ideal of polynomials
P(x, Y) of Y-degree <= d and x-degree <= ell that vanish on the germ
fundamental matrix; ``coefficient_bound`` supplies a safe ell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

import flint

from .errors import CostExceeded
from .groebner import QQX, Poly, PolyIdeal
from .hypergeom import system_hyper_solutions
from .linalg import nullspace, rref_sparse
from .scalar import R_X, RatFunc, integer_roots
from .system import (
    DifferenceSystem,
    choose_rho,
    exterior_power_matrix,
    germ_terms,
    monomial_annihilator,
    monomial_system,
)

log = logging.getLogger(__name__)

__all__ = ["RelationsIdealRequest", "RelationsResult", "coefficient_bound", "relations_ideal"]


@dataclass(frozen=True)
class RelationsIdealRequest:
    system: DifferenceSystem
    d: int = 2
    ell: Union[int, str] = "auto"
    rho: int | None = None
    Z_rho: tuple | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.ell != "auto" and (not isinstance(self.ell, int) or self.ell < 0):
            raise ValueError("ell must be a non-negative integer or 'auto'")


@dataclass
class RelationsResult:
    """The ideal together with the data used to certify it."""

    ideal: PolyIdeal
    d: int
    ell: int
    rho: int
    kappa: int
    operator_order: int


def _constant_bound(B) -> int:
    """Bound for a constant monomial system from its minimal polynomial.

    A Jordan block of size s makes the r-th exterior power carry blocks of
    size at most min(r, D - r)*(s - 1) + 1, so polynomial parts of its
    hypergeometric solutions have degree at most that minus one.
    """
    D = len(B)
    M = flint.fmpq_mat(D, D, [flint.fmpq(int(v.numerator), int(v.denominator)) for row in B for v in row])
    _, facs = M.minpoly().factor()
    s = max(e for _, e in facs)
    return 2 * (D // 2) * (s - 1)


def coefficient_bound(S: DifferenceSystem, d: int, *, warn_dim: int = 64, max_dim: int = 400) -> int:
    """An ell such that the relations of Y-degree <= d are generated in x-degree <= ell."""
    if d < 1:
        raise ValueError("d must be at least 1")
    B = monomial_system(S, d)
    D = len(B)
    if all(v.is_constant() for row in B for v in row):
        return _constant_bound([[v.constant_value() for v in row] for row in B])
    half = 0
    for r in range(1, D + 1):
        dim = comb(D, r)
        if dim > max_dim:
            raise CostExceeded(f"exterior power of dimension {dim} exceeds the limit {max_dim}")
        if dim > warn_dim:
            log.warning("exterior power r=%d has dimension %d", r, dim)
        Ar = exterior_power_matrix(B, r)
        for sol in system_hyper_solutions(Ar, 1):
            half = max(half, max(v.degree for v in sol.c if v))
    return 2 * half


def _monomial_value(Z, e, n):
    v = Fraction(1)
    for idx, k in enumerate(e):
        if k:
            v *= Z[idx // n][idx % n] ** k
    return v


def relations_ideal(req: RelationsIdealRequest) -> RelationsResult:
    """Kernel of the finite evaluation system on the germ; see module docstring."""
    S = req.system
    n = S.n
    ell = coefficient_bound(S, req.d) if req.ell == "auto" else req.ell
    L = monomial_annihilator(S, req.d, ell)
    l = L.order
    rho = choose_rho(S) if req.rho is None else req.rho
    roots = integer_roots(L.leading) + integer_roots(L.trailing)
    kappa = max([rho] + roots) + 1
    germ = germ_terms(S, rho, kappa - rho + l, req.Z_rho)

    ring = S.ring(QQX)
    monos = ring.monomials_up_to(req.d)
    unknowns = [(e, i) for e in monos for i in range(ell + 1)]
    rows = []
    for m in range(kappa, kappa + l):
        Z = germ.term(m)
        row = {}
        for col, (e, i) in enumerate(unknowns):
            v = _monomial_value(Z, e, n) * Fraction(m) ** i
            if v:
                row[col] = v
        rows.append(row)
    kernel = nullspace(rows, len(unknowns), one=Fraction(1))

    # reduce the kernel basis in the order (Y-monomial descending, x-power descending)
    order = sorted(range(len(unknowns)), key=lambda c: (ring.key(unknowns[c][0]), unknowns[c][1]), reverse=True)
    pos = {c: k for k, c in enumerate(order)}
    vecs = [{pos[c]: v for c, v in enumerate(vec) if v} for vec in kernel]
    prows, _ = rref_sparse(vecs, len(unknowns))
    gens = []
    for prow in prows:
        terms: dict = {}
        for k, v in prow.items():
            e, i = unknowns[order[k]]
            coeff = RatFunc.coerce(v) * R_X**i
            terms[e] = terms[e] + coeff if e in terms else coeff
        gens.append(Poly(ring, {e: c for e, c in terms.items() if c}))
    gens.sort(key=lambda p: ring.key(p.lm))
    ideal = PolyIdeal(ring, gens)
    return RelationsResult(ideal, req.d, ell, rho, kappa, l)

