"""Prime components, shift images and radical certification of ideals.

Decomposition handles the class of ideals that split completely by
factoring generators: every component must end up generated by linear
forms together with either binomials with a saturated exponent lattice or
a single irreducible polynomial.  Anything else
raises :class:`UnsupportedClassError` instead of returning a wrong answer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from .errors import ExtensionNeeded, UnsupportedClassError
from .groebner import QQ, Poly, PolyIdeal, Ring, block_order, eliminate, groebner_basis, intersect, reduce_poly
from .linalg import lattice_is_saturated, rank
from .scalar import ONE_POLY, RatFunc, UniPoly, poly_lcm
from .system import DifferenceSystem, sigma_poly

log = logging.getLogger(__name__)

__all__ = [
    "PrimeComponent",
    "associated_primes",
    "factor_poly",
    "sigma_image_ideal",
    "sigma_period",
    "radical_binomial",
    "certify_prime",
]

MONOMIAL, LINEAR, BINOMIAL, HYPERSURFACE = "monomial", "linear", "binomial-lattice", "hypersurface"


@dataclass
class PrimeComponent:
    ideal: PolyIdeal
    certified_class: str

    def __str__(self):
        return f"{self.certified_class}: {self.ideal}"


# ---------------------------------------------------------------------------
# multivariate factorisation via flint
# ---------------------------------------------------------------------------


def _flint_context(ring: Ring):
    names = tuple(ring.names) if ring.field == QQ else ("x",) + tuple(ring.names)
    return flint.fmpq_mpoly_ctx.get(names, "lex")


def _to_flint(p: Poly):
    ring = p.ring
    ctx = _flint_context(ring)
    if ring.field == QQ:
        data = {e: flint.fmpq(c.numerator, c.denominator) for e, c in p.terms.items()}
        return ctx.from_dict(data)
    den = ONE_POLY
    for c in p.terms.values():
        den = poly_lcm(den, c.den)
    rd = RatFunc.coerce(den)
    data: dict = {}
    for e, c in p.terms.items():
        num = (c * rd).num
        for i, a in enumerate(num.coeffs):
            if a:
                data[(i,) + e] = flint.fmpq(a.numerator, a.denominator)
    return ctx.from_dict(data)


def _from_flint(f, ring: Ring) -> Poly:
    terms: dict = {}
    if ring.field == QQ:
        for e, c in f.to_dict().items():
            terms[tuple(int(k) for k in e)] = Fraction(int(c.p), int(c.q))
        return ring.poly(terms)
    coeffs: dict = {}
    for e, c in f.to_dict().items():
        e = tuple(int(k) for k in e)
        coeffs.setdefault(e[1:], {})[e[0]] = Fraction(int(c.p), int(c.q))
    for e, cx in coeffs.items():
        deg = max(cx)
        terms[e] = RatFunc.coerce(UniPoly([cx.get(i, 0) for i in range(deg + 1)]))
    return ring.poly(terms)


def factor_poly(p: Poly) -> list:
    """Irreducible factors (with multiplicity) that involve the ring variables.

    Factors depending on x alone are units of Q(x)[Y] and are dropped.
    """
    if p.is_constant():
        return []
    _, facs = _to_flint(p).factor()
    out = []
    offset = 0 if p.ring.field == QQ else 1
    for f, e in facs:
        degs = f.degrees()
        if any(degs[offset:]):
            out.append((_from_flint(f, p.ring).monic(), e))
    out.sort(key=lambda t: str(t[0]))
    return out


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def _gb_key(gb) -> tuple:
    return tuple(str(g) for g in gb)


def _is_linear(gb) -> bool:
    return all(g.total_degree() <= 1 for g in gb)


def _binomial_part(gb):
    """Non-linear elements, or None if one of them is not a binomial."""
    rest = [g for g in gb if g.total_degree() > 1]
    if any(len(g.terms) != 2 for g in rest):
        return None
    return rest


def _binomial_vars(polys) -> list:
    vs = set()
    for g in polys:
        vs |= g.variables()
    return sorted(vs)


def _saturate_vars(gb, ring: Ring, var_indices) -> list:
    """Gröbner basis of (I : (prod of the given variables)^infinity)."""
    if not var_indices:
        return gb
    prod = ring.const(1)
    for v in var_indices:
        prod = prod * ring.var(v)
    z = "z_sat"
    while z in ring.names:
        z += "_"
    big = Ring((z,) + ring.names, block_order(1, ring.nvars), ring.field)
    zv = big.var(0)
    gens = [g.to_ring(big) for g in gb] + [zv * prod.to_ring(big) - 1]
    out = eliminate(PolyIdeal(big, gens), [z])
    return groebner_basis([Poly(ring, dict(g.terms)) for g in out.gens], ring)


def certify_prime(gb: Sequence[Poly], ring: Ring):
    """Class of a prime ideal given by its reduced Gröbner basis, else None."""
    if _is_linear(gb):
        if all(len(g.terms) == 1 for g in gb):
            return MONOMIAL
        return LINEAR
    rest = _binomial_part(gb)
    if rest is None:
        return _hypersurface(gb)
    exps = []
    for g in rest:
        (e1, _), (e2, _) = g.terms.items()
        exps.append([a - b for a, b in zip(e1, e2)])
    if not lattice_is_saturated(exps):
        return _hypersurface(gb)
    return BINOMIAL


def _hypersurface(gb):
    """Linear forms plus one absolutely irreducible quadric.

    In a reduced basis the quadric only involves variables that are not
    leading terms of the linear forms, so the quotient is a polynomial ring
    modulo that quadric.
    """
    rest = [g for g in gb if g.total_degree() > 1]
    if len(rest) != 1 or rest[0].total_degree() != 2:
        return None
    return HYPERSURFACE if _quadric_rank(rest[0]) >= 3 else None


def _quadric_rank(q: Poly) -> int:
    """Rank of the symmetric matrix of the homogenised quadric.

    A quadric is irreducible over an algebraically closed field exactly when
    this rank is at least 3.
    """
    vs = sorted(q.variables())
    pos = {v: k for k, v in enumerate(vs)}
    h = len(vs)
    zero = q.ring.coerce_coeff(0)
    M = [[zero] * (h + 1) for _ in range(h + 1)]
    half = Fraction(1, 2)
    for e, c in q.terms.items():
        idx = [pos[v] for v, k in enumerate(e) for _ in range(k)]
        idx += [h] * (2 - len(idx))
        a, b = idx
        if a == b:
            M[a][a] = M[a][a] + c
        else:
            M[a][b] = M[a][b] + c * half
            M[b][a] = M[b][a] + c * half
    return rank([{j: v for j, v in enumerate(row) if v} for row in M], h + 1)


def _split_candidates(gb):
    """First Gröbner element that factors nontrivially, with its factors."""
    for g in sorted(gb, key=lambda p: (p.total_degree(), str(p))):
        if g.total_degree() < 2:
            continue
        facs = factor_poly(g)
        if len(facs) > 1 or (facs and facs[0][1] > 1):
            return g, [f for f, _ in facs]
    return None, None


def _components(gb, ring: Ring, det_poly, memo: dict, out: dict):
    key = _gb_key(gb)
    if key in memo:
        return
    memo[key] = True
    if len(gb) == 1 and gb[0].is_constant():
        return
    if det_poly is not None and not reduce_poly(det_poly, gb):
        return  # component lies inside det = 0
    g, facs = _split_candidates(gb)
    if g is not None:
        for f in facs:
            _components(groebner_basis(list(gb) + [f], ring), ring, det_poly, memo, out)
        return
    cls = certify_prime(gb, ring)
    if cls == BINOMIAL:
        rest = _binomial_part(gb)
        vars_ = _binomial_vars(rest)
        sat = _saturate_vars(list(gb), ring, vars_)
        if _gb_key(sat) != key:
            # the part away from the coordinate hyperplanes, then each hyperplane
            _components(sat, ring, det_poly, memo, out)
            for v in vars_:
                _components(groebner_basis(list(gb) + [ring.var(v)], ring), ring, det_poly, memo, out)
            return
    if cls is None:
        rest = _binomial_part(gb)
        constant = rest is not None and all(
            (c.is_constant() if isinstance(c, RatFunc) else True) for g in rest for c in g.terms.values()
        )
        text = ", ".join(str(p) for p in gb)
        if constant:
            raise ExtensionNeeded(f"component <{text}> splits only over an algebraic extension", [str(p) for p in rest])
        raise UnsupportedClassError(f"cannot certify <{text}> as prime")
    out[key] = PrimeComponent(PolyIdeal(ring, gb, is_groebner=True), cls)


def associated_primes(I: PolyIdeal, det_poly: Poly | None = None) -> list:
    """Minimal primes of I, optionally discarding those that contain ``det_poly``.

    Output is sorted by canonical generator text.
    """
    ring = I.ring
    memo: dict = {}
    found: dict = {}
    _components(I.groebner(), ring, det_poly, memo, found)
    comps = sorted(found.values(), key=lambda c: c.ideal.canonical_lines())
    minimal = []
    for i, c in enumerate(comps):
        if any(j != i and c.ideal.contains_ideal(o.ideal) and not o.ideal.contains_ideal(c.ideal) for j, o in enumerate(comps)):
            continue
        minimal.append(c)
    return minimal


# ---------------------------------------------------------------------------
# shift action on ideals
# ---------------------------------------------------------------------------


def sigma_image_ideal(I: PolyIdeal, S: DifferenceSystem, delta: int = 1) -> PolyIdeal:
    return PolyIdeal(I.ring, [sigma_poly(g, S, delta) for g in I.groebner()])


def sigma_period(I_irr: PolyIdeal, S: DifferenceSystem, bound: int | None = None) -> int:
    """Least delta >= 1 with sigma^delta(I_irr) contained in I_irr."""
    limit = bound if bound is not None else 64
    for delta in range(1, limit + 1):
        if I_irr.contains_ideal(sigma_image_ideal(I_irr, S, delta)):
            return delta
    raise RuntimeError(f"no period up to {limit}; the ideal is not a component of a shift-stable ideal")


def _certify_by_components(P: PolyIdeal) -> None:
    """P is radical when it equals the intersection of its certified primes."""
    try:
        comps = associated_primes(P)
    except (UnsupportedClassError, ExtensionNeeded) as exc:
        raise UnsupportedClassError(f"radical certification failed: {exc}") from exc
    if not comps:
        raise UnsupportedClassError("radical certification failed: no components")
    J = comps[0].ideal
    for c in comps[1:]:
        J = intersect(J, c.ideal)
    if not J.contains_ideal(P) or not P.contains_ideal(J):
        raise UnsupportedClassError("radical certification failed: " + ", ".join(str(g) for g in P.groebner()))


def radical_binomial(P: PolyIdeal, S: DifferenceSystem | None = None, delta: int | None = None,
                     det_poly: Poly | None = None) -> PolyIdeal:
    """Certify that P (prime part plus unit binomials) is radical and return it.

    Certification: reduced basis made of linear forms and binomials whose
    exponent differences span a saturated lattice, every binomial variable a
    unit modulo P, and (when a system is given) P stable under sigma^delta.
    Ideals outside that shape are accepted when they equal the intersection
    of their certified prime components.
    """
    gb = P.groebner()
    if len(gb) == 1 and gb[0].is_constant():
        raise UnsupportedClassError("the ideal is the whole ring")
    cls = certify_prime(gb, P.ring)
    if cls is None:
        _certify_by_components(P)
    elif cls == BINOMIAL:
        rest = _binomial_part(gb)
        sat = _saturate_vars(list(gb), P.ring, _binomial_vars(rest))
        if _gb_key(sat) != _gb_key(gb):
            raise UnsupportedClassError("binomial variables are not units modulo the ideal")
    if S is not None and delta is not None:
        if not P.contains_ideal(sigma_image_ideal(P, S, delta)):
            raise UnsupportedClassError(f"the ideal is not stable under sigma^{delta}")
    return PolyIdeal(P.ring, gb, is_groebner=True)
