"""Multiplicative relations among rational functions modulo shift quotients.

For certificates b_1..b_v and a step delta this module computes the lattice
of integer vectors z such that prod b_i^z_i = f(x+delta)/f(x) for some
nonzero rational function f, together with such an f for every basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import hermite_normal_form, integer_kernel
from .scalar import ONE_POLY, R_ONE, RatFunc, UniPoly, factor

__all__ = [
    "ShiftClass",
    "ExponentLattice",
    "shift_offset",
    "shift_quotient_witness",
    "sigma_quotient_lattice",
    "integer_kernel",
]


@dataclass(frozen=True)
class ShiftClass:
    """Orbit of a monic irreducible polynomial under x -> x + m*step."""

    representative: UniPoly
    step: int

    def offset_of(self, q: UniPoly):
        return shift_offset(self.representative, q, self.step)


def shift_offset(p: UniPoly, q: UniPoly, step: int = 1):
    """Integer m with q(x) = p(x + m*step), or None."""
    if p.degree != q.degree or p.degree < 1 or p.lc != q.lc:
        return None
    d = p.degree
    s = (q.coeffs[d - 1] - p.coeffs[d - 1]) / (d * p.lc)
    m = s / step
    if m.denominator != 1:
        return None
    m = int(m)
    return m if p.shift(m * step) == q else None


def _factor_int(n: int) -> dict:
    import flint

    return {int(p): e for p, e in flint.fmpz(n).factor()} if n > 1 else {}


def _rational_primes(c: Fraction) -> tuple:
    sign = 1 if c < 0 else 0
    exps = dict(_factor_int(abs(c.numerator)))
    for p, e in _factor_int(c.denominator).items():
        exps[p] = exps.get(p, 0) - e
    return sign, exps


@dataclass(frozen=True)
class ExponentLattice:
    """Basis (Hermite normal form) and witnesses of the relation lattice."""

    basis: tuple
    witnesses: tuple
    certificates: tuple
    step: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, z: Sequence[int]) -> bool:
        if not self.basis:
            return not any(z)
        H = hermite_normal_form(list(self.basis) + [list(z)])
        return len(H) == len(self.basis) and H == [list(b) for b in self.basis]

    def verify(self) -> None:
        for z, f in zip(self.basis, self.witnesses):
            lhs = product_power(self.certificates, z) * f
            if lhs != f.shift(self.step):
                raise AssertionError(f"witness identity fails for {z}")

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "certificates": [str(b) for b in self.certificates],
            "basis": [list(b) for b in self.basis],
            "witnesses": [str(f) for f in self.witnesses],
        }


def product_power(b_list: Sequence[RatFunc], z: Sequence[int]) -> RatFunc:
    out = R_ONE
    for b, e in zip(b_list, z):
        if e:
            out = out * RatFunc.coerce(b) ** e
    return out


def _group_classes(factored, step: int):
    """Assign every irreducible factor to a shift class.

    Returns (classes, placement) where placement maps a factor polynomial to
    (class index, offset) with factor(x) = rep(x + offset*step).
    """
    polys = sorted({p for fr in factored for p, _ in fr.factors}, key=lambda p: (p.degree, p.coeffs))
    classes: list = []
    placement: dict = {}
    for p in polys:
        for ci, cls in enumerate(classes):
            m = cls.offset_of(p)
            if m is not None:
                placement[p] = (ci, m)
                break
        else:
            classes.append(ShiftClass(p, step))
            placement[p] = (len(classes) - 1, 0)
    return classes, placement


def shift_quotient_witness(q: RatFunc, step: int = 1):
    """f with f(x+step)/f(x) = q, or None when q is not such a quotient."""
    lat = sigma_quotient_lattice([q], step)
    if lat.basis and lat.basis[0] == (1,):
        return lat.witnesses[0]
    return None


def sigma_quotient_lattice(b_list: Sequence[RatFunc], delta: int) -> ExponentLattice:
    """Lattice of z with prod b_i^z_i a delta-shift quotient, plus witnesses."""
    b_list = tuple(RatFunc.coerce(b) for b in b_list)
    if any(not b for b in b_list):
        raise ValueError("certificates must be nonzero")
    v = len(b_list)
    if v == 0:
        return ExponentLattice((), (), (), delta)
    factored = [factor(b) for b in b_list]
    classes, placement = _group_classes(factored, delta)

    rows = []
    # total exponent within each shift class must vanish
    for ci in range(len(classes)):
        row = [0] * v
        for i, fr in enumerate(factored):
            for p, e in fr.factors:
                if placement[p][0] == ci:
                    row[i] += e
        rows.append(row)
    # constant part: prime exponents, then the sign as a parity condition
    signs, primes = [], {}
    for i, fr in enumerate(factored):
        s, exps = _rational_primes(fr.unit)
        signs.append(s)
        for p, e in exps.items():
            primes.setdefault(p, [0] * v)[i] = e
    rows.extend(primes[p] for p in sorted(primes))
    # auxiliary column w: sum s_i z_i - 2 w = 0
    full = [r + [0] for r in rows]
    full.append(signs + [-2])
    K = integer_kernel(full, v + 1)
    basis = hermite_normal_form([k[:v] for k in K])

    witnesses = tuple(_witness(z, factored, classes, placement, delta) for z in basis)
    lat = ExponentLattice(tuple(tuple(z) for z in basis), witnesses, b_list, delta)
    lat.verify()
    return lat


def _witness(z, factored, classes, placement, delta) -> RatFunc:
    """Telescoping product f with f(x+delta)/f(x) = prod b_i^z_i."""
    per_class: dict = {}
    for zi, fr in zip(z, factored):
        if not zi:
            continue
        for p, e in fr.factors:
            ci, m = placement[p]
            bucket = per_class.setdefault(ci, {})
            bucket[m] = bucket.get(m, 0) + zi * e
    num, den = ONE_POLY, ONE_POLY
    for ci, offsets in per_class.items():
        rep = classes[ci].representative
        g = 0
        for m in range(min(offsets), max(offsets) + 1):
            g -= offsets.get(m, 0)
            if g > 0:
                num = num * rep.shift(m * delta) ** g
            elif g < 0:
                den = den * rep.shift(m * delta) ** (-g)
    return RatFunc(num, den)
