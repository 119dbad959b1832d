"""Shift-hypergeometric elements of the quotient by a prime component.

An element is a polynomial P of bounded degree, invertible modulo the
component, with sigma^delta(P) = b*P modulo the component for a rational
function b (its certificate).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SliceNotStable
from .groebner import Poly, PolyIdeal, is_unit_mod, standard_monomials
from .hypergeom import system_hyper_solutions
from .linalg import inverse
from .scalar import R_ZERO, RatFunc
from .system import DifferenceSystem, sigma_poly

__all__ = ["HyperElement", "sigma_delta_matrix", "hyper_elements"]


@dataclass(frozen=True)
class HyperElement:
    P: Poly
    b: RatFunc
    delta: int

    def check(self, I_irr: PolyIdeal, S: DifferenceSystem) -> None:
        lhs = sigma_poly(self.P, S, self.delta) - self.P.scale(self.b)
        if I_irr.reduce(lhs):
            raise AssertionError(f"certificate identity fails for {self.P}")

    def to_json(self) -> dict:
        return {"element": str(self.P), "certificate": str(self.b), "delta": self.delta}


def _monomial(ring, e) -> Poly:
    return Poly(ring, {tuple(e): ring.one})


def sigma_delta_matrix(basis, I_irr: PolyIdeal, S: DifferenceSystem, delta: int):
    """Matrix of sigma^delta on the residues of ``basis`` (exponent tuples).

    Column i holds the coordinates of the normal form of sigma^delta(m_i).
    """
    ring = I_irr.ring
    index = {tuple(e): k for k, e in enumerate(basis)}
    size = len(basis)
    M = [[R_ZERO] * size for _ in range(size)]
    for i, e in enumerate(basis):
        nf = I_irr.reduce(sigma_poly(_monomial(ring, e), S, delta))
        for mono, c in nf.terms.items():
            j = index.get(mono)
            if j is None:
                raise SliceNotStable(
                    f"sigma^{delta} of {_monomial(ring, e)} leaves the degree slice; raise the degree"
                )
            M[j][i] = RatFunc.coerce(c)
    return M


def hyper_elements(I_irr: PolyIdeal, S: DifferenceSystem, delta: int, d: int = 1, *,
                   det_poly: Poly | None = None, strict: bool = False) -> list:
    """Pairwise non-similar hypergeometric elements of degree <= d, constant excluded."""
    ring = I_irr.ring
    if det_poly is None:
        det_poly = S.det_poly(ring)
    basis = standard_monomials(I_irr, d)
    A = sigma_delta_matrix(basis, I_irr, S, delta)
    Ainv = inverse(A)
    out = []
    for sol in system_hyper_solutions(Ainv, delta, strict=strict):
        P = Poly(ring, {})
        for e, c in zip(basis, sol.c):
            if c:
                P = P + _monomial(ring, e).scale(c)
        P = I_irr.reduce(P)
        if not P or P.is_constant():
            continue
        lc = RatFunc.coerce(P.lc)
        P = P.monic()
        # P was divided by lc, which multiplies the certificate by lc / sigma^delta(lc)
        b = sol.certificate.r.inverse() * lc / lc.shift(delta)
        elem = HyperElement(P, b, delta)
        elem.check(I_irr, S)
        if is_unit_mod(I_irr, P, det_poly):
            out.append(elem)
    out.sort(key=lambda h: (ring.key(h.P.lm), str(h.P)))
    return out
