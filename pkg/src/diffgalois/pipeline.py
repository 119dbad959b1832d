"""End-to-end computation of the difference Galois group.

Stages: bounded-degree relations, a prime component and its shift period,
hypergeometric elements with their exponent lattice, the torsor binomials,
the maximal shift-stable ideal and finally its stabilizer in GL_n.
"""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt
from typing import Union

import flint

from .errors import DiffGaloisError, StageError
from .groebner import GREVLEX, QQ, Poly, PolyIdeal, Ring, block_order, groebner_basis, intersect, reduce_poly
from .hyper_elements import hyper_elements
from .lattice import ExponentLattice, sigma_quotient_lattice
from .relations import RelationsIdealRequest, relations_ideal
from .scalar import UniPoly, poly_gcd
from .structure import associated_primes, radical_binomial, sigma_image_ideal, sigma_period
from .system import DifferenceSystem, det_of_variables

log = logging.getLogger(__name__)

__all__ = [
    "TorsorRelations",
    "GaloisOutput",
    "BoundResult",
    "torsor_extension",
    "maximal_sigma_ideal",
    "stabilizer",
    "stabilizer_ring",
    "stabilizer_components",
    "theoretical_bound",
    "jordan_ceiling",
    "sample_points",
    "compute_galois_group",
    "SOUNDNESS_CAVEAT",
]

SOUNDNESS_CAVEAT = (
    "relations were computed up to a practical degree far below the proven bound; "
    "the result is the stabilizer of a maximal shift-stable ideal containing them, "
    "which is the Galois group when that relation ideal is already proto-maximal"
)


@dataclass
class TorsorRelations:
    elements: list
    lattice: ExponentLattice

    def __post_init__(self):
        certs = tuple(h.b for h in self.elements)
        if tuple(self.lattice.certificates) != certs:
            raise ValueError("lattice was not computed from these certificates")
        if self.elements and any(h.delta != self.lattice.step for h in self.elements):
            raise ValueError("lattice step differs from the element step")


@dataclass
class GaloisOutput:
    maximal_sigma_ideal: PolyIdeal
    stabilizer_ideal: PolyIdeal
    components: list | None
    transcript: list = field(default_factory=list)
    caveat: str = SOUNDNESS_CAVEAT


# ---------------------------------------------------------------------------
# torsor and maximal ideal
# ---------------------------------------------------------------------------


def _product(polys, exps, ring):
    out = ring.const(1)
    for p, e in zip(polys, exps):
        if e:
            out = out * p**e
    return out


def torsor_extension(I_irr: PolyIdeal, rel: TorsorRelations) -> PolyIdeal:
    """I_irr plus prod P^{m+} - f * prod P^{m-} for every lattice basis vector m."""
    ring = I_irr.ring
    Ps = [h.P for h in rel.elements]
    extra = []
    for m, f in zip(rel.lattice.basis, rel.lattice.witnesses):
        plus = [max(v, 0) for v in m]
        minus = [max(-v, 0) for v in m]
        extra.append(_product(Ps, plus, ring) - _product(Ps, minus, ring).scale(f))
    return PolyIdeal(ring, list(I_irr.groebner()) + extra)


def maximal_sigma_ideal(P_ideal: PolyIdeal, S: DifferenceSystem, delta: int) -> PolyIdeal:
    """Certified radical of P_ideal intersected with its first delta - 1 shifts."""
    root = radical_binomial(P_ideal, S, delta, S.det_poly(P_ideal.ring))
    out = root
    for i in range(1, delta):
        out = intersect(out, sigma_image_ideal(root, S, i))
    return PolyIdeal(out.ring, out.groebner(), is_groebner=True)


# ---------------------------------------------------------------------------
# stabilizer
# ---------------------------------------------------------------------------


def stabilizer_ring(n: int) -> Ring:
    names = [f"g{i}{j}" if n < 10 else f"g{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    return Ring(names, GREVLEX, QQ)


def stabilizer(I: PolyIdeal) -> PolyIdeal:
    """Equations over Q in g_ij of the matrices g with P(Y g) in I for all P in I."""
    ring = I.ring
    n = isqrt(ring.nvars)
    if n * n != ring.nvars:
        raise ValueError("ideal must live in the ring of an n x n matrix")
    gring = stabilizer_ring(n)
    big = Ring(ring.names + gring.names, block_order(n * n, n * n), ring.field)
    yring = Ring(ring.names, GREVLEX, ring.field)
    gb_y = groebner_basis([g.to_ring(yring) for g in I.groebner()], yring) if ring.order != GREVLEX else list(I.groebner())
    basis = [g.to_ring(big) for g in gb_y]
    # Y g as images of y_ij
    images = []
    for i in range(n):
        for j in range(n):
            img = big.const(0)
            for k in range(n):
                img = img + big.var(i * n + k) * big.var(n * n + k * n + j)
            images.append(img)
    eqs = []
    for P in gb_y:
        rem = reduce_poly(P.to_ring(yring).substitute(images, big), basis)
        eqs.extend(_split_coefficients(rem, n * n, gring, ring.field))
    out = groebner_basis(eqs, gring)
    return PolyIdeal(gring, out, is_groebner=True)


def _split_coefficients(rem: Poly, ny: int, gring: Ring, field_name: str) -> list:
    """Coefficients in Q[g] of every Y-monomial and every power of x."""
    groups: dict = {}
    for e, c in rem.terms.items():
        groups.setdefault(e[:ny], {})[e[ny:]] = c
    eqs = []
    for gterms in groups.values():
        if field_name == QQ:
            eqs.append(Poly(gring, dict(gterms)))
            continue
        den = UniPoly([1])
        for c in gterms.values():
            den = den * c.den // poly_gcd(den, c.den)
        by_power: dict = {}
        for ge, c in gterms.items():
            num = c.num * (den // c.den)
            for k, a in enumerate(num.coeffs):
                if a:
                    by_power.setdefault(k, {})[ge] = Fraction(a)
        eqs.extend(Poly(gring, t) for t in by_power.values())
    return [q for q in eqs if q]


def stabilizer_components(stab: PolyIdeal) -> list:
    """Prime components of the stabilizer that meet GL_n."""
    n = isqrt(stab.ring.nvars)
    return associated_primes(stab, det_of_variables(stab.ring, n))


def sample_points(component: PolyIdeal, count: int, seed: int = 0, tries: int = 200) -> list:
    """Rational points of a linear or binomial prime by propagation.

    Free coordinates receive small random nonzero rationals; a generator that
    becomes linear in a single open coordinate fixes it.  Points with
    vanishing determinant are discarded.
    """
    ring = component.ring
    gens = component.groebner()
    n = isqrt(ring.nvars)
    det = det_of_variables(ring, n)
    rng = random.Random(seed)
    points = []
    for _ in range(tries):
        if len(points) >= count:
            break
        values: dict = {}
        while len(values) < ring.nvars:
            if not _propagate(gens, ring, values):
                free = max(v for v in range(ring.nvars) if v not in values)
                values[free] = Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 5))
        pt = [values[v] for v in range(ring.nvars)]
        if all(g.evaluate(pt) == 0 for g in gens) and det.evaluate(pt) != 0:
            points.append(pt)
    return points


def _propagate(gens, ring, values) -> bool:
    images = [ring.const(values[v]) if v in values else ring.var(v) for v in range(ring.nvars)]
    for g in gens:
        h = g.substitute(images, ring)
        open_vars = h.variables()
        if len(open_vars) != 1:
            continue
        (v,) = open_vars
        if h.degree_in(v) != 1:
            continue
        e1 = tuple(1 if i == v else 0 for i in range(ring.nvars))
        a = h.terms.get(e1, 0)
        b = h.terms.get(ring.zero_exp, 0)
        if a and len(h.terms) <= 2:
            values[v] = -Fraction(b) / Fraction(a)
            return True
    return False


# ---------------------------------------------------------------------------
# theoretical degree bound
# ---------------------------------------------------------------------------

EXACT_BITS_LIMIT = 1 << 28


def _sqrt_ring_power(D: int, N: int):
    """(u, v) with (1 + sqrt(D))^N = u + v sqrt(D)."""
    ru, rv = flint.fmpz(1), flint.fmpz(0)
    bu, bv = flint.fmpz(1), flint.fmpz(1)
    while N:
        if N & 1:
            ru, rv = ru * bu + D * rv * bv, ru * bv + rv * bu
        bu, bv = bu * bu + D * bv * bv, 2 * bu * bv
        N >>= 1
    return ru, rv


def jordan_ceiling(m: int) -> int:
    """Ceiling of (sqrt(8m)+1)^(2m^2) - (sqrt(8m)-1)^(2m^2), computed exactly.

    The even exponent leaves 2 v sqrt(8m) where (1 + sqrt(8m))^N = u + v sqrt(8m).
    """
    D, N = 8 * m, 2 * m * m
    _, v = _sqrt_ring_power(D, N)
    sq = int(4 * v * v) * D
    r = isqrt(sq)
    return r if r * r == sq else r + 1


@dataclass
class BoundResult:
    """Degree bounds; exact integers where representable, else ``None``.

    ``log2_kappa3``, ``log2_I`` and ``log2_log2_value`` are float estimates
    valid in every case; the last one is log2 of the bit length of d.
    """

    n: int
    kappa1: int | None
    kappa2: int | None
    kappa3: int | None
    I_n: int | None
    value: object | None
    log2_kappa3: float
    log2_I: float
    log2_log2_value: float

    def summary(self) -> dict:
        def show(v):
            if v is None:
                return None
            return int(v) if int(v).bit_length() <= 4096 else f"<{int(v).bit_length()}-bit integer>"

        out = {
            "n": self.n,
            "kappa1": show(self.kappa1),
            "kappa2": show(self.kappa2),
            "kappa3": show(self.kappa3),
            "I(n)": show(self.I_n),
            "log2_kappa3": self.log2_kappa3,
            "log2_I(n)": self.log2_I,
            "log2_log2_d": self.log2_log2_value,
        }
        if self.value is not None:
            out["d_bits"] = int(self.value.bit_length())
            out["d_mod_1000000007"] = int(self.value % 1000000007)
            out["d_mod_998244353"] = int(self.value % 998244353)
        return out


def _log2_comb(N_log2: float, k: int) -> float:
    # N huge compared to k: C(N, k) ~ N^k / k!
    return k * N_log2 - math.log2(math.factorial(k))


def theoretical_bound(n: int, *, exact_limit: int = EXACT_BITS_LIMIT) -> BoundResult:
    if n < 1:
        raise ValueError("n must be positive")
    n2 = n * n
    c_exp = 3 * 8**n2
    c_log2 = c_exp * math.log2(2 * n)

    m = max(comb(n2 + 1, i) for i in range(n2 + 1))
    log_I = 2 * m * m * math.log2(math.sqrt(8 * m) + 1)
    I_n = jordan_ceiling(m) if log_I < exact_limit else None
    if I_n is not None:
        log_I = _bit_log2(I_n)

    exact = c_log2 * n2 * 8 < exact_limit
    if exact:
        c = (2 * n) ** c_exp
        N = n2 + c
        kappa1 = max(comb(N, i) for i in range(n2 + 1)) ** 2
        kappa2 = kappa1 * c * comb(N, n2)
        K = kappa1 * kappa1 + 1
        kappa3 = kappa2 * K * max(comb(K, i) for i in range(n2 + 1))
        log_k3 = _bit_log2(kappa3)
    else:
        kappa1 = kappa2 = kappa3 = None
        lk1 = 2 * _log2_comb(c_log2, n2)
        lk2 = lk1 + c_log2 + _log2_comb(c_log2, n2)
        lK = 2 * lk1
        log_k3 = lk2 + lK + _log2_comb(lK, n2)

    value = None
    if I_n is not None and kappa3 is not None and (I_n - 1) * log_k3 < exact_limit:
        value = flint.fmpz(kappa3) ** (I_n - 1)
    # log2(I - 1) is log2(I) up to a negligible term except for tiny I
    log_log_value = (math.log2(I_n - 1) if I_n is not None and I_n < 2**60 else log_I) + math.log2(log_k3)
    return BoundResult(n, kappa1, kappa2, kappa3, I_n, value, log_k3, log_I, log_log_value)


def _bit_log2(v) -> float:
    v = int(v)
    shift = max(v.bit_length() - 64, 0)
    return math.log2(v >> shift) + shift


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def _record(transcript: list, step: str, result, started: float, **extra):
    entry = {"step": step, "result": result, "seconds": round(time.perf_counter() - started, 3)}
    entry.update(extra)
    transcript.append(entry)


def _run(stage: str, transcript: list, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DiffGaloisError as exc:
        raise StageError(stage, exc, list(transcript)) from exc


def compute_galois_group(S: DifferenceSystem, d: int = 2, ell: Union[int, str] = 0, char_degree: int = 1,
                         *, decompose_stabilizer: bool = True, strict: bool = False) -> GaloisOutput:
    """Run every stage and return the stabilizer with a step-by-step transcript."""
    transcript: list = []
    t = time.perf_counter()
    bound = theoretical_bound(S.n, exact_limit=1 << 16)
    _record(transcript, "bound", bound.summary(), t, caveat=SOUNDNESS_CAVEAT)
    t = time.perf_counter()
    rel = _run("relations", transcript, relations_ideal, RelationsIdealRequest(S, d, ell))
    _record(transcript, "relations", rel.ideal.canonical_lines(), t, d=rel.d, ell=rel.ell,
            rho=rel.rho, kappa=rel.kappa, operator_order=rel.operator_order)
    ring = rel.ideal.ring
    det = S.det_poly(ring)

    t = time.perf_counter()
    primes = _run("decompose", transcript, associated_primes, rel.ideal, det)
    if not primes:
        raise StageError("decompose", DiffGaloisError("no component meets GL_n"), transcript)
    I_irr = primes[0].ideal
    delta = _run("decompose", transcript, sigma_period, I_irr, S, max(len(primes), 1))
    _record(transcript, "decompose", [c.ideal.canonical_lines() for c in primes], t,
            classes=[c.certified_class for c in primes], delta=delta)

    t = time.perf_counter()
    elems = _run("hyper", transcript, hyper_elements, I_irr, S, delta, char_degree, det_poly=det, strict=strict)
    _record(transcript, "hyper", [h.to_json() for h in elems], t)

    t = time.perf_counter()
    lat = _run("lattice", transcript, sigma_quotient_lattice, [h.b for h in elems], delta)
    _record(transcript, "lattice", lat.to_json(), t)

    t = time.perf_counter()
    P_ideal = torsor_extension(I_irr, TorsorRelations(elems, lat))
    _record(transcript, "torsor", P_ideal.canonical_lines(), t)

    t = time.perf_counter()
    I = _run("maximal", transcript, maximal_sigma_ideal, P_ideal, S, delta)
    _record(transcript, "maximal", I.canonical_lines(), t)

    t = time.perf_counter()
    stab = _run("stabilizer", transcript, stabilizer, I)
    comps = None
    if decompose_stabilizer:
        comps = _run("stabilizer", transcript, stabilizer_components, stab)
    _record(transcript, "stabilizer", stab.canonical_lines(), t,
            components=None if comps is None else [c.ideal.canonical_lines() for c in comps])
    return GaloisOutput(I, stab, comps, transcript)
