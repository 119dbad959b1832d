"""Sparse multivariate polynomials and Buchberger's algorithm.

A :class:`Ring` fixes the variable names, the term order and the coefficient
field (``"QQ"`` with Fraction coefficients, or ``"QQ(x)"`` with RatFunc
coefficients).  Monomials are exponent tuples aligned with ``Ring.names``.
Every order is realised as a flat integer sort key so that comparisons are
plain tuple comparisons.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError
from .scalar import RatFunc, R_X, _fmt_coeff, format_ratfunc, parse_expression

Monomial = tuple

QQ = "QQ"
QQX = "QQ(x)"


# ---------------------------------------------------------------------------
# term orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermOrder:
    """``kind`` is ``lex``, ``grevlex`` or ``block``.

    For block orders ``blocks`` lists the sizes of consecutive variable
    blocks (compared left to right, grevlex inside each block).
    """

    kind: str = "grevlex"
    blocks: tuple = ()

    def key_function(self, nvars: int):
        if self.kind == "lex":
            return lambda e: e
        if self.kind == "grevlex":
            def key(e):
                return (sum(e),) + tuple(-v for v in reversed(e))
            return key
        if self.kind == "block":
            bounds, start = [], 0
            for size in self.blocks:
                bounds.append((start, start + size))
                start += size
            if start != nvars:
                raise ValueError("block sizes do not cover the variables")

            def key(e):
                out = ()
                for a, b in bounds:
                    part = e[a:b]
                    out += (sum(part),) + tuple(-v for v in reversed(part))
                return out
            return key
        raise ValueError(f"unknown term order {self.kind!r}")

    def __str__(self):
        if self.kind == "block":
            return "block(" + ",".join(str(b) for b in self.blocks) + ")"
        return self.kind


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def block_order(*sizes: int) -> TermOrder:
    return TermOrder("block", tuple(sizes))


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------


class Ring:
    """Polynomial ring ``field[names]`` with a fixed term order."""

    def __init__(self, names: Sequence[str], order: TermOrder = GREVLEX, field: str = QQX):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.order = order
        self.field = field
        self.nvars = len(self.names)
        self._keyf = order.key_function(self.nvars)
        self._keys: dict = {}
        self.zero_exp = (0,) * self.nvars
        self.one = field_one(field)
        self.zero = field_zero(field)

    def key(self, e):
        k = self._keys.get(e)
        if k is None:
            k = self._keyf(e)
            self._keys[e] = k
        return k

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.names == other.names
            and self.order == other.order
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.names, self.order, self.field))

    def __repr__(self):
        return f"Ring({self.field}[{', '.join(self.names)}], {self.order})"

    def coerce_coeff(self, c):
        if self.field == QQ:
            if isinstance(c, RatFunc):
                return c.constant_value()
            return Fraction(c)
        return RatFunc.coerce(c)

    def poly(self, terms: dict) -> "Poly":
        return Poly(self, {e: self.coerce_coeff(c) for e, c in terms.items() if c})

    def const(self, c) -> "Poly":
        c = self.coerce_coeff(c)
        return Poly(self, {self.zero_exp: c} if c else {})

    def var(self, i) -> "Poly":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.one})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def with_order(self, order: TermOrder) -> "Ring":
        return Ring(self.names, order, self.field)

    def with_field(self, field: str) -> "Ring":
        return Ring(self.names, self.order, field)

    def parse(self, text: str) -> "Poly":
        symbols = {name: self.var(i) for i, name in enumerate(self.names)}
        if self.field == QQX and "x" not in symbols:
            symbols["x"] = R_X
        value = parse_expression(text, symbols)
        if isinstance(value, Poly):
            return value
        try:
            return self.const(value)
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc)) from exc

    def monomials_up_to(self, d: int) -> list:
        """All exponent tuples of total degree <= d, ascending in the term order."""
        out = []
        for deg in range(d + 1):
            for combo in itertools.combinations_with_replacement(range(self.nvars), deg):
                e = [0] * self.nvars
                for i in combo:
                    e[i] += 1
                out.append(tuple(e))
        out.sort(key=self.key)
        return out


def field_one(field):
    return Fraction(1) if field == QQ else RatFunc.coerce(1)


def field_zero(field):
    return Fraction(0) if field == QQ else RatFunc.coerce(0)


def monomial_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # -- queries -----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def lm(self):
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    @property
    def lc(self):
        return self.terms[self.lm]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            used.update(i for i, v in enumerate(e) if v)
        return used

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exp in self.terms)

    def coefficient(self, e):
        return self.terms.get(e, self.ring.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ----------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = self.ring.coerce_coeff(c)
        if not c:
            return Poly(self.ring, {})
        if c == 1:
            return self
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def mul_term(self, mono, c) -> "Poly":
        return Poly(self.ring, {monomial_mul(e, mono): v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if len(other.terms) < len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        terms: dict = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = monomial_mul(ea, eb)
                v = terms.get(e)
                p = ca * cb
                if v is None:
                    terms[e] = p
                else:
                    v = v + p
                    if v:
                        terms[e] = v
                    else:
                        del terms[e]
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            c = self.ring.coerce_coeff(other)
            return self.scale(1 / c if not isinstance(c, RatFunc) else c.inverse())
        if isinstance(other, Poly) and other.is_constant() and other:
            return self / other.terms[self.ring.zero_exp]
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        lc = self.lc
        if lc == 1:
            return self
        inv = 1 / lc if not isinstance(lc, RatFunc) else lc.inverse()
        return Poly(self.ring, {e: v * inv for e, v in self.terms.items()})

    def map_coeffs(self, fn, ring: Ring | None = None) -> "Poly":
        ring = ring or self.ring
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                terms[e] = ring.coerce_coeff(v)
        return Poly(ring, terms)

    def substitute(self, images: Sequence["Poly"], ring: Ring | None = None, coeff_map=None) -> "Poly":
        """Replace variable i by ``images[i]`` (all in the target ring)."""
        ring = ring or images[0].ring
        result = Poly(ring, {})
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        for e, c in self.terms.items():
            if coeff_map is not None:
                c = coeff_map(c)
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def to_ring(self, ring: Ring, mapping: Sequence[int] | None = None) -> "Poly":
        """Re-embed into ``ring``; variable i goes to ``mapping[i]`` (default: by name)."""
        if mapping is None:
            mapping = [ring.names.index(n) for n in self.ring.names]
        terms = {}
        for e, c in self.terms.items():
            new = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    new[mapping[i]] += k
            terms[tuple(new)] = ring.coerce_coeff(c)
        return Poly(ring, terms)

    def evaluate(self, values: Sequence, x=None):
        """Value at a point; ``x`` is substituted into RatFunc coefficients."""
        total = 0
        for e, c in self.terms.items():
            if isinstance(c, RatFunc):
                if x is not None:
                    c = c(x)
                elif c.is_constant():
                    c = c.constant_value()
                else:
                    raise ValueError("evaluation needs a value for x")
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * v**k
            total = total + t
        return total

    # -- printing -----------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _format_monomial(e, names):
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(names[i])
        elif k:
            parts.append(f"{names[i]}^{k}")
    return "*".join(parts)


def _coeff_text(c):
    """(sign, body, is_one) of a coefficient."""
    if isinstance(c, RatFunc):
        if c.is_constant():
            c = c.constant_value()
        else:
            sign = "+"
            if c.num.lc < 0:
                sign, c = "-", -c
            text = format_ratfunc(c)
            if c.den.degree > 0 or sum(1 for v in c.num.coeffs if v) > 1:
                text = f"({text})"
            return sign, text, False
    sign = "-" if c < 0 else "+"
    a = -c if c < 0 else c
    return sign, _fmt_coeff(a), a == 1


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for e, c in p.sorted_terms():
        sign, body, is_one = _coeff_text(c)
        mono = _format_monomial(e, p.ring.names)
        if not mono:
            text = body
        elif is_one:
            text = mono
        else:
            text = f"{body}*{mono}"
        pieces.append((sign, text))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += sign + text
    return out


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def _inv(c):
    return c.inverse() if isinstance(c, RatFunc) else 1 / c


def reduce_poly(p: Poly, basis: Sequence[Poly]) -> Poly:
    """Complete reduction of ``p`` modulo ``basis`` (remainder of multivariate division)."""
    ring = p.ring
    if not p.terms or not basis:
        return p
    lms = [g.lm for g in basis]
    tails = []
    for g in basis:
        inv = _inv(g.lc)
        lm = g.lm
        tails.append([(e, c * inv) for e, c in g.terms.items() if e != lm])
    work = dict(p.terms)
    key = ring.key
    # keys are flat int tuples; negation gives a max-heap
    heap = [(_neg_key(key(e)), e) for e in work]
    heapq.heapify(heap)
    remainder = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if c is None:
            continue
        for lm, tail in zip(lms, tails):
            if monomial_divides(lm, e):
                q = monomial_div(e, lm)
                for te, tc in tail:
                    m = monomial_mul(te, q)
                    v = work.get(m)
                    delta = tc * c
                    if v is None:
                        work[m] = -delta
                        heapq.heappush(heap, (_neg_key(key(m)), m))
                    else:
                        v = v - delta
                        if v:
                            work[m] = v
                        else:
                            del work[m]
                break
        else:
            remainder[e] = c
    return Poly(ring, remainder)


def _neg_key(k):
    return tuple(-v for v in k)


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def _spoly(f: Poly, g: Poly) -> Poly:
    lcm = monomial_lcm(f.lm, g.lm)
    a = f.mul_term(monomial_div(lcm, f.lm), _inv(f.lc))
    b = g.mul_term(monomial_div(lcm, g.lm), _inv(g.lc))
    return a - b


def groebner_basis(gens: Iterable[Poly], ring: Ring | None = None) -> list:
    """Reduced Gröbner basis, monic, sorted by leading monomial (descending).

    Pairs are processed with the normal strategy (smallest lcm first) and
    pruned by the Gebauer-Möller criteria.
    """
    polys = [g for g in gens if g]
    if not polys:
        return []
    ring = ring or polys[0].ring
    key = ring.key
    # pre-reduce the input against itself to start small
    polys = sorted((g.monic() for g in polys), key=lambda g: key(g.lm))
    basis: list = []  # all polynomials ever added
    active: list = []  # indices currently in G
    pairs: list = []  # heap of (deg, key, i, j)
    counter = itertools.count()

    def push_pair(i, j):
        lcm = monomial_lcm(basis[i].lm, basis[j].lm)
        heapq.heappush(pairs, (sum(lcm), key(lcm), next(counter), i, j))

    def update(h_index):
        nonlocal active, pairs
        h = basis[h_index]
        hlm = h.lm
        # Gebauer-Möller: candidate new pairs
        cands = [(g, monomial_lcm(hlm, basis[g].lm)) for g in active]
        keep = []
        for idx, (g, l1) in enumerate(cands):
            if coprime(hlm, basis[g].lm):
                keep.append((g, l1, True))
                continue
            dominated = False
            for jdx, (g2, l2) in enumerate(cands):
                if jdx == idx:
                    continue
                if monomial_divides(l2, l1) and (l2 != l1 or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                keep.append((g, l1, False))
        # prune existing pairs
        new_pairs = []
        for entry in pairs:
            _, _, _, i, j = entry
            lij = monomial_lcm(basis[i].lm, basis[j].lm)
            if (
                monomial_divides(hlm, lij)
                and monomial_lcm(basis[i].lm, hlm) != lij
                and monomial_lcm(hlm, basis[j].lm) != lij
            ):
                continue
            new_pairs.append(entry)
        heapq.heapify(new_pairs)
        pairs = new_pairs
        for g, l1, is_coprime in keep:
            if not is_coprime:
                push_pair(g, h_index)
        active = [g for g in active if not monomial_divides(hlm, basis[g].lm)]
        active.append(h_index)

    for g in polys:
        r = reduce_poly(g, [basis[i] for i in active])
        if r:
            if r.is_constant():
                return [ring.const(1)]
            basis.append(r.monic())
            update(len(basis) - 1)

    while pairs:
        _, _, _, i, j = heapq.heappop(pairs)
        s = _spoly(basis[i], basis[j])
        r = reduce_poly(s, [basis[k] for k in active])
        if r:
            if r.is_constant():
                return [ring.const(1)]
            basis.append(r.monic())
            update(len(basis) - 1)

    return _interreduce([basis[i] for i in active], ring)


def _interreduce(G: list, ring: Ring) -> list:
    key = ring.key
    # minimal basis
    G = sorted(G, key=lambda g: key(g.lm))
    minimal = []
    for g in G:
        if not any(monomial_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(reduce_poly(g, others).monic())
    out.sort(key=lambda g: key(g.lm), reverse=True)
    return out


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


class PolyIdeal:
    """Finitely generated ideal with a lazily cached reduced Gröbner basis."""

    def __init__(self, ring: Ring, gens: Iterable[Poly] = (), *, is_groebner: bool = False):
        self.ring = ring
        self.gens = [g for g in gens if g]
        for g in self.gens:
            if g.ring != ring:
                raise ValueError("generator lives in a different ring")
        self._gb = list(self.gens) if is_groebner else None

    @classmethod
    def parse(cls, ring: Ring, texts: Iterable[str]) -> "PolyIdeal":
        return cls(ring, [ring.parse(t) for t in texts])

    def groebner(self) -> list:
        if self._gb is None:
            self._gb = groebner_basis(self.gens, self.ring)
        return self._gb

    def reduce(self, p: Poly) -> Poly:
        return reduce_poly(p, self.groebner())

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p)

    def contains_ideal(self, other: "PolyIdeal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.groebner()

    def leading_monomials(self) -> list:
        return [g.lm for g in self.groebner()]

    def canonical_lines(self) -> list:
        return [format_poly(g) for g in self.groebner()]

    def canonical_text(self) -> str:
        return "\n".join(self.canonical_lines())

    def sort_key(self):
        return self.canonical_lines()

    def __eq__(self, other):
        if not isinstance(other, PolyIdeal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def __str__(self):
        return "<" + ", ".join(self.canonical_lines()) + ">"

    def __repr__(self):
        return f"PolyIdeal({self})"


def normal_form(p: Poly, ideal: PolyIdeal) -> Poly:
    return ideal.reduce(p)


def ideal_equal(I: PolyIdeal, J: PolyIdeal) -> bool:
    if I.ring != J.ring:
        raise ValueError("ideals over different rings")
    return I.contains_ideal(J) and J.contains_ideal(I)


def _extended_ring(ring: Ring, front: Sequence[str], order: TermOrder) -> Ring:
    return Ring(tuple(front) + ring.names, order, ring.field)


def _fresh(ring: Ring, base: str) -> str:
    name = base
    while name in ring.names:
        name += "_"
    return name


def eliminate(ideal: PolyIdeal, names: Iterable[str]) -> PolyIdeal:
    """``ideal`` intersected with the subring without ``names``."""
    ring = ideal.ring
    names = list(names)
    rest = [n for n in ring.names if n not in names]
    big = Ring(tuple(names) + tuple(rest), block_order(len(names), len(rest)) if names and rest else GREVLEX, ring.field)
    gb = groebner_basis([g.to_ring(big) for g in ideal.gens], big)
    k = len(names)
    keep = [g for g in gb if all(not any(e[:k]) for e in g.terms)]
    sub = Ring(tuple(rest), ring.order if ring.order.kind != "block" else GREVLEX, ring.field)
    return PolyIdeal(sub, [Poly(sub, {e[k:]: c for e, c in g.terms.items()}) for g in keep])


def intersect(I: PolyIdeal, J: PolyIdeal) -> PolyIdeal:
    """``I ∩ J`` via ``t*I + (1-t)*J`` and elimination of ``t``."""
    ring = I.ring
    if J.ring != ring:
        raise ValueError("ideals over different rings")
    if I.is_unit():
        return PolyIdeal(ring, J.groebner(), is_groebner=True)
    if J.is_unit():
        return PolyIdeal(ring, I.groebner(), is_groebner=True)
    t = _fresh(ring, "t")
    big = _extended_ring(ring, [t], block_order(1, ring.nvars))
    tv = big.var(0)
    gens = [tv * g.to_ring(big) for g in I.gens] + [(1 - tv) * g.to_ring(big) for g in J.gens]
    gb = groebner_basis(gens, big)
    keep = [g for g in gb if all(e[0] == 0 for e in g.terms)]
    return PolyIdeal(ring, [Poly(ring, {e[1:]: c for e, c in g.terms.items()}) for g in keep])


def is_unit_mod(ideal: PolyIdeal, p: Poly, det_poly: Poly) -> bool:
    """Whether ``1 ∈ <ideal, p, det*z - 1>``, i.e. ``p`` is a unit of the localised quotient."""
    ring = ideal.ring
    if p.is_constant() and p:
        return True
    z = _fresh(ring, "z")
    big = Ring(ring.names + (z,), ring.order if ring.order.kind != "block" else GREVLEX, ring.field)
    zv = big.var(big.nvars - 1)
    gens = [g.to_ring(big) for g in ideal.groebner()] + [p.to_ring(big), det_poly.to_ring(big) * zv - 1]
    gb = groebner_basis(gens, big)
    return len(gb) == 1 and gb[0].is_constant()


def standard_monomials(ideal: PolyIdeal, d: int) -> list:
    """Monomials of degree <= d outside the leading-term ideal, ascending."""
    lms = ideal.leading_monomials()
    return [e for e in ideal.ring.monomials_up_to(d) if not any(monomial_divides(m, e) for m in lms)]


def ideal_sum(I: PolyIdeal, polys: Iterable[Poly]) -> PolyIdeal:
    return PolyIdeal(I.ring, list(I.groebner()) + list(polys))


def canonical_ideal_text(ideal: PolyIdeal) -> str:
    """Sorted generator listing used for golden files and CLI output."""
    return ideal.canonical_text()
