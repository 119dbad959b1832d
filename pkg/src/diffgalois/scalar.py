"""Exact arithmetic over Q, Q[x] and Q(x).

Rationals are :class:`fractions.Fraction`.  Univariate polynomials are dense
tuples of Fractions (lowest degree first); rational functions keep a monic
denominator coprime to the numerator, so equal values have equal
representations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import flint

from .errors import ParseError, PoleError

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class UniPoly:
    """Dense univariate polynomial in ``x`` with rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim(Fraction(c) for c in coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs):
        # coeffs already trimmed tuple of Fractions
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls._raw((_ZERO, _ONE))

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    @property
    def tc(self) -> Fraction:
        """Lowest-order nonzero coefficient."""
        for c in self.coeffs:
            if c:
                return c
        return _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim((Fraction(other),))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("UniPoly", self.coeffs))
        return self._hash

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(_trim(out))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return UniPoly._raw(())
            return UniPoly._raw(tuple(c * other for c in self.coeffs))
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly._raw(())
        if len(b) == 1:
            return self * b[0]
        if len(a) == 1:
            return other * a[0]
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
        return UniPoly._raw(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly._raw((_ONE,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return UniPoly._raw(()), self
        inv = 1 / other.lc
        b = other.coeffs
        quo = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv
            quo[k - db] = q
            for j in range(db + 1):
                if b[j]:
                    rem[k - db + j] -= q * b[j]
        return UniPoly._raw(_trim(quo)), UniPoly._raw(_trim(rem[:db]))

    def __floordiv__(self, other):
        o = self._coerce(other)
        return self.divmod(o)[0]

    def __mod__(self, other):
        o = self._coerce(other)
        return self.divmod(o)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "UniPoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = 1 / self.coeffs[-1]
        return UniPoly._raw(tuple(c * inv for c in self.coeffs))

    def derivative(self) -> "UniPoly":
        return UniPoly._raw(_trim(c * i for i, c in enumerate(self.coeffs) if i))

    def __call__(self, value):
        result = _ZERO if isinstance(value, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def shift(self, m) -> "UniPoly":
        """``p(x + m)``."""
        if not m or len(self.coeffs) <= 1:
            return self
        m = Fraction(m)
        c = list(self.coeffs)
        n = len(c)
        # Taylor shift by repeated synthetic division
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += m * c[j + 1]
        return UniPoly._raw(tuple(c))

    def scale_arg(self, a) -> "UniPoly":
        """``p(a*x)``."""
        a = Fraction(a)
        out, p = [], _ONE
        for c in self.coeffs:
            out.append(c * p)
            p *= a
        return UniPoly._raw(_trim(out))

    def content_integer(self):
        """Return (c, q) with p = c*q, q primitive in Z[x] with positive leading coefficient."""
        if not self.coeffs:
            return _ZERO, self
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), UniPoly._raw(tuple(Fraction(v // g) for v in ints))

    def integer_coeffs(self) -> list[int]:
        _, q = self.content_integer()
        return [int(c) for c in q.coeffs]

    # -- printing --------------------------------------------------------
    def __str__(self):
        return format_poly(self.coeffs, "x")

    def __repr__(self):
        return f"UniPoly({str(self)!r})"


X = UniPoly.x()
ONE_POLY = UniPoly((1,))
ZERO_POLY = UniPoly(())


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero only if both inputs are zero)."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = ONE_POLY, ZERO_POLY
    t0, t1 = ZERO_POLY, ONE_POLY
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lc
    if lc and lc != 1:
        inv = 1 / lc
        r0, s0, t0 = r0 * inv, s0 * inv, t0 * inv
    return r0, s0, t0


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return ZERO_POLY
    return (a * b.exact_div(poly_gcd(a, b))).monic()


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(coeffs, var: str) -> str:
    """Descending-degree text in the ``+ - * ^`` grammar."""
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = _fmt_coeff(a)
        else:
            mon = var if k == 1 else f"{var}^{k}"
            body = mon if a == 1 else f"{_fmt_coeff(a)}*{mon}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += sign + body
    return text


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Element of Q(x) in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if not isinstance(num, UniPoly):
            num = UniPoly((num,))
        if den is None:
            den = ONE_POLY
        elif not isinstance(den, UniPoly):
            den = UniPoly((den,))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO_POLY, ONE_POLY
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, UniPoly):
            return cls._raw(value, ONE_POLY)
        if isinstance(value, (int, Fraction)):
            return cls._raw(UniPoly((value,)), ONE_POLY)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatFunc")

    # -- queries ---------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree == 0

    def is_constant(self):
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.lc

    @property
    def degree(self) -> int:
        """max(deg num, deg den), the usual height of a rational function."""
        return max(self.num.degree, self.den.degree)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, UniPoly)):
            return self.den.degree == 0 and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.den.degree == 0 and self.num.degree <= 0:
                self._hash = hash(self.num.lc)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            return RatFunc._raw(self.num + self.den * other, self.den)
        if isinstance(other, UniPoly):
            other = RatFunc._raw(other, ONE_POLY)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        b, d = self.den, other.den
        if b.degree == 0 and d.degree == 0:
            return RatFunc._raw(self.num + other.num, ONE_POLY)
        if b == d:
            num = self.num + other.num
            if num.is_zero():
                return RatFunc._raw(ZERO_POLY, ONE_POLY)
            g = poly_gcd(num, b)
            if g.degree > 0:
                return RatFunc._raw(num.exact_div(g), b.exact_div(g))
            return RatFunc._raw(num, b)
        g = poly_gcd(b, d)
        if g.degree == 0:
            num = self.num * d + other.num * b
            return RatFunc._raw(num, b * d) if num else RatFunc._raw(ZERO_POLY, ONE_POLY)
        b1, d1 = b.exact_div(g), d.exact_div(g)
        num = self.num * d1 + other.num * b1
        if num.is_zero():
            return RatFunc._raw(ZERO_POLY, ONE_POLY)
        h = poly_gcd(num, g)
        if h.degree > 0:
            num = num.exact_div(h)
            g = g.exact_div(h)
        den = b1 * d1 * g
        return RatFunc._raw(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, UniPoly, RatFunc)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc._raw(ZERO_POLY, ONE_POLY)
            return RatFunc._raw(self.num * other, self.den)
        if isinstance(other, UniPoly):
            other = RatFunc._raw(other, ONE_POLY)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc._raw(ZERO_POLY, ONE_POLY)
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.degree == 0 and d.degree == 0:
            return RatFunc._raw(a * c, ONE_POLY)
        if d.degree > 0 and a.degree > 0:
            g = poly_gcd(a, d)
            if g.degree > 0:
                a, d = a.exact_div(g), d.exact_div(g)
        if b.degree > 0 and c.degree > 0:
            g = poly_gcd(c, b)
            if g.degree > 0:
                c, b = c.exact_div(g), b.exact_div(g)
        return RatFunc._raw(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        lc = den.lc
        if lc != 1:
            inv = 1 / lc
            num, den = num * inv, den * inv
        return RatFunc._raw(num, den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc._raw(self.num * (1 / Fraction(other)), self.den)
        if isinstance(other, UniPoly):
            other = RatFunc._raw(other, ONE_POLY)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._raw(self.num**e, self.den**e)

    def shift(self, m) -> "RatFunc":
        """``f(x + m)``; the action of sigma^m."""
        if not m or (self.num.degree <= 0 and self.den.degree == 0):
            return self
        return RatFunc._raw(self.num.shift(m), self.den.shift(m))

    def scale_arg(self, a) -> "RatFunc":
        return RatFunc(self.num.scale_arg(a), self.den.scale_arg(a))

    def __call__(self, value):
        return eval_at(self, value)

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def format_ratfunc(f: RatFunc, var: str = "x") -> str:
    num = format_poly(f.num.coeffs, var)
    if f.den.degree == 0:
        return num
    den = format_poly(f.den.coeffs, var)
    if sum(1 for c in f.num.coeffs if c) > 1:
        num = f"({num})"
    if sum(1 for c in f.den.coeffs if c) > 1:
        den = f"({den})"
    return f"{num}/{den}"


R_ZERO = RatFunc._raw(ZERO_POLY, ONE_POLY)
R_ONE = RatFunc._raw(ONE_POLY, ONE_POLY)
R_X = RatFunc._raw(X, ONE_POLY)


def shift(p, m):
    """``p(x + m)`` for a UniPoly or RatFunc."""
    return p.shift(m)


def eval_at(f, value):
    """Exact value of a UniPoly or RatFunc at a rational point."""
    if isinstance(f, UniPoly):
        return f(Fraction(value))
    value = Fraction(value)
    d = f.den(value)
    if d == 0:
        raise PoleError(value)
    return f.num(value) / d


def eval_at_integer(f: RatFunc, i: int) -> Fraction:
    return eval_at(f, i)


# ---------------------------------------------------------------------------
# factorisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactoredRatFunc:
    """``unit * prod(p**e)`` with monic irreducible, pairwise distinct ``p``."""

    unit: Fraction
    factors: tuple  # of (UniPoly, int)

    def expand(self) -> RatFunc:
        num, den = UniPoly((self.unit,)), ONE_POLY
        for p, e in self.factors:
            if e > 0:
                num = num * p**e
            else:
                den = den * p ** (-e)
        return RatFunc(num, den)

    def exponent_of(self, p: UniPoly) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def _flint_factor(coeffs_int: tuple):
    lc, facs = flint.fmpz_poly(list(coeffs_int)).factor()
    out = [(UniPoly(Fraction(int(c)) for c in f.coeffs()), e) for f, e in facs]
    return Fraction(int(lc)), out


@lru_cache(maxsize=4096)
def _factor_cached(coeffs: tuple):
    p = UniPoly._raw(coeffs)
    content, prim = p.content_integer()
    if prim.degree <= 0:
        return content * prim.lc, ()
    lc, facs = _flint_factor(tuple(int(c) for c in prim.coeffs))
    unit = content * lc
    monic = []
    for q, e in facs:
        unit *= q.lc**e
        monic.append((q.monic(), e))
    monic.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return unit, tuple(monic)


def factor(p) -> FactoredRatFunc:
    """Irreducible factorisation over Q of a nonzero UniPoly or RatFunc."""
    if isinstance(p, RatFunc):
        if p.is_zero():
            raise ValueError("factor of zero")
        u1, f1 = _factor_cached(p.num.coeffs)
        u2, f2 = _factor_cached(p.den.coeffs)
        exps: dict = {}
        for q, e in f1:
            exps[q] = exps.get(q, 0) + e
        for q, e in f2:
            exps[q] = exps.get(q, 0) - e
        facs = tuple(sorted(((q, e) for q, e in exps.items() if e), key=lambda t: (t[0].degree, t[0].coeffs)))
        return FactoredRatFunc(u1 / u2, facs)
    if p.is_zero():
        raise ValueError("factor of zero polynomial")
    unit, facs = _factor_cached(p.coeffs)
    return FactoredRatFunc(unit, facs)


def rational_roots(p: UniPoly) -> list[Fraction]:
    if p.is_zero():
        raise ValueError("roots of zero polynomial")
    roots = [-q.coeffs[0] for q, _ in factor(p).factors if q.degree == 1]
    return sorted(roots)


def integer_roots(p: UniPoly) -> list[int]:
    return [int(r) for r in rational_roots(p) if r.denominator == 1]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        if m.group(1):
            out.append(("num", int(m.group(1))))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_expression(text: str, symbols: Mapping[str, object], constant: Callable = Fraction):
    """Recursive-descent parser for ``integers, names, + - * / ^, ( )``.

    Names are looked up in ``symbols``; the returned object is whatever the
    symbol values produce under Python arithmetic.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        value = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            if op == "*":
                value = value * rhs
            else:
                value = _divide(value, rhs)
        return value

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            neg = False
            if peek() == ("op", "-"):
                take()
                neg = True
            kind, val = take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer in {text!r}")
            if neg:
                return _divide(constant(1), base**val)
            return base**val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return constant(val)
        if kind == "name":
            if val not in symbols:
                raise ParseError(f"unknown symbol {val!r} in {text!r}")
            return symbols[val]
        if (kind, val) == ("op", "("):
            value = expr()
            if take() != ("op", ")"):
                raise ParseError(f"missing ')' in {text!r}")
            return value
        raise ParseError(f"unexpected token {val!r} in {text!r}")

    if not toks:
        raise ParseError("empty expression")
    result = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return result


def _divide(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / Fraction(b)
    if isinstance(b, UniPoly):
        b = RatFunc.coerce(b)
    if isinstance(a, UniPoly):
        a = RatFunc.coerce(a)
    try:
        return a / b
    except TypeError as exc:  # pragma: no cover - defensive
        raise ParseError(str(exc)) from exc


def parse_ratfunc(text: str) -> RatFunc:
    value = parse_expression(text, {"x": R_X})
    return RatFunc.coerce(value)


def parse_unipoly(text: str) -> UniPoly:
    f = parse_ratfunc(text)
    if not f.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return f.num


def to_flint(p: UniPoly) -> "flint.fmpq_poly":
    return flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in p.coeffs])


def from_flint(p) -> UniPoly:
    return UniPoly._raw(tuple(Fraction(int(c.p), int(c.q)) for c in p.coeffs()))
