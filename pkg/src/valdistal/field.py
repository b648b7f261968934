"""Exact valued fields with finite residue field.

Two backends are provided:

* ``F_p(t)`` with either an ``s``-adic place for a monic irreducible ``s``
  (``t``-adic when ``s = t``) or the place at infinity;
* ``Q`` with a ``p``-adic place.

Elements of ``F_p(t)`` are :class:`RatFunc` values, elements of ``Q`` are
:class:`fractions.Fraction`. Both are immutable, hashable and in canonical
reduced form, so ``==`` is field equality.

Valuations take values in ``Z`` plus ``+inf`` for zero. The extended values
``INF`` / ``NEG_INF`` are ``math.inf`` sentinels; radii of balls may also be
:class:`~fractions.Fraction` (see :mod:`valdistal.balls`).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import poly as P
from .lexer import ParseError, TokenStream

INF = math.inf
NEG_INF = -math.inf

ExtInt = Union[int, float]
Radius = Union[int, Fraction, float]


class FieldError(ValueError):
    """Invalid field context or element."""


class NegativeValuationError(FieldError):
    """Residue requested for an element outside the valuation ring."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


# -- extended integers / radii -------------------------------------------------

def normalize_radius(r) -> Radius:
    if isinstance(r, float):
        if math.isinf(r):
            return r
        raise FieldError(f"radius must be exact, got float {r!r}")
    if isinstance(r, Fraction):
        return r.numerator if r.denominator == 1 else r
    if isinstance(r, int):
        return r
    raise FieldError(f"invalid radius {r!r}")


def format_ext(r: Radius) -> str:
    if r == INF:
        return "+inf"
    if r == NEG_INF:
        return "-inf"
    return str(r)


def parse_ext(text: str) -> Radius:
    s = str(text).strip()
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return NEG_INF
    try:
        return normalize_radius(Fraction(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise FieldError(f"invalid extended integer {text!r}") from exc


def ceil_ext(r: Radius) -> Radius:
    if isinstance(r, float):
        return r
    return math.ceil(r)


# -- rational functions over F_p -----------------------------------------------

class RatFunc:
    """An element num/den of F_p(t), gcd-reduced with monic denominator."""

    __slots__ = ("p", "num", "den", "_hash")

    def __init__(self, p: int, num=P.ZERO, den=P.ONE, *, reduced: bool = False):
        self.p = p
        if not reduced:
            num, den = _reduce(tuple(num), tuple(den), p)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_int(cls, p: int, c: int) -> RatFunc:
        return cls(p, P.const(c, p), P.ONE, reduced=True)

    def _coerce(self, other) -> RatFunc:
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise FieldError(f"characteristic mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return RatFunc.from_int(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.den == other.den:
            num = P.add(self.num, other.num, p)
            if self.den == P.ONE:
                return RatFunc(p, num, P.ONE, reduced=True)
            return RatFunc(p, num, self.den)
        num = P.add(P.mul(self.num, other.den, p), P.mul(other.num, self.den, p), p)
        return RatFunc(p, num, P.mul(self.den, other.den, p))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.p, P.neg(self.num, self.p), self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        num = P.mul(self.num, other.num, p)
        if self.den == P.ONE and other.den == P.ONE:
            return RatFunc(p, num, P.ONE, reduced=True)
        return RatFunc(p, num, P.mul(self.den, other.den, p))

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if not self.num:
            raise ZeroDivisionError("division by zero in F_p(t)")
        return RatFunc(self.p, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc.from_int(self.p, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.from_int(self.p, other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.p == other.p and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def is_poly(self) -> bool:
        return self.den == P.ONE

    def __str__(self):
        if self.den == P.ONE:
            return P.to_str(self.num)
        return f"({P.to_str(self.num)})/({P.to_str(self.den)})"

    def __repr__(self):
        return f"RatFunc(F{self.p}: {self})"


def _reduce(num, den, p):
    num, den = P.trim(n % p for n in num), P.trim(d % p for d in den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return P.ZERO, P.ONE
    if den == P.ONE:
        return num, den
    if len(den) > 1:
        g = P.gcd(num, den, p)
        if g != P.ONE:
            num = P.divmod_(num, g, p)[0]
            den = P.divmod_(den, g, p)[0]
    lc = den[-1]
    if lc != 1:
        inv = pow(lc, p - 2, p)
        num = P.scale(num, inv, p)
        den = P.scale(den, inv, p)
    return num, den


# -- contexts ------------------------------------------------------------------

@dataclass(frozen=True)
class FieldContext:
    """A valued field K together with a discrete rank-one place.

    Subclasses fix the backend and the place; ``q`` is the size of the
    residue field.
    """

    p: int
    _cache: dict = field(default_factory=dict, init=False, compare=False, hash=False, repr=False)

    # subclass hooks
    q: int = field(init=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def dist(self, a, b) -> ExtInt:
        """v(a - b), memoized per context."""
        key = (a, b)
        cache = self._cache
        v = cache.get(key)
        if v is None:
            if len(cache) > 2_000_000:
                cache.clear()
            v = self.valuation(a - b)
            cache[key] = v
            cache[(b, a)] = v
        return v

    def truncate(self, a, n: int):
        """The canonical c with v(a - c) >= n: a's expansion below index n."""
        out = self.zero
        pi = self.uniformizer
        while True:
            k = self.valuation(a)
            if k >= n:
                return out
            unit = a / pi ** k
            term = self.lift(self.residue(unit)) * pi ** k
            out = out + term
            a = a - term

    def parse(self, text: str, params: dict | None = None):
        """Parse an element in the ASCII syntax, e.g. ``(1+t^2)/(t)`` or ``7/3``."""
        ts = TokenStream(text)
        value = parse_element(ts, self, params)
        ts.expect_end()
        return value

    def format(self, a) -> str:
        return str(a)

    def sample_points(self, height: int) -> list:
        raise NotImplementedError

    def enumerate_bounded(self, n: int) -> list:
        raise FieldError("enumerate_bounded requires a function-field backend")


@dataclass(frozen=True)
class FunctionFieldContext(FieldContext):
    """F_p(t) with the place of a monic irreducible polynomial ``s``."""

    s: tuple = P.T

    def __post_init__(self):
        super().__post_init__()
        s = P.trim(c % self.p for c in self.s)
        if P.deg(s) < 1 or s[-1] != 1:
            raise FieldError("place polynomial must be monic of positive degree")
        if not P.is_irreducible(s, self.p):
            raise FieldError(f"{P.to_str(s)} is reducible over F_{self.p}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "q", self.p ** P.deg(s))

    @property
    def gen(self) -> RatFunc:
        return RatFunc(self.p, P.T, reduced=True)

    @property
    def uniformizer(self) -> RatFunc:
        return RatFunc(self.p, self.s, reduced=True)

    @property
    def name(self) -> str:
        return f"F{self.p}(t)@{P.to_str(self.s)}"

    def element(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            if x.p != self.p:
                raise FieldError("element from a different characteristic")
            return x
        if isinstance(x, int):
            return RatFunc.from_int(self.p, x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, tuple):
            return RatFunc(self.p, x)
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}(t)")

    def _ord(self, f: tuple) -> int:
        if self.s == P.T:
            for i, c in enumerate(f):
                if c:
                    return i
        k = 0
        while True:
            quo, rem = P.divmod_(f, self.s, self.p)
            if rem:
                return k
            f = quo
            k += 1

    def valuation(self, a: RatFunc) -> ExtInt:
        if not a.num:
            return INF
        return self._ord(a.num) - self._ord(a.den)

    def residue(self, a: RatFunc) -> tuple:
        """Residue as a polynomial of degree < deg(s)."""
        v = self.valuation(a)
        if v < 0:
            raise NegativeValuationError(f"residue undefined: v({a}) = {v} < 0")
        if v > 0:
            return P.ZERO
        p, s = self.p, self.s
        num, den = a.num, a.den
        if s == P.T:
            return P.const(num[0] * pow(den[0], p - 2, p), p)
        num = P.mod(num, s, p)
        den = P.mod(den, s, p)
        return P.mod(P.mul(num, P.inverse_mod(den, s, p), p), s, p)

    def lift(self, r: tuple) -> RatFunc:
        return RatFunc(self.p, r)

    def residue_lifts(self) -> list[RatFunc]:
        return [self.lift(r) for r in P.all_of_degree_below(P.deg(self.s), self.p)]

    def enumerate_bounded(self, n: int) -> list[RatFunc]:
        if n < 0:
            raise FieldError("n must be non-negative")
        return [RatFunc(self.p, c, reduced=True) for c in P.all_of_degree_below(n, self.p)]

    def sample_points(self, height: int) -> list[RatFunc]:
        p = self.p
        pts = set(self.enumerate_bounded(height))
        small = self.enumerate_bounded(min(height, 2))
        for d in range(1, 3):
            for den in P.monics_of_degree(d, p):
                dd = RatFunc(p, den, reduced=True)
                pts.update(a / dd for a in small)
        pi = self.uniformizer
        for k in range(1, 4):
            for c in small:
                pts.add(c + pi ** k)
                pts.add(c + pi ** -k)
        return sorted(pts, key=element_sort_key)


@dataclass(frozen=True)
class InfinitePlaceContext(FieldContext):
    """F_p(t) with the degree valuation v(f/g) = deg g - deg f."""

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "q", self.p)

    @property
    def gen(self) -> RatFunc:
        return RatFunc(self.p, P.T, reduced=True)

    @property
    def uniformizer(self) -> RatFunc:
        return RatFunc(self.p, P.ONE, P.T, reduced=True)

    @property
    def name(self) -> str:
        return f"F{self.p}(t)@inf"

    element = FunctionFieldContext.element
    enumerate_bounded = FunctionFieldContext.enumerate_bounded

    def valuation(self, a: RatFunc) -> ExtInt:
        if not a.num:
            return INF
        return P.deg(a.den) - P.deg(a.num)

    def residue(self, a: RatFunc) -> tuple:
        v = self.valuation(a)
        if v < 0:
            raise NegativeValuationError(f"residue undefined: v({a}) = {v} < 0")
        if v > 0:
            return P.ZERO
        return P.const(a.num[-1] * pow(a.den[-1], self.p - 2, self.p), self.p)

    def lift(self, r: tuple) -> RatFunc:
        return RatFunc(self.p, r)

    def residue_lifts(self) -> list[RatFunc]:
        return [self.lift(P.const(c, self.p)) for c in range(self.p)]

    def sample_points(self, height: int) -> list[RatFunc]:
        p = self.p
        pts = set(self.enumerate_bounded(height))
        small = self.enumerate_bounded(min(height, 2))
        for d in range(1, 3):
            for den in P.monics_of_degree(d, p):
                dd = RatFunc(p, den, reduced=True)
                pts.update(a / dd for a in small)
        return sorted(pts, key=element_sort_key)


@dataclass(frozen=True)
class PAdicContext(FieldContext):
    """Q with the p-adic valuation."""

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "q", self.p)

    @property
    def gen(self):
        raise FieldError("Q has no generator t")

    @property
    def uniformizer(self) -> Fraction:
        return Fraction(self.p)

    @property
    def name(self) -> str:
        return f"Q@{self.p}"

    def element(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise FieldError(f"cannot coerce {x!r} into Q")

    def _ord(self, n: int) -> int:
        k = 0
        while n % self.p == 0:
            n //= self.p
            k += 1
        return k

    def valuation(self, a: Fraction) -> ExtInt:
        if a == 0:
            return INF
        return self._ord(a.numerator) - self._ord(a.denominator)

    def residue(self, a: Fraction) -> int:
        v = self.valuation(a)
        if v < 0:
            raise NegativeValuationError(f"residue undefined: v({a}) = {v} < 0")
        if v > 0:
            return 0
        return a.numerator * pow(a.denominator, -1, self.p) % self.p

    def lift(self, r: int) -> Fraction:
        return Fraction(r)

    def residue_lifts(self) -> list[Fraction]:
        return [Fraction(c) for c in range(self.p)]

    def sample_points(self, height: int) -> list[Fraction]:
        p = self.p
        h = 3 * height
        pts = {Fraction(a, b) for a in range(-h, h + 1) for b in range(1, height + 2)}
        for k in range(1, 4):
            for c in range(-2, 3):
                pts.add(Fraction(c) + Fraction(p) ** k)
                pts.add(Fraction(c) + Fraction(1, p ** k))
        return sorted(pts, key=element_sort_key)


def element_sort_key(a) -> tuple:
    """A deterministic total order on field elements (not the field order)."""
    if isinstance(a, RatFunc):
        return (len(a.den), a.den, len(a.num), a.num)
    return (a.denominator, abs(a.numerator), a.numerator)


_CTX_RE = re.compile(r"^\s*(?:F(?P<p>\d+)\(t\)@(?P<place>.+)|Q@(?P<qp>\d+))\s*$")


def make_context(spec: str) -> FieldContext:
    """Build a context from ``F<p>(t)@t``, ``F<p>(t)@<poly in t>``, ``F<p>(t)@inf`` or ``Q@<p>``."""
    m = _CTX_RE.match(spec)
    if m is None:
        raise FieldError(
            f"bad context {spec!r}; expected e.g. 'F2(t)@t', 'F2(t)@t^2+t+1', 'F3(t)@inf', 'Q@5'"
        )
    if m.group("qp"):
        return PAdicContext(int(m.group("qp")))
    p = int(m.group("p"))
    place = m.group("place").strip()
    if place == "inf":
        return InfinitePlaceContext(p)
    probe = FunctionFieldContext(p) if is_prime(p) else None
    if probe is None:
        raise FieldError(f"{p} is not prime")
    s = probe.parse(place)
    if not s.is_poly():
        raise FieldError(f"place {place!r} is not a polynomial")
    return FunctionFieldContext(p, s.num)


# -- element syntax ------------------------------------------------------------

RESERVED = {"x", "v", "inf", "div", "affine", "in", "closed", "open", "c"}


def parse_element(ts: TokenStream, ctx: FieldContext, params: dict | None = None):
    """expr := [+-] term ([+-] term)* ; term := factor ([*/] factor)* ;
    factor := atom [^ [-] int] ; atom := int | t | param | ( expr )"""
    neg = False
    if ts.accept("-"):
        neg = True
    else:
        ts.accept("+")
    value = _term(ts, ctx, params)
    if neg:
        value = -value
    while ts.at("+", "-"):
        op = ts.next().text
        rhs = _term(ts, ctx, params)
        value = value + rhs if op == "+" else value - rhs
    return value


def _term(ts, ctx, params):
    value = _factor(ts, ctx, params)
    while True:
        if ts.at("*", "/"):
            tok = ts.next()
            rhs = _factor(ts, ctx, params)
            if tok.text == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ts.error("division by zero", tok)
                value = value / rhs
        elif ts.peek().kind == "ident" and ts.peek().text not in RESERVED:
            value = value * _factor(ts, ctx, params)
        else:
            return value


def _factor(ts, ctx, params):
    base = _atom(ts, ctx, params)
    if ts.accept("^"):
        sign = -1 if ts.accept("-") else 1
        tok = ts.next()
        if tok.kind != "int":
            raise ts.error("expected integer exponent", tok)
        k = sign * int(tok.text)
        if k < 0 and not base:
            raise ts.error("zero raised to a negative power", tok)
        base = base ** k
    return base


def _atom(ts, ctx, params):
    tok = ts.peek()
    if tok.kind == "int":
        ts.next()
        return ctx.element(int(tok.text))
    if tok.kind == "ident":
        if tok.text == "t":
            ts.next()
            try:
                return ctx.gen
            except FieldError:
                raise ts.error("'t' is not an element of Q", tok) from None
        if params and tok.text in params:
            ts.next()
            return ctx.element(params[tok.text])
        raise ts.error(f"unknown identifier {tok.text!r}", tok)
    if ts.accept("("):
        value = parse_element(ts, ctx, params)
        ts.expect(")")
        return value
    raise ts.error(f"expected an element, found {tok.text or 'end of input'!r}", tok)


__all__ = [
    "INF", "NEG_INF", "ExtInt", "Radius", "FieldError", "NegativeValuationError", "ParseError",
    "RatFunc", "FieldContext", "FunctionFieldContext", "InfinitePlaceContext", "PAdicContext",
    "make_context", "parse_element", "element_sort_key", "format_ext", "parse_ext",
    "normalize_radius", "ceil_ext", "is_prime",
]
