"""Parser and printer for the one-variable formula DSL.

Grammar (ASCII)::

    formula   := conj ('|' conj)*
    conj      := unary ('&' unary)*
    unary     := '!' unary | '(' formula ')' | atom
    atom      := 'true' | 'false'
               | lincomb relop threshold
               | 'affine' '{' lincomb relop threshold '}'
               | 'div' '(' factored [';' 'c' '=' elt] '|' factored [';' 'c' '=' elt] ')'
               | 'x' '=' elt
               | 'x' 'in' ('closed' | 'open') '(' elt ',' radius ')'
    lincomb   := [+-] [int ['*']] 'v' '(' 'x' tail ')' ([+-] [int ['*']] 'v' '(' 'x' tail ')')*
    threshold := [+-] tterm ([+-] tterm)*     tterm := int | 'inf' | [int '*'] 'v' '(' elt ')'
    factored  := '1' | factor ('*' factor)*   factor := 'x' ['^' int] | '(' 'x' tail ')' ['^' int]

``tail`` is a sum of signed element terms, so ``x-1-t`` is ``x - (1+t)``.
Elements may mention parameter names bound through ``params``.
"""

from __future__ import annotations

from fractions import Fraction

from ..balls import CLOSED, OPEN, Ball
from ..cheese import InBall
from ..field import INF, NEG_INF, FieldContext, format_ext, normalize_radius, parse_element
from ..field import _term as _element_term
from ..lexer import ParseError, TokenStream
from ..logic import FALSE, TRUE, And, Not, Or
from .ast import AffineValuationConstraint, Divides, Equals, Factored

_RELOPS = ("<=", ">=", "==", "<", ">", "=")

FACTOR_HINT = "polynomials must be given factored, e.g. (x-a)^2*(x-b) ; c=<unit>"


def parse(text: str, ctx: FieldContext, params: dict | None = None):
    """Parse DSL text into a QF formula over ``ctx``."""
    ts = TokenStream(text)
    f = _Parser(ts, ctx, params or {}).formula()
    ts.expect_end()
    return f


class _Parser:
    def __init__(self, ts: TokenStream, ctx: FieldContext, params: dict):
        self.ts = ts
        self.ctx = ctx
        self.params = params

    def elt(self):
        return parse_element(self.ts, self.ctx, self.params)

    def sign(self) -> int:
        if self.ts.accept("-"):
            return -1
        self.ts.accept("+")
        return 1

    def formula(self):
        parts = [self.conj()]
        while self.ts.accept("|"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.ts.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        ts = self.ts
        if ts.accept("!"):
            return Not(self.unary())
        if ts.accept("("):
            f = self.formula()
            ts.expect(")")
            return f
        return self.atom()

    def atom(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("true"):
            return TRUE
        if ts.accept("false"):
            return FALSE
        if ts.accept("affine"):
            ts.expect("{")
            c = self.constraint()
            ts.expect("}")
            return c
        if ts.accept("div"):
            return self.divides()
        if ts.at("x"):
            ts.next()
            if ts.accept("in"):
                return self.ball_atom()
            if ts.accept("=", "=="):
                return Equals(self.elt())
            raise ts.error("expected '=' or 'in' after x")
        if tok.kind == "int" or ts.at("v", "-", "+"):
            return self.constraint()
        raise ts.error(f"expected a formula, found {tok.text or 'end of input'!r}", tok)

    # -- affine constraints -------------------------------------------------

    def constraint(self):
        ts = self.ts
        start = ts.peek()
        terms = self.lincomb()
        tok = ts.peek()
        rel = None
        for op in _RELOPS:
            if ts.accept(op):
                rel = "=" if op == "==" else op
                break
        if rel is None:
            raise ts.error("expected a relation (<, <=, =, >=, >)", tok)
        nu = self.threshold()
        if not terms:
            raise ts.error("constraint needs at least one v(x - g) term", start)
        return AffineValuationConstraint.merged(terms, rel, nu)

    def lincomb(self):
        ts = self.ts
        terms = []
        sign = self.sign()
        while True:
            n = 1
            if ts.peek().kind == "int":
                n = int(ts.next().text)
                ts.accept("*")
            ts.expect("v")
            ts.expect("(")
            if not ts.at("x"):
                raise ts.error("left-hand side terms must be v(x - <elt>)")
            ts.next()
            center = self.tail()
            ts.expect(")")
            terms.append((sign * n, center))
            if ts.at("+", "-") and (ts.peek(1).kind == "int" or ts.peek(1).text == "v"):
                sign = -1 if ts.next().text == "-" else 1
                continue
            return terms

    def tail(self):
        """After ``x``: a signed sum s; the center is -s."""
        ts = self.ts
        total = self.ctx.zero
        while ts.at("+", "-"):
            op = ts.next().text
            term = _element_term(ts, self.ctx, self.params)
            total = total + term if op == "+" else total - term
        return -total

    def threshold(self):
        ts = self.ts
        sign = self.sign()
        total = 0
        while True:
            total = total + sign * self.tterm()
            if ts.at("+", "-"):
                sign = -1 if ts.next().text == "-" else 1
                continue
            return total

    def tterm(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("inf"):
            return INF
        n = 1
        if tok.kind == "int":
            n = int(ts.next().text)
            if not ts.accept("*"):
                if not ts.at("v"):
                    return n
        if ts.accept("v"):
            ts.expect("(")
            val = self.ctx.valuation(self.elt())
            ts.expect(")")
            return n * val if val != INF else (INF if n > 0 else NEG_INF)
        raise ts.error("expected an integer, inf, or v(<elt>) threshold", tok)

    # -- divisibility atoms ---------------------------------------------------

    def divides(self):
        ts = self.ts
        ts.expect("(")
        f = self.factored()
        ts.expect("|")
        g = self.factored()
        ts.expect(")")
        return Divides(f, g)

    def factored(self):
        ts = self.ts
        roots: dict = {}
        tok = ts.peek()
        if tok.kind == "int" and tok.text == "1" and not ts.peek(1).text == "*":
            ts.next()
        else:
            while True:
                root, mult = self.factor()
                roots[root] = roots.get(root, 0) + mult
                if not ts.accept("*"):
                    break
        if ts.at("+", "-"):
            raise ts.error(f"sums are not allowed here; {FACTOR_HINT}")
        const = self.ctx.one
        if ts.accept(";"):
            ts.expect("c")
            ts.expect("=")
            ctok = ts.peek()
            const = self.elt()
            if not const:
                raise ts.error("leading constant must be nonzero", ctok)
        return Factored(const, tuple(roots.items()))

    def factor(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("x"):
            root = self.tail() if ts.at("+", "-") else self.ctx.zero
        elif ts.accept("("):
            if not ts.at("x"):
                raise ts.error(f"expected (x - <elt>); {FACTOR_HINT}", tok)
            ts.next()
            if ts.at("^", "*"):
                raise ts.error(f"powers of x inside a factor are not factored; {FACTOR_HINT}")
            root = self.tail()
            if not ts.at(")"):
                raise ts.error(f"expected ')'; {FACTOR_HINT}")
            ts.next()
        else:
            raise ts.error(f"expected a factor (x - <elt>); {FACTOR_HINT}", tok)
        mult = 1
        if ts.accept("^"):
            mtok = ts.next()
            if mtok.kind != "int" or int(mtok.text) < 1:
                raise ts.error("multiplicity must be a positive integer", mtok)
            mult = int(mtok.text)
        return root, mult

    # -- explicit balls -------------------------------------------------------

    def ball_atom(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("closed"):
            kind = CLOSED
        elif ts.accept("open"):
            kind = OPEN
        else:
            raise ts.error("expected 'closed' or 'open'", tok)
        ts.expect("(")
        center = self.elt()
        ts.expect(",")
        radius = self.radius()
        ts.expect(")")
        return InBall(Ball(self.ctx, kind, center, radius))

    def radius(self):
        ts = self.ts
        sign = self.sign()
        if ts.accept("inf"):
            return INF if sign > 0 else NEG_INF
        tok = ts.next()
        if tok.kind != "int":
            raise ts.error("expected a radius", tok)
        r = Fraction(int(tok.text))
        if ts.accept("/"):
            dtok = ts.next()
            if dtok.kind != "int" or int(dtok.text) == 0:
                raise ts.error("expected a positive denominator", dtok)
            r /= int(dtok.text)
        return normalize_radius(sign * r)


# -- printing -------------------------------------------------------------------

def _lin(ctx, g) -> str:
    if not g:
        return "x"
    return f"x-({ctx.format(g)})"


def _threshold(nu) -> str:
    if nu == INF:
        return "inf"
    if nu == NEG_INF:
        return "-inf"
    return str(nu)


def _factored(ctx, f: Factored) -> str:
    if f.roots:
        body = "*".join(f"({_lin(ctx, r)})^{m}" for r, m in f.roots)
    else:
        body = "1"
    return f"{body} ; c={ctx.format(f.const)}"


def pretty(f, ctx: FieldContext) -> str:
    """Render a formula in DSL syntax; ``parse(pretty(f)) == f``."""
    if f == TRUE:
        return "true"
    if f == FALSE:
        return "false"
    if isinstance(f, Not):
        return f"!({pretty(f.arg, ctx)})"
    if isinstance(f, And):
        return "(" + " & ".join(pretty(g, ctx) for g in f.args) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(pretty(g, ctx) for g in f.args) + ")"
    if isinstance(f, AffineValuationConstraint):
        pieces = []
        for i, (n, g) in enumerate(f.terms):
            sign = "-" if n < 0 else "+"
            mag = abs(n)
            body = f"v({_lin(ctx, g)})" if mag == 1 else f"{mag}*v({_lin(ctx, g)})"
            if i == 0:
                pieces.append(("-" if n < 0 else "") + body)
            else:
                pieces.append(f" {sign} {body}")
        lhs = "".join(pieces)
        text = f"{lhs} {f.rel} {_threshold(f.threshold)}"
        simple = len(f.terms) == 1 and f.terms[0][0] == 1
        return text if simple else f"affine{{{text}}}"
    if isinstance(f, Divides):
        return f"div({_factored(ctx, f.f)} | {_factored(ctx, f.g)})"
    if isinstance(f, Equals):
        return f"x = {ctx.format(f.value)}"
    if isinstance(f, InBall):
        b = f.ball
        return f"x in {b.kind}({ctx.format(b.center)}, {format_ext(b.radius)})"
    raise TypeError(f"not a formula: {f!r}")


__all__ = ["parse", "pretty", "ParseError", "FACTOR_HINT"]
