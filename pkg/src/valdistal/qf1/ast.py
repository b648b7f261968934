"""Atoms of one-variable quantifier-free valued-field formulas."""

from __future__ import annotations

import operator
from dataclasses import dataclass

from ..field import INF, NEG_INF, FieldContext
from ..logic import evaluate

RELATIONS = ("<", "<=", "=", ">=", ">")

_CMP = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}

FLIP = {"<": ">", "<=": ">=", "=": "=", ">=": "<=", ">": "<"}


def compare(lhs, rel: str, rhs) -> bool:
    return _CMP[rel](lhs, rhs)


@dataclass(frozen=True)
class AffineValuationConstraint:
    """``sum_i n_i * v(x - g_i)  rel  threshold`` with distinct centers ``g_i``.

    ``terms`` is a tuple of ``(n_i, g_i)`` pairs. A term whose center equals x
    contributes ``+inf`` or ``-inf`` by the sign of ``n_i``; zero multiplicities
    contribute nothing.
    """

    terms: tuple
    rel: str
    threshold: object

    def __post_init__(self):
        if self.rel not in _CMP:
            raise ValueError(f"unknown relation {self.rel!r}")
        centers = [g for _, g in self.terms]
        if len(set(centers)) != len(centers):
            raise ValueError("affine constraint centers must be distinct")

    @classmethod
    def merged(cls, terms, rel: str, threshold) -> AffineValuationConstraint:
        """Build from possibly repeated centers by summing multiplicities."""
        acc: dict = {}
        for n, g in terms:
            acc[g] = acc.get(g, 0) + n
        return cls(tuple((n, g) for g, n in acc.items()), rel, threshold)

    @property
    def centers(self) -> list:
        return [g for _, g in self.terms]

    def lhs(self, ctx: FieldContext, x):
        total = 0
        for n, g in self.terms:
            if n == 0:
                continue
            d = ctx.dist(x, g)
            if d == INF:
                return INF if n > 0 else NEG_INF
            total += n * d
        return total

    def holds(self, ctx: FieldContext, x) -> bool:
        return compare(self.lhs(ctx, x), self.rel, self.threshold)


@dataclass(frozen=True)
class Factored:
    """``const * prod (x - root)^mult`` with roots in K."""

    const: object
    roots: tuple = ()  # ((root, multiplicity), ...)

    def valuation_at(self, ctx: FieldContext, x):
        total = ctx.valuation(self.const)
        for r, m in self.roots:
            d = ctx.dist(x, r)
            if d == INF:
                return INF
            total += m * d
        return total


@dataclass(frozen=True)
class Divides:
    """``f | g`` in the sense ``v(f(x)) <= v(g(x))``."""

    f: Factored
    g: Factored

    def holds(self, ctx: FieldContext, x) -> bool:
        return self.f.valuation_at(ctx, x) <= self.g.valuation_at(ctx, x)


@dataclass(frozen=True)
class Equals:
    value: object

    def holds(self, ctx: FieldContext, x) -> bool:
        return x == self.value


def holds(f, ctx: FieldContext, x) -> bool:
    """Direct truth of a QF formula at a point, by valuation arithmetic only."""

    def atom_value(a):
        if hasattr(a, "holds"):
            return a.holds(ctx, x)
        return a.ball.contains(x)  # InBall

    return evaluate(f, atom_value)
