"""Canonical Swiss cheese decompositions and set algebra on them.

Every boolean combination of balls is a unique finite disjoint union of
"cheeses" ``round \\ (hole_1 ∪ ... ∪ hole_k)`` where the holes are pairwise
disjoint proper subballs of the round and no round equals any hole. With
rounds and holes sorted by the ball ordering, structural equality of two
:class:`SwissCheese` values is set equality in the algebraic closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import balls as B
from .balls import Ball
from .field import FieldContext
from .logic import And, Not, Or, evaluate, iter_atoms


@dataclass(frozen=True)
class InBall:
    """Atom ``x ∈ ball``."""

    ball: Ball


@dataclass(frozen=True)
class Cheese:
    round: Ball
    holes: tuple = ()

    def contains(self, x) -> bool:
        return self.round.contains(x) and not any(h.contains(x) for h in self.holes)


class Complexity(NamedTuple):
    rounds: int
    max_holes: int

    def at_most(self, n: int) -> bool:
        return self.rounds <= n and self.max_holes <= n


@dataclass(frozen=True)
class SwissCheese:
    ctx: FieldContext
    cheeses: tuple = ()

    def __contains__(self, x) -> bool:
        return member(self, x)

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def __sub__(self, other):
        return difference(self, other)

    def __invert__(self):
        return complement(self)

    def is_empty(self) -> bool:
        return not self.cheeses

    def issubset(self, other: SwissCheese) -> bool:
        return subset_of(self, other)

    def balls(self) -> list[Ball]:
        out = []
        for c in self.cheeses:
            out.append(c.round)
            out.extend(c.holes)
        return out

    def to_formula(self):
        return Or(tuple(
            And((InBall(c.round),) + tuple(Not(InBall(h)) for h in c.holes))
            for c in self.cheeses
        ))

    def to_json(self) -> dict:
        return {"cheeses": [
            {"round": c.round.to_json(), "holes": [h.to_json() for h in c.holes]}
            for c in self.cheeses
        ]}

    @classmethod
    def from_json(cls, ctx: FieldContext, obj: dict) -> SwissCheese:
        """Decode and re-normalize, so hand-written input need not be canonical."""
        f = Or(tuple(
            And((InBall(Ball.from_json(ctx, c["round"])),)
                + tuple(Not(InBall(Ball.from_json(ctx, h))) for h in c.get("holes", [])))
            for c in obj["cheeses"]
        ))
        return normalize(f, ctx)

    def __str__(self):
        if not self.cheeses:
            return "∅"
        parts = []
        for c in self.cheeses:
            parts.append(f"{c.round!r}" + "".join(f" \\ {h!r}" for h in c.holes))
        return " ∪ ".join(f"({s})" for s in parts)


def _ball_order(b: Ball):
    # containers sort before the balls they contain
    return (b.radius, b.kind == B.OPEN)


class Forest:
    """Containment tree of a finite ball pool, rooted at the whole line.

    Node 0 is ``L``. Each node's region is the node minus its children; the
    regions partition the line and none is empty in the algebraic closure.
    """

    def __init__(self, ctx: FieldContext, pool):
        top = B.whole(ctx)
        uniq = {b for b in pool if not b.is_empty and not b.is_whole}
        ordered = sorted(uniq, key=lambda b: (_ball_order(b), b.key))
        self.nodes: list[Ball] = [top] + ordered
        self.index = {b: i for i, b in enumerate(self.nodes)}
        self.parent = [-1] * len(self.nodes)
        self.children: list[list[int]] = [[] for _ in self.nodes]
        self.ancestors: list[frozenset] = [frozenset({0})]
        for i in range(1, len(self.nodes)):
            b = self.nodes[i]
            par = 0
            for j in range(i - 1, 0, -1):
                if B.subset(b, self.nodes[j]):
                    par = j
                    break
            self.parent[i] = par
            self.children[par].append(i)
            self.ancestors.append(self.ancestors[par] | {i})

    def region_values(self, f) -> list[bool]:
        index = self.index
        out = []
        for anc in self.ancestors:
            def atom_value(a, anc=anc):
                b = a.ball
                if b.is_empty:
                    return False
                return index[b] in anc
            out.append(evaluate(f, atom_value))
        return out


def normalize(f, ctx: FieldContext | None = None) -> SwissCheese:
    """Canonical Swiss cheese of a ball formula (atoms :class:`InBall`)."""
    pool = [a.ball for a in iter_atoms(f)]
    if ctx is None:
        if not pool:
            raise ValueError("a context is required for atom-free formulas")
        ctx = pool[0].ctx
    forest = Forest(ctx, pool)
    inc = forest.region_values(f)
    nodes, children = forest.nodes, forest.children
    cheeses = []

    def holes_below(n):
        for c in children[n]:
            if inc[c]:
                yield from holes_below(c)
            else:
                yield nodes[c]

    stack = [(0, False)]
    while stack:
        n, parent_in = stack.pop()
        if inc[n] and not parent_in:
            holes = tuple(sorted(holes_below(n), key=lambda b: b.key))
            cheeses.append(Cheese(nodes[n], holes))
        stack.extend((c, inc[n]) for c in children[n])
    cheeses.sort(key=lambda c: c.round.key)
    return SwissCheese(ctx, tuple(cheeses))


def member(s: SwissCheese, x) -> bool:
    return any(c.contains(x) for c in s.cheeses)


def from_ball(b: Ball) -> SwissCheese:
    return normalize(InBall(b), b.ctx)


def full(ctx: FieldContext) -> SwissCheese:
    return SwissCheese(ctx, (Cheese(B.whole(ctx)),))


def empty(ctx: FieldContext) -> SwissCheese:
    return SwissCheese(ctx, ())


def _check_ctx(a: SwissCheese, b: SwissCheese):
    if a.ctx != b.ctx:
        raise ValueError("cheeses over different fields")


def union(a: SwissCheese, b: SwissCheese) -> SwissCheese:
    _check_ctx(a, b)
    return normalize(Or((a.to_formula(), b.to_formula())), a.ctx)


def intersection(a: SwissCheese, b: SwissCheese) -> SwissCheese:
    _check_ctx(a, b)
    return normalize(And((a.to_formula(), b.to_formula())), a.ctx)


def difference(a: SwissCheese, b: SwissCheese) -> SwissCheese:
    _check_ctx(a, b)
    return normalize(And((a.to_formula(), Not(b.to_formula()))), a.ctx)


def complement(a: SwissCheese) -> SwissCheese:
    return normalize(Not(a.to_formula()), a.ctx)


_OPS = {"union": union, "intersection": intersection, "difference": difference}


def set_op(a: SwissCheese, b: SwissCheese, op: str) -> SwissCheese:
    try:
        return _OPS[op](a, b)
    except KeyError:
        raise ValueError(f"unknown set operation {op!r}") from None


def is_empty(s: SwissCheese) -> bool:
    # a round minus finitely many proper subballs is never empty over K^alg
    return not s.cheeses


def subset_of(a: SwissCheese, b: SwissCheese) -> bool:
    return is_empty(difference(a, b))


def equal(a: SwissCheese, b: SwissCheese) -> bool:
    return a == b


def complexity(s: SwissCheese) -> Complexity:
    return Complexity(len(s.cheeses), max((len(c.holes) for c in s.cheeses), default=0))
