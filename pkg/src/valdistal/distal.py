"""Distal cell decompositions for the membership relation ``x ∈ b``.

For a finite family ``B0`` of balls with centers in K, let ``B0'`` be the set
of pairwise joins. ``B0'`` is closed under join, and the cell of a point is
the minimal member of ``B0' ∪ {L}`` containing it minus that member's maximal
proper subballs in ``B0'``. No ball of ``B0`` cuts a cell, and since the
holes of one cell are pairwise joined to its round, their centers have
pairwise distinct residues at the round's radius: a cell has at most ``q``
holes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import balls as B
from . import qf1
from .balls import Ball
from .cheese import Cheese, Forest, SwissCheese, intersection
from .field import FieldContext

TOP = "top"


class UshdError(ValueError):
    """Invalid input to a cut-freeness check."""


@dataclass(frozen=True)
class BallFamily:
    ctx: FieldContext
    balls: tuple = ()
    provenance: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def of(cls, ctx: FieldContext, balls: Iterable[Ball], provenance=None) -> BallFamily:
        uniq = set()
        for b in balls:
            if b.is_empty:
                raise ValueError("ball families may not contain the empty ball")
            uniq.add(b)
        return cls(ctx, tuple(sorted(uniq, key=lambda b: b.key)), provenance or {})

    def __len__(self):
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)

    def __contains__(self, b):
        return b in set(self.balls)

    def to_json(self) -> list:
        return [b.to_json() for b in self.balls]


@dataclass(frozen=True)
class Cell:
    round: Ball
    holes: tuple
    provenance: tuple = field(default=(), compare=False)  # (round_prov, (hole_prov, ...))

    def contains(self, x) -> bool:
        return self.round.contains(x) and not any(h.contains(x) for h in self.holes)

    def as_cheese(self) -> SwissCheese:
        return SwissCheese(self.round.ctx, (Cheese(self.round, self.holes),))

    def to_json(self) -> dict:
        def prov(pr):
            if pr == TOP:
                return TOP
            return [pr[0].to_json(), pr[1].to_json()]

        out = {"round": self.round.to_json(), "holes": [h.to_json() for h in self.holes]}
        if self.provenance:
            rp, hps = self.provenance
            out["provenance"] = {"round": prov(rp), "holes": [prov(h) for h in hps]}
        return out


@dataclass
class UshdReport:
    cells: int
    max_holes: int
    params: int
    samples: int
    # verdicts[i][j]: True if cell i lies inside fiber j, False if disjoint from it
    verdicts: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "cells": self.cells,
            "max_holes": self.max_holes,
            "params": self.params,
            "samples": self.samples,
            "cut_free": self.ok,
            "violations": self.violations,
        }


def join_closure(family: BallFamily) -> BallFamily:
    """All pairwise joins (self-joins included), with the pair producing each."""
    bs = family.balls
    prov: dict = {}
    for b in bs:
        prov[b] = (b, b)
    for i, b in enumerate(bs):
        for b2 in bs[i + 1:]:
            prov.setdefault(B.join(b, b2), (b, b2))
    closure = BallFamily.of(family.ctx, prov, prov)
    members = set(closure.balls)
    for i, b in enumerate(closure.balls):
        for b2 in closure.balls[i + 1:]:
            if B.join(b, b2) not in members:
                raise RuntimeError(f"join closure is not closed: {b!r} v {b2!r}")
    return closure


def maximal_subballs(round_: Ball, pool: Iterable[Ball]) -> list[Ball]:
    inside = [b for b in pool if b != round_ and B.subset(b, round_)]
    return [b for b in inside if not any(b != c and B.subset(b, c) for c in inside)]


def _prov(closure: BallFamily, b: Ball):
    return TOP if b.is_whole else closure.provenance.get(b, TOP)


def _make_cell(closure: BallFamily, round_: Ball, holes) -> Cell:
    holes = tuple(sorted(holes, key=lambda b: b.key))
    prov = (_prov(closure, round_), tuple(_prov(closure, h) for h in holes))
    return Cell(round_, holes, prov)


def cell_of_point(closure: BallFamily, x) -> Cell:
    """The cell of ``x``; ``closure`` must be join-closed."""
    containing = [b for b in closure.balls if b.contains(x)]
    if containing:
        round_ = min(containing, key=lambda b: -sum(B.subset(b, c) for c in containing))
    else:
        round_ = B.whole(closure.ctx)
    return _make_cell(closure, round_, maximal_subballs(round_, closure.balls))


def enumerate_cells(family: BallFamily) -> list[Cell]:
    """One cell per member of ``B0' ∪ {L}``; together they partition the line."""
    closure = join_closure(family)
    forest = Forest(family.ctx, closure.balls)
    return [
        _make_cell(closure, node, [forest.nodes[c] for c in forest.children[i]])
        for i, node in enumerate(forest.nodes)
    ]


def max_holes(family: BallFamily) -> int:
    return max(len(c.holes) for c in enumerate_cells(family))


# -- cut-freeness ------------------------------------------------------------------

def _param_key(ctx, params: dict) -> tuple:
    return tuple(sorted((k, ctx.format(ctx.element(v))) for k, v in params.items()))


class FormulaFamily:
    """A DSL formula phi(x; params) with per-parameter compilation cache."""

    def __init__(self, text: str, ctx: FieldContext):
        self.text = text
        self.ctx = ctx
        self._formulas: dict = {}
        self._cheeses: dict = {}

    def formula(self, params: dict):
        key = _param_key(self.ctx, params)
        if key not in self._formulas:
            self._formulas[key] = qf1.parse(self.text, self.ctx, params)
        return self._formulas[key]

    def cheese(self, params: dict) -> SwissCheese:
        key = _param_key(self.ctx, params)
        if key not in self._cheeses:
            self._cheeses[key] = qf1.formula_to_cheese(self.formula(params), self.ctx)
        return self._cheeses[key]


def verify_ushd(phi: str | FormulaFamily, ctx: FieldContext, params: list[dict], samples=()) -> UshdReport:
    """Check that no fiber phi(L, b), b in ``params``, cuts a cell.

    The cells come from all rounds and holes of the compiled fibers. Each
    sample point must also have its truth values decided by its cell.
    """
    if len(params) < 2:
        raise UshdError("need at least two parameter tuples")
    fam = phi if isinstance(phi, FormulaFamily) else FormulaFamily(phi, ctx)
    fibers = [fam.cheese(b) for b in params]
    pool = BallFamily.of(ctx, (ball for s in fibers for ball in s.balls()))
    cells = enumerate_cells(pool)

    report = UshdReport(
        cells=len(cells),
        max_holes=max(len(c.holes) for c in cells),
        params=len(params),
        samples=len(samples),
    )
    for i, cell in enumerate(cells):
        cell_cheese = cell.as_cheese()
        row = []
        for j, fiber in enumerate(fibers):
            meet = intersection(cell_cheese, fiber)
            if meet == cell_cheese:
                row.append(True)
            elif meet.is_empty():
                row.append(False)
            else:
                row.append(None)
                report.violations.append({"kind": "cut", "cell": i, "param": j})
        report.verdicts.append(row)

    if samples:
        closure = join_closure(pool)
        for a in samples:
            owners = [i for i, c in enumerate(cells) if c.contains(a)]
            if len(owners) != 1:
                report.violations.append(
                    {"kind": "partition", "owners": owners, "point": ctx.format(a)}
                )
                continue
            i = owners[0]
            mine = cell_of_point(closure, a)
            if (mine.round, mine.holes) != (cells[i].round, cells[i].holes):
                report.violations.append({"kind": "consistency", "cell": i, "point": ctx.format(a)})
            for j, b in enumerate(params):
                truth = qf1.holds(fam.formula(b), ctx, a)
                if report.verdicts[i][j] is not truth:
                    report.violations.append(
                        {"kind": "sample", "cell": i, "param": j, "point": ctx.format(a)}
                    )
    return report


# -- families and growth ---------------------------------------------------------

def residue_class_family(ctx: FieldContext, radius: int = 1) -> list[Ball]:
    """q disjoint balls, one per residue class; their join has exactly q holes."""
    return [B.closed(ctx, c, radius) for c in ctx.residue_lifts()]


def random_center(ctx: FieldContext, rng: random.Random, depth: int = 3):
    lifts = ctx.residue_lifts()
    pi = ctx.uniformizer
    c = ctx.zero
    for k in range(depth):
        c = c + rng.choice(lifts) * pi ** k
    if rng.random() < 0.2:
        c = c + rng.choice(lifts) * pi ** -1
    return c


def random_ball(ctx: FieldContext, rng: random.Random) -> Ball:
    c = random_center(ctx, rng)
    roll = rng.random()
    if roll < 0.15:
        return B.point(ctx, c)
    kind = B.CLOSED if roll < 0.6 else B.OPEN
    return Ball(ctx, kind, c, rng.randint(-1, 3))


def singleton_family(ctx: FieldContext, rng: random.Random, n: int) -> list[Ball]:
    return [B.point(ctx, random_center(ctx, rng, depth=4)) for _ in range(n)]


def mixed_family(ctx: FieldContext, rng: random.Random, n: int) -> list[Ball]:
    return [random_ball(ctx, rng) for _ in range(n)]


def chain_family(ctx: FieldContext, rng: random.Random, n: int) -> list[Ball]:
    return [B.closed(ctx, 0, k) for k in range(n)]


GENERATORS: dict[str, Callable] = {
    "singletons": singleton_family,
    "mixed": mixed_family,
    "chain": chain_family,
}


def cell_growth_experiment(
    ctx: FieldContext,
    family_generator: Callable,
    sizes: Iterable[int],
    trials: int = 1,
    rng: random.Random | None = None,
) -> list[dict]:
    """Rows of (size, trial, |B0|, |B0'|+1 cells, max holes); bounds are enforced."""
    rng = rng or random.Random(0)
    rows = []
    for n in sizes:
        for trial in range(trials):
            fam = BallFamily.of(ctx, family_generator(ctx, rng, n))
            cells = enumerate_cells(fam)
            m = len(fam)
            holes = max(len(c.holes) for c in cells)
            if len(cells) > m * (m + 1) // 2 + 1:
                raise RuntimeError(f"cell count {len(cells)} exceeds (n^2+n)/2+1 for n={m}")
            if holes > ctx.q:
                raise RuntimeError(f"cell with {holes} holes exceeds q={ctx.q}")
            rows.append({"size": n, "trial": trial, "b0": m, "cells": len(cells), "max_holes": holes})
    return rows
