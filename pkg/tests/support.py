"""Shared oracles and random generators for the test suite.

The oracles here deliberately avoid the package's own region machinery:
they use nothing but ``ctx.dist`` (the valuation of a difference) and the
raw ball data, so they can judge the package rather than repeat it.
"""

from __future__ import annotations

import random
from fractions import Fraction

from valdistal import balls as B
from valdistal.balls import Ball
from valdistal.cheese import InBall
from valdistal.field import INF, NEG_INF, element_sort_key, make_context
from valdistal.logic import And, Not, Or

BACKENDS = ["F2(t)@t", "F3(t)@t", "F2(t)@t^2+t+1", "Q@5"]
ALL_BACKENDS = BACKENDS + ["F3(t)@inf"]

_CTX = {}


def ctx_of(spec: str):
    if spec not in _CTX:
        _CTX[spec] = make_context(spec)
    return _CTX[spec]


# -- generic points --------------------------------------------------------------
#
# A point of the algebraic closure is described by its distances to K-points.
# For a ball b = closed(c, r) the generic point x has v(x - c) = r with a
# residue avoiding every K-residue, so v(x - a) = min(r, v(c - a)). For
# open(c, r) the same holds with r replaced by r + delta, delta a positive
# infinitesimal. The generic point of the whole line sits at valuation -M
# with M infinitely large. Distances are triples (M-coefficient, value,
# delta-coefficient) compared lexicographically; an exact hit is INF.

class GenericPoint:
    def __init__(self, ctx, center, level, eps):
        self.ctx, self.center, self.level, self.eps = ctx, center, level, eps

    @classmethod
    def of_ball(cls, b: Ball):
        if b.radius == NEG_INF:
            return cls(b.ctx, b.ctx.zero, NEG_INF, 0)
        if b.radius == INF:
            return cls(b.ctx, b.center, INF, 0)
        return cls(b.ctx, b.center, b.radius, 1 if b.kind == B.OPEN else 0)

    def dist(self, a):
        if self.level == NEG_INF:
            return (-1, 0, 0)
        d = self.ctx.dist(self.center, a)
        if self.level == INF:
            return INF if d == INF else (0, d, 0)
        return (0,) + min((self.level, self.eps), (d, 0))

    def in_ball(self, b: Ball) -> bool:
        if b.is_empty:
            return False
        if b.radius == NEG_INF:
            return True
        d = self.dist(b.center)
        if d == INF:
            return True
        if b.kind == B.CLOSED:
            return d >= (0, b.radius, 0)
        return d > (0, b.radius, 0)

    def __repr__(self):
        return f"generic({self.center}, {self.level}, eps={self.eps})"


def eval_ball_formula(f, inside) -> bool:
    """Evaluate a ball formula; ``inside(ball)`` decides each atom."""
    if isinstance(f, InBall):
        return inside(f.ball)
    if isinstance(f, Not):
        return not eval_ball_formula(f.arg, inside)
    if isinstance(f, And):
        return all(eval_ball_formula(g, inside) for g in f.args)
    if isinstance(f, Or):
        return any(eval_ball_formula(g, inside) for g in f.args)
    raise TypeError(f)


def formula_balls(f) -> list:
    if isinstance(f, InBall):
        return [f.ball]
    if isinstance(f, Not):
        return formula_balls(f.arg)
    return [b for g in f.args for b in formula_balls(g)]


def witnesses(ctx, ball_lists) -> list[GenericPoint]:
    pool = {b for bl in ball_lists for b in bl if not b.is_empty}
    pool.add(B.whole(ctx))
    return [GenericPoint.of_ball(b) for b in sorted(pool, key=lambda b: b.key)]


def oracle_equivalent(ctx, f, g) -> bool:
    """Equivalence of two ball formulas over the algebraic closure."""
    for w in witnesses(ctx, [formula_balls(f), formula_balls(g)]):
        if eval_ball_formula(f, w.in_ball) != eval_ball_formula(g, w.in_ball):
            return False
    return True


def point_in(x):
    return lambda b: b.contains(x)


# -- affine constraints at generic points ----------------------------------------

def affine_value_at(terms, w: GenericPoint):
    """sum n_i v(w - g_i) as a distance triple, or +-inf."""
    acc = [0, 0, 0]
    for n, g in terms:
        d = w.dist(g)
        if d == INF:
            return INF if n > 0 else NEG_INF
        for i in range(3):
            acc[i] += n * d[i]
    return tuple(acc)


def affine_holds_at(terms, rel, nu, w: GenericPoint) -> bool:
    lhs = affine_value_at(terms, w)
    if not isinstance(lhs, tuple) or nu in (INF, NEG_INF):
        a = lhs if not isinstance(lhs, tuple) else 0
        b = nu
    else:
        a, b = lhs, (0, nu, 0)
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b, "=": a == b}[rel]


# -- random data -----------------------------------------------------------------

def small_element(ctx, rng: random.Random, depth: int = 3, neg: float = 0.2):
    lifts = ctx.residue_lifts()
    pi = ctx.uniformizer
    c = ctx.zero
    for k in range(depth):
        c = c + rng.choice(lifts) * pi ** k
    if rng.random() < neg:
        c = c + rng.choice(lifts) * pi ** -1
    return c


def random_radius(rng: random.Random):
    roll = rng.random()
    if roll < 0.05:
        return NEG_INF
    if roll < 0.15:
        return INF
    if roll < 0.22:
        return Fraction(rng.randint(-2, 6), 2)
    return rng.randint(-1, 3)


def random_ball(ctx, rng: random.Random) -> Ball:
    kind = rng.choice([B.CLOSED, B.OPEN])
    r = random_radius(rng)
    if r == INF:
        kind = B.CLOSED
    return Ball(ctx, kind, small_element(ctx, rng), r)


def random_ball_formula(ctx, rng: random.Random, max_atoms: int = 6):
    n = rng.randint(1, max_atoms)
    atoms = [InBall(random_ball(ctx, rng)) for _ in range(n)]

    def build(items):
        if len(items) == 1:
            f = items[0]
        else:
            cut = rng.randint(1, len(items) - 1)
            op = rng.choice([And, Or])
            f = op((build(items[:cut]), build(items[cut:])))
        return Not(f) if rng.random() < 0.3 else f

    return build(atoms)


def rewrite(f, rng: random.Random):
    """A formula equivalent to ``f`` with a different shape."""
    if isinstance(f, InBall):
        return Not(Not(f)) if rng.random() < 0.3 else f
    if isinstance(f, Not):
        inner = f.arg
        if isinstance(inner, And):
            return Or(tuple(rewrite(Not(g), rng) for g in inner.args))
        if isinstance(inner, Or):
            return And(tuple(rewrite(Not(g), rng) for g in inner.args))
        return Not(rewrite(inner, rng))
    args = [rewrite(g, rng) for g in f.args]
    rng.shuffle(args)
    return type(f)(tuple(args))


def point_pool(ctx, rng: random.Random, minimum: int = 200) -> list:
    """All sample points of height <= 4 plus digit expansions, at least ``minimum``."""
    pts = set(ctx.sample_points(4))
    lifts = ctx.residue_lifts()
    pi = ctx.uniformizer
    digits = 1
    while ctx.q ** digits < 4 * minimum:
        digits += 1
    while len(pts) < minimum:
        x = ctx.zero
        for k in range(-1, digits - 1):
            x = x + rng.choice(lifts) * pi ** k
        pts.add(x)
    return sorted(pts, key=element_sort_key)


def random_constraint_terms(ctx, rng: random.Random, max_centers: int = 4):
    k = rng.randint(1, max_centers)
    centers = []
    while len(centers) < k:
        c = small_element(ctx, rng)
        if c not in centers:
            centers.append(c)
    terms = []
    for c in centers:
        n = 0
        while n == 0:
            n = rng.randint(-3, 3)
        terms.append((n, c))
    return terms
