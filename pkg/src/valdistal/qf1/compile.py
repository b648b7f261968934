"""Compilation of QF formulas to Swiss cheeses.

An affine valuation constraint ``sum n_i v(x - g_i) rel nu`` is rewritten as
a boolean combination of balls centred at the ``g_i`` by induction on the
number of centers. Write ``e = v(x - g_1)`` and let ``k_1 < ... < k_m`` be the
distinct values ``v(g_1 - g_i)``, i > 1. Then

* on each open gap ``k_j < e < k_{j+1}`` every other term is determined
  (``e`` if ``e < v(g_1 - g_i)``, else ``v(g_1 - g_i)``) and the constraint
  becomes a single threshold ``A*e + B rel nu`` on ``e``;
* on each annulus ``e = k_j`` the terms with cut value ``k_j`` are free and
  the constraint recurses on those centers alone;
* ``x = g_1`` is decided separately.

Thresholds ``(nu - B)/A`` need not be integers; such balls get rational
radii, which keeps the result exact over the algebraic closure.
"""

from __future__ import annotations

from fractions import Fraction

from .. import balls as B
from ..cheese import InBall, SwissCheese, normalize
from ..field import INF, NEG_INF, FieldContext, normalize_radius
from ..logic import FALSE, TRUE, And, Not, Or, map_atoms
from .ast import FLIP, AffineValuationConstraint, Divides, Equals, Factored, compare


def divides_to_constraint(a: Divides, ctx: FieldContext) -> AffineValuationConstraint:
    """``v(f) <= v(g)`` as ``sum m_j v(x-a_j) - sum m'_j v(x-b_j) <= v(c_g) - v(c_f)``.

    The rewrite disagrees with ``a`` only at common roots of f and g, where
    ``a`` holds; :func:`qf_to_ball_formula` adds those points back.
    """
    if not a.f.const or not a.g.const:
        raise ValueError("leading constants of a divisibility atom must be nonzero")
    terms = [(m, r) for r, m in a.f.roots] + [(-m, r) for r, m in a.g.roots]
    nu = ctx.valuation(a.g.const) - ctx.valuation(a.f.const)
    return AffineValuationConstraint.merged(terms, "<=", nu)


def constraint_to_balls(c: AffineValuationConstraint, ctx: FieldContext):
    """A ball formula, with all centers among ``c``'s centers, equivalent to ``c``."""
    terms = [(n, g) for n, g in c.terms if n != 0]
    return _compile(ctx, terms, c.rel, c.threshold)


def _compile(ctx, terms, rel, nu):
    if not terms:
        return TRUE if compare(0, rel, nu) else FALSE
    n1, g1 = terms[0]
    groups: dict = {}
    for n, g in terms[1:]:
        groups.setdefault(ctx.dist(g1, g), []).append((n, g))
    cuts = sorted(groups)
    weight = {k: sum(n for n, _ in groups[k]) for k in cuts}

    parts = []
    # x = g1: the first term is infinite, the others finite
    if compare(INF if n1 > 0 else NEG_INF, rel, nu):
        parts.append(InBall(B.point(ctx, g1)))

    bounds = [NEG_INF] + cuts + [INF]
    for lo, hi in zip(bounds, bounds[1:]):
        # lo < e < hi: centers with cut >= hi track e, those with cut <= lo are fixed
        slope = n1 + sum(weight[k] for k in cuts if k >= hi)
        offset = sum(weight[k] * k for k in cuts if k <= lo)
        gap = And((InBall(B.open_ball(ctx, g1, lo)), Not(InBall(B.closed(ctx, g1, hi)))))
        cond = _threshold(ctx, g1, slope, offset, rel, nu)
        if cond != FALSE:
            parts.append(gap if cond == TRUE else And((gap, cond)))

    for k in cuts:
        fixed = n1 * k
        fixed += sum(weight[j] * (k if j > k else j) for j in cuts if j != k)
        sub = _compile(ctx, groups[k], rel, nu - fixed)
        if sub == FALSE:
            continue
        annulus = And((InBall(B.closed(ctx, g1, k)), Not(InBall(B.open_ball(ctx, g1, k)))))
        parts.append(annulus if sub == TRUE else And((annulus, sub)))

    return Or(tuple(parts)) if parts else FALSE


def _threshold(ctx, g, slope, offset, rel, nu):
    """The set of e with ``slope*e + offset rel nu`` as a ball formula in e = v(x-g)."""
    if nu in (INF, NEG_INF) or slope == 0:
        probe = 0 if nu in (INF, NEG_INF) else offset
        return TRUE if compare(probe, rel, nu) else FALSE
    theta = normalize_radius(Fraction(nu - offset, slope))
    if slope < 0:
        rel = FLIP[rel]
    closed = InBall(B.closed(ctx, g, theta))
    opened = InBall(B.open_ball(ctx, g, theta))
    if rel == ">":
        return opened
    if rel == ">=":
        return closed
    if rel == "<":
        return Not(closed)
    if rel == "<=":
        return Not(opened)
    return And((closed, Not(opened)))


def _common_roots(a: Divides) -> list:
    g_roots = {r for r, _ in a.g.roots}
    return [r for r, _ in a.f.roots if r in g_roots]


def qf_to_ball_formula(f, ctx: FieldContext):
    """Replace every QF atom by an equivalent ball formula."""

    def atom(a):
        if isinstance(a, AffineValuationConstraint):
            return constraint_to_balls(a, ctx)
        if isinstance(a, Divides):
            body = constraint_to_balls(divides_to_constraint(a, ctx), ctx)
            extra = tuple(InBall(B.point(ctx, r)) for r in _common_roots(a))
            return Or((body,) + extra) if extra else body
        if isinstance(a, Equals):
            return InBall(B.point(ctx, a.value))
        if isinstance(a, InBall):
            return a
        raise TypeError(f"unknown atom {a!r}")

    return map_atoms(f, atom)


def formula_to_cheese(f, ctx: FieldContext) -> SwissCheese:
    return normalize(qf_to_ball_formula(f, ctx), ctx)


__all__ = [
    "divides_to_constraint", "constraint_to_balls", "qf_to_ball_formula", "formula_to_cheese",
    "Factored",
]
