"""Incidence counting, K_{d,s}-freeness, and the incidence-bound formulas.

Counting is exact and brute force by default; the point-line relation also
has an indexed fast path that must agree with it. Exponents are exact
rationals, and comparisons against ``N^(4/3)`` or ``N^(3/2)`` are done on
integer powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Sequence

from .distal import FormulaFamily
from .field import FieldContext, make_context
from . import qf1


class BudgetExceeded(RuntimeError):
    """A requested computation is larger than the configured budget."""


# -- relations ---------------------------------------------------------------------

class Relation:
    """A binary relation E ⊆ K^n × K^m with exact membership."""

    n = 1
    m = 1

    def holds(self, a, b) -> bool:
        raise NotImplementedError


class PointLine(Relation):
    """``(x, y) E (a, b)`` iff ``y = a*x + b``."""

    n = 2
    m = 2

    def holds(self, pt, line) -> bool:
        x, y = pt
        a, b = line
        return y == a * x + b


class FormulaRelation(Relation):
    """``x E (b_1, ..., b_k)`` iff phi(x; b) holds, phi given in the DSL."""

    def __init__(self, text: str, ctx: FieldContext, names: Sequence[str]):
        self.family = FormulaFamily(text, ctx)
        self.ctx = ctx
        self.names = tuple(names)
        self.m = len(self.names)

    def holds(self, x, b) -> bool:
        params = dict(zip(self.names, b))
        return qf1.holds(self.family.formula(params), self.ctx, x)


def count_incidences(E: Relation, A0, B0, method: str = "auto") -> int:
    """|E ∩ (A0 × B0)|; ``method`` is "brute", "fast" (point-line only) or "auto"."""
    if method == "auto":
        method = "fast" if isinstance(E, PointLine) else "brute"
    if method == "brute":
        return sum(1 for a in A0 for b in B0 if E.holds(a, b))
    if method == "fast":
        if not isinstance(E, PointLine):
            raise ValueError("the fast path exists only for the point-line relation")
        return _count_point_line(A0, B0)
    raise ValueError(f"unknown counting method {method!r}")


def _count_point_line(points, lines) -> int:
    by_x: dict = {}
    for x, y in points:
        by_x.setdefault(x, set()).add(y)
    total = 0
    for a, b in lines:
        for x, ys in by_x.items():
            if a * x + b in ys:
                total += 1
    return total


class KdsResult(NamedTuple):
    free: bool
    witness: tuple | None  # (A, B) with A × B ⊆ E


def check_kds_free(E: Relation, A0, B0, d: int, s: int) -> KdsResult:
    """Search for A ⊆ A0, B ⊆ B0 with |A| = d, |B| = s and A × B ⊆ E."""
    A0, B0 = list(A0), list(B0)
    rows = []
    for a in A0:
        nbrs = frozenset(j for j, b in enumerate(B0) if E.holds(a, b))
        if len(nbrs) >= s:
            rows.append((a, nbrs))
    rows.sort(key=lambda r: -len(r[1]))

    def search(start, chosen, common):
        if len(chosen) == d:
            return chosen, common
        for i in range(start, len(rows)):
            meet = common & rows[i][1] if common is not None else rows[i][1]
            if len(meet) >= s:
                hit = search(i + 1, chosen + [rows[i][0]], meet)
                if hit:
                    return hit
        return None

    if d <= 0 or s <= 0:
        return KdsResult(False, ((), ()))
    hit = search(0, [], None)
    if hit is None:
        return KdsResult(True, None)
    chosen, common = hit
    return KdsResult(False, (tuple(chosen), tuple(B0[j] for j in sorted(common)[:s])))


# -- bound formulas ------------------------------------------------------------------

@dataclass(frozen=True)
class BoundParams:
    d: int
    s: int
    t: Fraction
    q: int
    C: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        object.__setattr__(self, "C", Fraction(self.C))
        if self.d < 1 or self.s < 1:
            raise ValueError("d and s must be positive")
        if self.t <= 1:
            raise ValueError("the cell exponent t must exceed 1")
        if self.C <= 0:
            raise ValueError("C must be positive")

    @classmethod
    def point_line(cls, q: int, C=1) -> BoundParams:
        """d = s = 2 and the cell exponent t = 4(q+1) obtained for lines."""
        return cls(d=2, s=2, t=Fraction(4 * (q + 1)), q=q, C=C)


class Exponents(NamedTuple):
    alpha: Fraction
    beta: Fraction
    eps: Fraction
    sym: Fraction


def bound_exponents(bp: BoundParams) -> Exponents:
    t, d = bp.t, bp.d
    if t * d == 1:
        raise ValueError("td = 1 makes the exponents undefined")
    alpha = (t - 1) * d / (t * d - 1)
    beta = (t * d - t) / (t * d - 1)
    eps = 1 / (d * t - 1)
    sym = Fraction(3, 2) - Fraction(1, 16 * (bp.q + 1) - 2)
    return Exponents(alpha, beta, eps, sym)


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def power_product(a: int, alpha: Fraction, b: int, beta: Fraction, bits: int = 64) -> tuple[Fraction, bool]:
    """a^alpha * b^beta, exactly when rational, else rounded up to 2^-bits."""
    if a == 0 and alpha > 0 or b == 0 and beta > 0:
        return Fraction(0), True
    D = alpha.denominator * beta.denominator
    num = Fraction(a) ** (alpha * D) * Fraction(b) ** (beta * D)
    # num is an integer power product, possibly with negative exponents
    top, bot = num.numerator, num.denominator
    rt, rb = iroot(top, D), iroot(bot, D)
    if rt ** D == top and rb ** D == bot:
        return Fraction(rt, rb), True
    up = iroot(top << (bits * D), D) + 1
    low = iroot(bot << (bits * D), D)
    return Fraction(up, low), False


def bound_value(bp: BoundParams, a: int, b: int) -> Fraction:
    """``C * a^alpha * b^beta + a + b``, the constant applied to the main term."""
    ex = bound_exponents(bp)
    main, _ = power_product(a, ex.alpha, b, ex.beta)
    return bp.C * main + a + b


# -- Elekes grids --------------------------------------------------------------------

def elekes_grid(p: int, m: int):
    """Points F_p[t]_{<m} × F_p[t]_{<2m} and lines y = a x + b with a, b in the same ranges."""
    if m < 1:
        raise ValueError("m must be positive")
    ctx = make_context(f"F{p}(t)@t")
    short = ctx.enumerate_bounded(m)
    long = ctx.enumerate_bounded(2 * m)
    points = [(x, y) for x in short for y in long]
    lines = [(a, b) for a in short for b in long]
    return points, lines


def _ratio(I: int, N: int, e: Fraction) -> Fraction | float:
    """I / N^e, exact when rational."""
    if N == 0:
        return 0.0
    val, exact = power_product(N, e, 1, Fraction(0))
    if exact:
        return Fraction(I) / val
    return I / N ** float(e)


def exponent_sweep(p: int, m_range, C=1, max_points: int = 5000) -> list[dict]:
    rows = []
    for m in m_range:
        N = p ** (3 * m)
        if N > max_points:
            raise BudgetExceeded(f"grid p={p}, m={m} has {N} points, budget is {max_points}")
        points, lines = elekes_grid(p, m)
        I = count_incidences(PointLine(), points, lines, method="fast")
        if I ** 3 != N ** 4:
            raise RuntimeError(f"Elekes identity failed: I={I}, N={N}")
        if N > 1 and I ** 2 >= N ** 3:
            raise RuntimeError(f"I={I} is not below N^(3/2) for N={N}")
        bp = BoundParams.point_line(p, C)
        rows.append({
            "N": N,
            "I": I,
            "I/N^(4/3)": _ratio(I, N, Fraction(4, 3)),
            "I/N^(3/2)": _ratio(I, N, Fraction(3, 2)),
            "bound_value": bound_value(bp, N, N),
        })
    return rows
