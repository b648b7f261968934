"""Ultrametric balls with identity taken in the algebraic closure.

A ball is ``{x : v(x - c) > r}`` (open) or ``{x : v(x - c) >= r}`` (closed)
with ``c`` in K. Identity, containment and disjointness are decided as in
an algebraically closed valued field, whose value group is divisible: there
``open(c, r)`` and ``closed(c, r + 1)`` are different balls even though they
have the same K-points.

Degenerate cases are normalized on construction:

* ``closed(c, -inf)`` is the whole line ``L`` (``open(c, -inf)`` becomes it);
* ``open(c, +inf)`` is the empty ball;
* ``closed(c, +inf)`` is the singleton ``{c}``.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .field import (
    INF, NEG_INF, FieldContext, FieldError, element_sort_key, format_ext,
    normalize_radius, parse_ext,
)

CLOSED = "closed"
OPEN = "open"
_KIND_RANK = {CLOSED: 0, OPEN: 1}


class Ball:
    __slots__ = ("ctx", "kind", "center", "radius", "_canon", "_hash")

    def __init__(self, ctx: FieldContext, kind: str, center, radius):
        if kind not in _KIND_RANK:
            raise FieldError(f"ball kind must be 'open' or 'closed', got {kind!r}")
        radius = normalize_radius(radius)
        center = ctx.element(center)
        if radius == NEG_INF:
            kind, center = CLOSED, ctx.zero
        elif radius == INF and kind == OPEN:
            center = ctx.zero
        self.ctx = ctx
        self.kind = kind
        self.center = center
        self.radius = radius
        self._canon = None
        self._hash = None

    @property
    def is_empty(self) -> bool:
        return self.kind == OPEN and self.radius == INF

    @property
    def is_whole(self) -> bool:
        return self.radius == NEG_INF

    @property
    def is_point(self) -> bool:
        return self.kind == CLOSED and self.radius == INF

    @property
    def canonical_center(self):
        """The center truncated below the radius; equal balls share it."""
        if self._canon is None:
            r = self.radius
            if r in (INF, NEG_INF):
                self._canon = self.center
            else:
                n = math.ceil(r) if self.kind == CLOSED else math.floor(r) + 1
                self._canon = self.ctx.truncate(self.center, n)
        return self._canon

    @property
    def key(self) -> tuple:
        return (_KIND_RANK[self.kind], self.radius, element_sort_key(self.canonical_center))

    sort_key = key

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.kind == other.kind
            and self.radius == other.radius
            and self.canonical_center == other.canonical_center
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, self.radius, self.canonical_center))
        return self._hash

    def __repr__(self):
        if self.is_whole:
            return "L"
        if self.is_empty:
            return "EMPTY"
        return f"{self.kind}({self.ctx.format(self.canonical_center)}, {format_ext(self.radius)})"

    def contains(self, x) -> bool:
        if self.is_empty:
            return False
        d = self.ctx.dist(x, self.center)
        return d > self.radius if self.kind == OPEN else d >= self.radius

    def issubset(self, other: Ball) -> bool:
        return subset(self, other)

    def isdisjoint(self, other: Ball) -> bool:
        return disjoint(self, other)

    def join(self, other: Ball) -> Ball:
        return join(self, other)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "center": self.ctx.format(self.canonical_center),
            "radius": format_ext(self.radius),
        }

    @classmethod
    def from_json(cls, ctx: FieldContext, obj: dict) -> Ball:
        try:
            return cls(ctx, obj["kind"], ctx.parse(str(obj["center"])), parse_ext(obj["radius"]))
        except KeyError as exc:
            raise FieldError(f"ball JSON missing field {exc}") from None


def closed(ctx: FieldContext, center, radius) -> Ball:
    return Ball(ctx, CLOSED, center, radius)


def open_ball(ctx: FieldContext, center, radius) -> Ball:
    return Ball(ctx, OPEN, center, radius)


def point(ctx: FieldContext, center) -> Ball:
    return Ball(ctx, CLOSED, center, INF)


def whole(ctx: FieldContext) -> Ball:
    return Ball(ctx, CLOSED, 0, NEG_INF)


def empty(ctx: FieldContext) -> Ball:
    return Ball(ctx, OPEN, 0, INF)


def contains_point(b: Ball, x) -> bool:
    return b.contains(x)


@lru_cache(maxsize=1 << 20)
def subset(b: Ball, b2: Ball) -> bool:
    """Decide ``b ⊆ b2`` from kinds, radii and v(center difference)."""
    if b.is_empty:
        return True
    if b2.is_empty:
        return False
    if b2.is_whole:
        return True
    if b.is_whole:
        return False
    d = b.ctx.dist(b.center, b2.center)
    r, r2 = b.radius, b2.radius
    if b2.kind == CLOSED:
        return r >= r2 and d >= r2
    if b.kind == CLOSED:
        return r > r2 and d > r2
    return r >= r2 and d > r2


def disjoint(b: Ball, b2: Ball) -> bool:
    if b.is_empty or b2.is_empty:
        return True
    return not subset(b, b2) and not subset(b2, b)


def join(b: Ball, b2: Ball) -> Ball:
    """Smallest ball containing both arguments."""
    if b.is_empty or b2.is_empty:
        raise FieldError("join of an empty ball is undefined")
    if subset(b, b2):
        return b2
    if subset(b2, b):
        return b
    return closed(b.ctx, b.center, b.ctx.dist(b.center, b2.center))
