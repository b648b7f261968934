from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from valdistal import balls as B
from valdistal.balls import Ball
from valdistal.field import INF, NEG_INF, FieldError, make_context
from support import ALL_BACKENDS, GenericPoint, ctx_of, random_ball

F2 = make_context("F2(t)@t")
t = F2.gen


def C(c, r):
    return B.closed(F2, c, r)


def O(c, r):
    return B.open_ball(F2, c, r)


def K_points(ctx):
    return ctx.sample_points(4)


# -- examples --------------------------------------------------------------------

def test_contains_examples():
    assert C(0, 1).contains(t)
    assert not C(0, 1).contains(1 / t)
    assert not O(0, 1).contains(t)


def test_subset_examples():
    assert B.subset(C(0, 2), C(0, 1))
    assert not B.subset(C(1, 1), C(0, 1))
    assert B.subset(O(0, 1), C(0, 1))
    assert not B.subset(C(0, 1), O(0, 1))
    # t lies in closed(0,1) but not in open(0,1)
    assert C(0, 1).contains(t) and not O(0, 1).contains(t)


def test_join_examples():
    assert B.join(B.point(F2, t), B.point(F2, t * t)) == C(t, 1)
    assert B.join(B.point(F2, t), B.point(F2, t * t)) == C(0, 1)
    assert B.join(B.point(F2, 0), B.point(F2, 1)) == C(0, 0)
    assert B.join(C(0, 1), B.whole(F2)).is_whole


def test_disjoint_examples():
    assert B.disjoint(C(0, 1), C(1, 1))
    assert not B.disjoint(C(0, 1), C(0, 2))
    assert B.disjoint(O(0, 0), O(1, 0))
    shared = [x for x in K_points(F2) if O(0, 0).contains(x) and O(1, 0).contains(x)]
    assert shared == []


def test_acvf_identity_differs_from_k_points():
    a, b = O(0, 0), C(0, 1)
    assert a != b
    assert all(a.contains(x) == b.contains(x) for x in K_points(F2))
    assert B.subset(b, a) and not B.subset(a, b)


def test_degenerate_normalization():
    assert B.open_ball(F2, t, NEG_INF).is_whole
    assert Ball(F2, B.OPEN, t, INF).is_empty
    assert C(t, INF).is_point and C(t, INF).contains(t) and not C(t, INF).contains(0)
    assert repr(B.whole(F2)) == "L" and repr(B.empty(F2)) == "EMPTY"
    with pytest.raises(FieldError):
        Ball(F2, "ajar", 0, 1)


def test_equal_balls_share_key_and_hash():
    assert C(1 + t + t ** 3, 2) == C(1 + t, 2)
    assert hash(C(1 + t + t ** 3, 2)) == hash(C(1 + t, 2))
    assert O(1 + t ** 2, 1) == O(1, 1)


def test_json_round_trip():
    for spec in ALL_BACKENDS:
        ctx = ctx_of(spec)
        for b in [B.closed(ctx, 1, 2), B.open_ball(ctx, 0, Fraction(1, 2)), B.whole(ctx), B.point(ctx, 3)]:
            assert Ball.from_json(ctx, b.to_json()) == b
    with pytest.raises(FieldError):
        Ball.from_json(F2, {"kind": "closed", "center": "0"})


def test_join_rejects_empty():
    with pytest.raises(ValueError):
        B.join(B.empty(F2), C(0, 1))


# -- properties ------------------------------------------------------------------

def ball_pairs(spec):
    ctx = ctx_of(spec)
    return st.randoms(use_true_random=False).map(
        lambda r: (random_ball(ctx, r), random_ball(ctx, r), random_ball(ctx, r))
    )


def generic_in(b, b2):
    return GenericPoint.of_ball(b).in_ball(b2)


@pytest.mark.parametrize("spec", ALL_BACKENDS)
@given(data=st.data())
def test_subset_matches_generic_point_oracle(spec, data):
    b, b2, _ = data.draw(ball_pairs(spec))
    if b.is_empty or b2.is_empty:
        return
    assert B.subset(b, b2) == generic_in(b, b2)
    assert (b == b2) == (generic_in(b, b2) and generic_in(b2, b))


@pytest.mark.parametrize("spec", ALL_BACKENDS)
@given(data=st.data())
def test_laminarity(spec, data):
    b, b2, _ = data.draw(ball_pairs(spec))
    if b.is_empty or b2.is_empty:
        return
    outcomes = [B.subset(b, b2) and b != b2, B.subset(b2, b) and b != b2, B.disjoint(b, b2), b == b2]
    assert sum(outcomes) == 1


@pytest.mark.parametrize("spec", ALL_BACKENDS)
@given(data=st.data())
def test_membership_monotone_along_subset(spec, data):
    ctx = ctx_of(spec)
    b, b2, _ = data.draw(ball_pairs(spec))
    if not B.subset(b, b2):
        return
    for x in ctx.sample_points(2):
        assert not b.contains(x) or b2.contains(x)


def candidate_balls(ctx, centers):
    radii = [NEG_INF] + [Fraction(k, 2) for k in range(-4, 12)] + [INF]
    return [Ball(ctx, kind, c, r) for c in centers for r in radii for kind in (B.CLOSED, B.OPEN)]


@pytest.mark.parametrize("spec", ALL_BACKENDS)
@given(data=st.data())
def test_join_is_the_least_common_superball(spec, data):
    ctx = ctx_of(spec)
    b, b2, b3 = data.draw(ball_pairs(spec))
    if b.is_empty or b2.is_empty or b3.is_empty:
        return
    j = B.join(b, b2)
    assert B.subset(b, j) and B.subset(b2, j)
    for cand in candidate_balls(ctx, [b.center, b2.center]):
        if not cand.is_empty and B.subset(b, cand) and B.subset(b2, cand):
            assert B.subset(j, cand)
    assert B.join(b, b2) == B.join(b2, b)
    assert B.join(b, b) == b
    assert B.join(B.join(b, b2), b3) == B.join(b, B.join(b2, b3))


def test_join_laws_on_point_generated_family():
    pts = [B.point(F2, x) for x in F2.sample_points(2)[:10]]
    family = set(pts)
    for _ in range(2):
        family |= {B.join(a, b) for a in family for b in family}
    fam = sorted(family, key=lambda b: b.key)
    for a in fam:
        for b in fam:
            assert B.join(a, b) in family
            for c in fam[:8]:
                assert B.join(B.join(a, b), c) == B.join(a, B.join(b, c))
