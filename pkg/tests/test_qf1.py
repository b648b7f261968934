import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from valdistal import balls as B
from valdistal import cheese as S
from valdistal import qf1
from valdistal.cheese import Cheese, InBall, SwissCheese, normalize
from valdistal.field import ParseError, make_context
from valdistal.logic import And, Not, iter_atoms
from valdistal.qf1 import AffineValuationConstraint as Affine
from valdistal.qf1 import Divides, Equals, Factored
from support import (
    BACKENDS, GenericPoint, affine_holds_at, ctx_of, eval_ball_formula, point_pool,
    random_constraint_terms, small_element, witnesses,
)

F2 = make_context("F2(t)@t")
t = F2.gen
RELS = ["<", "<=", "=", ">=", ">"]


def compile_(text, ctx=F2, params=None):
    return qf1.formula_to_cheese(qf1.parse(text, ctx, params), ctx)


def cheese(ctx, *pairs):
    return SwissCheese(ctx, tuple(Cheese(r, tuple(h)) for r, h in pairs))


# -- parsing ---------------------------------------------------------------------

def test_parse_examples():
    assert qf1.parse("v(x) >= 1", F2) == Affine(((1, F2.zero),), ">=", 1)
    assert qf1.parse("x = 1+t", F2) == Equals(1 + t)
    d = qf1.parse("div((x-0)^1*(x-1)^1 ; c=1 | (x-t)^2 ; c=1)", F2)
    assert d == Divides(Factored(F2.one, ((F2.zero, 1), (F2.one, 1))), Factored(F2.one, ((t, 2),)))


def test_parameters_substitute():
    f = qf1.parse("v(x-c) >= v(b)", F2, {"c": "t", "b": "t^2"})
    assert f == Affine(((1, t),), ">=", 2)


@pytest.mark.parametrize("text", [
    "v(x) >= 1",
    "x = 1+t",
    "div((x-0)^2 ; c=t | x-1 ; c=1)",
    "affine{2*v(x-1) - v(x-t) < 3}",
    "x in open(t, 1/2) | !(v(x-t) = 3) & true",
    "!(x in closed(1/t, -1)) & false",
    "v(x-(1+t)) >= inf",
])
def test_pretty_round_trips(text):
    f = qf1.parse(text, F2)
    assert qf1.parse(qf1.pretty(f, F2), F2) == f


@pytest.mark.parametrize("text,fragment", [
    ("v(x) >=", "threshold"),
    ("v(y) >= 1", "v(x"),
    ("div(x^2+1 | x)", "factored"),
    ("v(x) >= 1 &", ""),
    ("x in ball(0, 1)", ""),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        qf1.parse(text, F2)
    assert fragment in str(err.value)
    assert 0 <= err.value.pos <= len(text)


def test_duplicate_centers_rejected_and_merged():
    with pytest.raises(ValueError):
        Affine(((1, t), (2, t)), ">=", 0)
    assert Affine.merged([(1, t), (2, t)], ">=", 0).terms == ((3, t),)


# -- divisibility ------------------------------------------------------------------

def test_divides_to_constraint_examples():
    c = qf1.divides_to_constraint(qf1.parse("div(x-0 | x-1)", F2), F2)
    assert c == Affine(((1, F2.zero), (-1, F2.one)), "<=", 0)
    c = qf1.divides_to_constraint(qf1.parse("div(1 | x-0)", F2), F2)
    assert c == Affine(((-1, F2.zero),), "<=", 0)
    a = qf1.parse("div((x-0)^2 ; c=t | x-1 ; c=1)", F2)
    c = qf1.divides_to_constraint(a, F2)
    assert c == Affine(((2, F2.zero), (-1, F2.one)), "<=", -1)
    for x in F2.sample_points(4):
        if x not in (F2.zero, F2.one):
            assert c.holds(F2, x) == qf1.holds(a, F2, x)


def test_divides_with_common_roots_keeps_them():
    a = qf1.parse("div((x-1)^3 ; c=t | (x-1)*(x-t))", F2)
    s = qf1.formula_to_cheese(a, F2)
    for x in point_pool(F2, random.Random(3)):
        assert S.member(s, x) == qf1.holds(a, F2, x)
    assert S.member(s, F2.one)


def test_zero_constant_rejected():
    a = Divides(Factored(F2.zero, ()), Factored(F2.one, ()))
    with pytest.raises(ValueError):
        qf1.divides_to_constraint(a, F2)


# -- compilation examples --------------------------------------------------------------

def test_single_ball():
    c = Affine(((1, F2.zero),), ">=", 1)
    assert normalize(qf1.constraint_to_balls(c, F2), F2) == S.from_ball(B.closed(F2, 0, 1))


def test_two_center_sum():
    assert compile_("v(x) + v(x-1) >= 1") == cheese(F2, (B.closed(F2, 0, 1), []), (B.closed(F2, 1, 1), []))


def test_difference_is_complement_of_open_unit_ball_at_zero():
    s = compile_("v(x) - v(x-1) <= 0")
    assert s == cheese(F2, (B.whole(F2), [B.open_ball(F2, 0, 0)]))
    for x in F2.sample_points(4):
        assert S.member(s, x) == (F2.valuation(x) <= F2.valuation(x - 1))


def test_formula_to_cheese_examples():
    assert qf1.formula_to_cheese(Equals(F2.zero), F2) == S.from_ball(B.point(F2, 0))
    assert compile_("!(v(x) >= 1)") == cheese(F2, (B.whole(F2), [B.closed(F2, 0, 1)]))
    f = qf1.parse("(v(x) + v(x-1) >= 1) & !(v(x-1) >= 2)", F2)
    s = qf1.formula_to_cheese(f, F2)
    expected = normalize(And((
        qf1.qf_to_ball_formula(qf1.parse("v(x) + v(x-1) >= 1", F2), F2),
        Not(InBall(B.closed(F2, 1, 2))),
    )), F2)
    assert s == expected
    assert s == cheese(F2, (B.closed(F2, 0, 1), []), (B.closed(F2, 1, 1), [B.closed(F2, 1, 2)]))


def test_fractional_threshold_gives_rational_radius():
    s = compile_("2*v(x) >= 1")
    assert s == S.from_ball(B.closed(F2, 0, Fraction(1, 2)))
    # over K the same points as closed(0, 1)
    assert all(S.member(s, x) == (F2.valuation(x) >= 1) for x in F2.sample_points(4))


def test_infinite_thresholds():
    assert compile_("v(x-t) >= inf") == S.from_ball(B.point(F2, t))
    assert compile_("v(x-t) < inf") == cheese(F2, (B.whole(F2), [B.point(F2, t)]))
    assert compile_("-v(x) > 0 | v(x) >= 0") == S.full(F2)


# -- properties ------------------------------------------------------------------

def constraints(spec):
    ctx = ctx_of(spec)

    def build(r):
        return Affine(tuple(random_constraint_terms(ctx, r)), r.choice(RELS), r.randint(-5, 5))

    return st.randoms(use_true_random=False).map(build)


@pytest.mark.parametrize("spec", BACKENDS)
@given(data=st.data())
def test_compilation_sound_on_points(spec, data):
    ctx = ctx_of(spec)
    c = data.draw(constraints(spec))
    s = qf1.formula_to_cheese(c, ctx)
    for x in ctx.sample_points(3):
        assert S.member(s, x) == c.holds(ctx, x)
    for g in c.centers:
        assert S.member(s, g) == c.holds(ctx, g)


@pytest.mark.parametrize("spec", BACKENDS)
@given(data=st.data())
def test_compilation_sound_at_generic_points(spec, data):
    ctx = ctx_of(spec)
    c = data.draw(constraints(spec))
    s = qf1.formula_to_cheese(c, ctx)
    f = s.to_formula()
    pool = [B.point(ctx, g) for g in c.centers]
    for w in witnesses(ctx, [s.balls(), pool]):
        assert eval_ball_formula(f, w.in_ball) == affine_holds_at(c.terms, c.rel, c.threshold, w)


@pytest.mark.parametrize("spec", BACKENDS)
@given(data=st.data())
def test_centers_come_from_input(spec, data):
    ctx = ctx_of(spec)
    c = data.draw(constraints(spec))
    centers = set(c.centers)
    for atom in iter_atoms(qf1.constraint_to_balls(c, ctx)):
        b = atom.ball
        if not b.is_whole and not b.is_empty:
            assert b.center in centers


@pytest.mark.parametrize("spec", BACKENDS)
@given(data=st.data())
def test_ball_count_bounded_uniformly_in_centers(spec, data):
    # a fixed shape (multiplicities, relation, threshold) with fresh centers
    ctx = ctx_of(spec)
    r = data.draw(st.randoms(use_true_random=False))
    shape = [n for n, _ in random_constraint_terms(ctx, r)]
    rel, nu = r.choice(RELS), r.randint(-5, 5)
    k = len(shape)
    for _ in range(5):
        centers = []
        while len(centers) < k:
            g = small_element(ctx, r)
            if g not in centers:
                centers.append(g)
        c = Affine(tuple(zip(shape, centers)), rel, nu)
        s = qf1.formula_to_cheese(c, ctx)
        assert len(set(s.balls())) <= 2 * k * k + k


@pytest.mark.parametrize("spec", BACKENDS)
@given(data=st.data())
def test_divides_sound(spec, data):
    ctx = ctx_of(spec)
    r = data.draw(st.randoms(use_true_random=False))
    roots = [small_element(ctx, r) for _ in range(r.randint(0, 3))]
    f_roots = tuple({g: r.randint(1, 3) for g in roots[: r.randint(0, len(roots))]}.items())
    g_roots = tuple({g: r.randint(1, 3) for g in roots[r.randint(0, len(roots)):]}.items())
    consts = [x for x in ctx.sample_points(2) if x != 0]
    a = Divides(Factored(r.choice(consts), f_roots), Factored(r.choice(consts), g_roots))
    s = qf1.formula_to_cheese(a, ctx)
    for x in ctx.sample_points(2) + roots:
        assert S.member(s, x) == qf1.holds(a, ctx, x)
