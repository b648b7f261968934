"""Command-line front end.

Usage examples::

    valdistal cheese normalize --formula '!(v(x) >= 1)'
    valdistal qf1 compile --ctx 'F2(t)@t' --formula 'v(x) + v(x-1) >= 1'
    valdistal distal cells --ctx 'F2(t)@t' --balls '[{"kind":"closed","center":"0","radius":"1"}]'
    valdistal distal verify-ushd --phi 'v(x-c) >= 1' --params '[{"c":"0"},{"c":"1"}]' --samples 50 --seed 1
    valdistal distal growth --sizes 2,4,8,16 --trials 3 --seed 1 --out growth.csv
    valdistal incidence elekes --p 2 --m 1
    valdistal incidence sweep --p 2 --m 1..3 --out sweep.csv
    valdistal bounds compute --d 2 --t 2 --q 2

Exit codes: 0 success, 1 internal error, 2 usage error, 3 parse error,
4 budget exceeded, 5 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import cheese as C
from . import distal as D
from . import incidence as I
from . import qf1
from .balls import Ball
from .config import SCHEMA_VERSION, Budgets, RunConfig
from .field import FieldError, make_context
from .lexer import ParseError

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4
EXIT_INVALID = 5

DEFAULTS = {"ctx": "F2(t)@t", "seed": 0, "out": None, "budget_ms": 60_000, "json_errors": False}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    sup = argparse.SUPPRESS
    common.add_argument("--ctx", default=sup, help="field and place, e.g. F2(t)@t, F2(t)@t^2+t+1, F3(t)@inf, Q@5")
    common.add_argument("--seed", type=int, default=sup)
    common.add_argument("--out", default=sup, help="output file (default: stdout)")
    common.add_argument("--budget-ms", type=int, default=sup, dest="budget_ms")
    common.add_argument("--max-grid", type=int, default=sup, dest="max_grid")
    common.add_argument("--max-family", type=int, default=sup, dest="max_family")
    common.add_argument("--json-errors", action="store_true", default=sup, dest="json_errors")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="valdistal", parents=[common], description=__doc__.split("\n")[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    g = groups.add_parser("cheese").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "normalize", cmd_cheese_normalize, "canonical Swiss cheese of a formula")
    p.add_argument("--formula", required=True)

    g = groups.add_parser("qf1").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "compile", cmd_qf1_compile, "compile a QF formula to a Swiss cheese")
    p.add_argument("--formula", required=True)
    p.add_argument("--params", default=None, help="JSON object binding parameter names")

    g = groups.add_parser("distal").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "cells", cmd_distal_cells, "cells of the join closure of a ball family")
    p.add_argument("--balls", required=True, help="JSON list of balls, or a path to one")
    p = leaf(g, "verify-ushd", cmd_distal_verify, "check cut-freeness of a formula family")
    p.add_argument("--phi", required=True)
    p.add_argument("--params", required=True, help="JSON list of parameter objects, or a path to one")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--height", type=int, default=3)
    p = leaf(g, "growth", cmd_distal_growth, "cell counts for random families (CSV)")
    p.add_argument("--sizes", default="2,4,8,16")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--family", choices=sorted(D.GENERATORS), default="singletons")

    g = groups.add_parser("incidence").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "count", cmd_incidence_count, "count incidences between two grid files")
    p.add_argument("--relation", default="builtin", help="'builtin' (y = a*x + b) or a DSL formula")
    p.add_argument("--names", default="c", help="parameter names for a DSL relation")
    p.add_argument("--points", required=True)
    p.add_argument("--lines", required=True)
    p.add_argument("--method", choices=["auto", "brute", "fast"], default="auto")
    p = leaf(g, "elekes", cmd_incidence_elekes, "incidences of an Elekes grid")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = leaf(g, "sweep", cmd_incidence_sweep, "exponent sweep over Elekes grids (CSV)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", required=True, help="range like 1..3 or a list 1,2")
    p.add_argument("--C", type=Fraction, default=Fraction(1), dest="C")

    g = groups.add_parser("bounds").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "compute", cmd_bounds_compute, "incidence-bound exponents")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=Fraction, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--C", type=Fraction, default=Fraction(1), dest="C")
    return parser


# -- helpers ------------------------------------------------------------------------

def _load_json(arg: str):
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", arg, exc.pos) from None


def _frac(x) -> str:
    return str(x) if isinstance(x, (int, Fraction)) else repr(x)


def _num(x) -> str:
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{float(x):.12g}"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def _read_grid(path: str, ctx, arity: int, scalar: bool = False) -> list:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [ctx.parse(s) for s in line.split(",")]
            if len(parts) != arity:
                raise ParseError(f"{path}:{lineno}: expected {arity} elements, got {len(parts)}", line, 0)
            rows.append(parts[0] if scalar else tuple(parts))
    return rows


class Deadline:
    def __init__(self, budget_ms: int):
        self.budget_ms = budget_ms
        self.start = time.monotonic()

    def check(self, what: str):
        if (time.monotonic() - self.start) * 1000 > self.budget_ms:
            raise I.BudgetExceeded(f"time budget of {self.budget_ms} ms exceeded during {what}")


def _emit_json(cfg: RunConfig, result) -> str:
    doc = {"schema": SCHEMA_VERSION, "config": cfg.to_json(), "result": result}
    return json.dumps(doc, indent=2) + "\n"


def _emit_csv(cfg: RunConfig, columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for line in cfg.header_lines():
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


# -- commands -----------------------------------------------------------------------

def cmd_cheese_normalize(args, cfg, ctx, rng, deadline):
    f = qf1.parse(args.formula, ctx)
    return _emit_json(cfg, qf1.formula_to_cheese(f, ctx).to_json())


def cmd_qf1_compile(args, cfg, ctx, rng, deadline):
    params = _load_json(args.params) if args.params else None
    f = qf1.parse(args.formula, ctx, params)
    s = qf1.formula_to_cheese(f, ctx)
    result = {"formula": qf1.pretty(f, ctx), "cheese": s.to_json(), "complexity": list(C.complexity(s))}
    return _emit_json(cfg, result)


def cmd_distal_cells(args, cfg, ctx, rng, deadline):
    balls = [Ball.from_json(ctx, b) for b in _load_json(args.balls)]
    if len(balls) > cfg.budgets.max_family:
        raise I.BudgetExceeded(f"{len(balls)} balls exceed the family budget {cfg.budgets.max_family}")
    fam = D.BallFamily.of(ctx, balls)
    cells = D.enumerate_cells(fam)
    result = {
        "b0": len(fam),
        "cells": len(cells),
        "max_holes": max(len(c.holes) for c in cells),
        "q": ctx.q,
        "decomposition": [c.to_json() for c in cells],
    }
    return _emit_json(cfg, result)


def cmd_distal_verify(args, cfg, ctx, rng, deadline):
    params = _load_json(args.params)
    if not isinstance(params, list) or not all(isinstance(b, dict) for b in params):
        raise ParseError("--params must be a JSON list of objects", str(args.params), 0)
    pool = ctx.sample_points(args.height)
    samples = rng.sample(pool, min(args.samples, len(pool)))
    report = D.verify_ushd(args.phi, ctx, params, samples)
    return _emit_json(cfg, report.to_json())


def cmd_distal_growth(args, cfg, ctx, rng, deadline):
    sizes = _parse_range(args.sizes)
    if sizes and max(sizes) > cfg.budgets.max_family:
        raise I.BudgetExceeded(f"family size {max(sizes)} exceeds budget {cfg.budgets.max_family}")
    gen = D.GENERATORS[args.family]
    rows = []
    for n in sizes:
        deadline.check(f"growth size {n}")
        for r in D.cell_growth_experiment(ctx, gen, [n], args.trials, rng):
            rows.append([r["size"], r["trial"], r["b0"], r["cells"], r["max_holes"], ctx.q])
    return _emit_csv(cfg, ["size", "trial", "b0", "cells", "max_holes", "q"], rows)


def cmd_incidence_count(args, cfg, ctx, rng, deadline):
    if args.relation == "builtin":
        E = I.PointLine()
    else:
        names = [n.strip() for n in args.names.split(",") if n.strip()]
        E = I.FormulaRelation(args.relation, ctx, names)
    A0 = _read_grid(args.points, ctx, E.n, scalar=not isinstance(E, I.PointLine))
    B0 = _read_grid(args.lines, ctx, E.m)
    if len(A0) * len(B0) > cfg.budgets.max_grid ** 2:
        raise I.BudgetExceeded("grid too large for the configured budget")
    count = I.count_incidences(E, A0, B0, args.method)
    return _emit_json(cfg, {"points": len(A0), "lines": len(B0), "incidences": count})


def cmd_incidence_elekes(args, cfg, ctx, rng, deadline):
    N = args.p ** (3 * args.m)
    if N > cfg.budgets.max_grid:
        raise I.BudgetExceeded(f"grid with {N} points exceeds budget {cfg.budgets.max_grid}")
    points, lines = I.elekes_grid(args.p, args.m)
    count = I.count_incidences(I.PointLine(), points, lines)
    result = {
        "points": len(points),
        "lines": len(lines),
        "incidences": count,
        "identity_I3_eq_N4": count ** 3 == len(points) ** 4,
    }
    return _emit_json(cfg, result)


def cmd_incidence_sweep(args, cfg, ctx, rng, deadline):
    rows = []
    for m in _parse_range(args.m):
        deadline.check(f"sweep m={m}")
        for r in I.exponent_sweep(args.p, [m], C=args.C, max_points=cfg.budgets.max_grid):
            rows.append([r["N"], r["I"], _num(r["I/N^(4/3)"]), _num(r["I/N^(3/2)"]), _num(r["bound_value"])])
    return _emit_csv(cfg, ["N", "I", "I/N^(4/3)", "I/N^(3/2)", "bound_value"], rows)


def cmd_bounds_compute(args, cfg, ctx, rng, deadline):
    bp = I.BoundParams(d=args.d, s=args.s, t=args.t, q=args.q, C=args.C)
    ex = I.bound_exponents(bp)
    return _emit_json(cfg, {k: _frac(v) for k, v in ex._asdict().items()})


# -- dispatch -----------------------------------------------------------------------

def _settings(ns) -> dict:
    return {k: getattr(ns, k, v) for k, v in DEFAULTS.items()}


def _fail(code: int, kind: str, message: str, json_errors: bool, **extra) -> int:
    if json_errors:
        payload = {"error": kind, "message": message, "exit_code": code, **extra}
        sys.stderr.write(json.dumps(payload) + "\n")
    else:
        sys.stderr.write(f"valdistal: {kind}: {message}\n")
    return code


def dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_errors = "--json-errors" in argv
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc), json_errors)
    opts = _settings(ns)
    budgets = Budgets(
        max_grid=getattr(ns, "max_grid", Budgets.max_grid),
        max_family=getattr(ns, "max_family", Budgets.max_family),
        budget_ms=opts["budget_ms"],
    )
    skip = {"func", "group", "cmd", *DEFAULTS, "max_grid", "max_family"}
    cmd_args = {k: _frac(v) if isinstance(v, Fraction) else v
                for k, v in sorted(vars(ns).items()) if k not in skip}
    cfg = RunConfig(
        command=f"{ns.group} {ns.cmd}",
        ctx=opts["ctx"],
        seed=opts["seed"],
        budgets=budgets,
        args=cmd_args,
        out=opts["out"],
    )
    try:
        ctx = make_context(opts["ctx"])
        rng = random.Random(opts["seed"])
        text = ns.func(ns, cfg, ctx, rng, Deadline(budgets.budget_ms))
    except ParseError as exc:
        return _fail(EXIT_PARSE, "parse", exc.message, opts["json_errors"], position=exc.pos)
    except I.BudgetExceeded as exc:
        return _fail(EXIT_BUDGET, "budget", str(exc), opts["json_errors"])
    except (FieldError, D.UshdError, ValueError, ZeroDivisionError, OSError) as exc:
        return _fail(EXIT_INVALID, "invalid", str(exc), opts["json_errors"])
    except Exception as exc:  # noqa: BLE001
        return _fail(EXIT_INTERNAL, "internal", f"{type(exc).__name__}: {exc}", opts["json_errors"])
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
