"""Quantifier-free boolean structure shared by ball formulas and QF formulas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator


@dataclass(frozen=True)
class Not:
    arg: Any


@dataclass(frozen=True)
class And:
    args: tuple = ()


@dataclass(frozen=True)
class Or:
    args: tuple = ()


TRUE = And(())
FALSE = Or(())


def conj(*fs) -> And:
    return And(tuple(fs))


def disj(*fs) -> Or:
    return Or(tuple(fs))


def evaluate(f, atom_value: Callable[[Any], bool]) -> bool:
    if isinstance(f, Not):
        return not evaluate(f.arg, atom_value)
    if isinstance(f, And):
        return all(evaluate(g, atom_value) for g in f.args)
    if isinstance(f, Or):
        return any(evaluate(g, atom_value) for g in f.args)
    return atom_value(f)


def iter_atoms(f) -> Iterator[Any]:
    if isinstance(f, Not):
        yield from iter_atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for g in f.args:
            yield from iter_atoms(g)
    else:
        yield f


def map_atoms(f, fn: Callable[[Any], Any]):
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(g, fn) for g in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(g, fn) for g in f.args))
    return fn(f)
