"""One-variable quantifier-free formulas over a valued field."""

from .ast import AffineValuationConstraint, Divides, Equals, Factored, holds
from .compile import (
    constraint_to_balls, divides_to_constraint, formula_to_cheese, qf_to_ball_formula,
)
from .syntax import parse, pretty

__all__ = [
    "AffineValuationConstraint", "Divides", "Equals", "Factored", "holds",
    "constraint_to_balls", "divides_to_constraint", "formula_to_cheese", "qf_to_ball_formula",
    "parse", "pretty",
]
