"""Balls, Swiss cheeses, distal cell decompositions and incidence counts over
discretely valued fields with finite residue field."""

from .balls import Ball
from .cheese import SwissCheese, normalize
from .config import SCHEMA_VERSION, RunConfig
from .distal import BallFamily, enumerate_cells, verify_ushd
from .field import FieldContext, FieldError, make_context
from .incidence import bound_exponents, count_incidences, elekes_grid
from .lexer import ParseError

__version__ = "0.1.0"

__all__ = [
    "Ball", "SwissCheese", "normalize", "SCHEMA_VERSION", "RunConfig",
    "BallFamily", "enumerate_cells", "verify_ushd",
    "FieldContext", "FieldError", "make_context",
    "bound_exponents", "count_incidences", "elekes_grid", "ParseError",
]
