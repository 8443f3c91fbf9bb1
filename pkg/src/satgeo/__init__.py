"""satgeo: solution-space geometry of random k-CNF formulas.

Generation and evaluation of random formulas; exhaustive cluster
decomposition with projections and frozen variables; the coarsening engine
with cores and covers; balls-in-bins stripping simulation; the pair-rate and
counting rate functions; and the constrained deviation optimization that
produces freezing densities.
"""

__version__ = "0.1.0"

from ._core import backend
from .formula import (Formula, Literal, emit_dimacs, evaluate, gen_planted_negative,
                      gen_single_sat_literal, gen_uniform, parse_dimacs)
from .words import STAR, TriAssignment

__all__ = [
    "__version__", "backend",
    "Formula", "Literal", "evaluate", "gen_uniform", "gen_planted_negative",
    "gen_single_sat_literal", "parse_dimacs", "emit_dimacs",
    "TriAssignment", "STAR",
]
