"""Order classification of planar polynomial differential operators.

The operator X = X1 d/dx1 + X2 d/dx2 is classified by the order of its
essential expansion (0, 1, 2, 3, or at least 4 within search bounds), and
every positive answer comes with an exactly verified witness.
"""

from __future__ import annotations

from .algebra import (
    AlgebraError,
    PoleError,
    Poly2,
    RatFunc,
    derive,
    eval_point,
    field_ops,
)
from .bounds import SearchBounds
from .classifier import ClassificationReport, classify, solve_linear_pde, solve_order1
from .darboux import DarbouxPair, find_darboux, rational_first_integral
from .diffpoly import DiffPoly, residual_coeffs, xreduce
from .dsl import ParseError, parse_system
from .linalg import solve_linear
from .series import SeriesSolution, build_fg, check_compatibility, solve_series
from .vectorfield import VectorField, apply_X, c_table, commutator_residual, compute_b
from .witness import build_A, integrating_factor, verify_reduction

__all__ = [
    "AlgebraError",
    "ClassificationReport",
    "DarbouxPair",
    "DiffPoly",
    "ParseError",
    "PoleError",
    "Poly2",
    "RatFunc",
    "SearchBounds",
    "SeriesSolution",
    "VectorField",
    "apply_X",
    "build_A",
    "build_fg",
    "c_table",
    "check_compatibility",
    "classify",
    "commutator_residual",
    "compute_b",
    "derive",
    "eval_point",
    "field_ops",
    "find_darboux",
    "integrating_factor",
    "parse_system",
    "rational_first_integral",
    "residual_coeffs",
    "solve_linear",
    "solve_linear_pde",
    "solve_order1",
    "solve_series",
    "verify_reduction",
    "xreduce",
]
