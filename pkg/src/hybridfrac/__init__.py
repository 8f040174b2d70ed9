"""Hybrid-function operational matrices for Riemann-Liouville fractional
integration and a forward-substitution solver for multi-order Caputo FDEs."""

from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    ExprSyntaxError,
    HybridFracError,
    SamplingError,
    ShapeError,
)
from .expr import parse
from .hf_basis import Grid, HfPair, evaluate, from_nodes, inner_products, multiply, power, sample
from .opmat import OpMatSet, UtToeplitz, apply_row, build, frac_integrate, gamma
from .solver import FdeProblem, Solution, SolverOptions, Term, residual, solve

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ConvergenceError",
    "DomainError",
    "EvaluationError",
    "ExprSyntaxError",
    "HybridFracError",
    "SamplingError",
    "ShapeError",
    "parse",
    "Grid",
    "HfPair",
    "evaluate",
    "from_nodes",
    "inner_products",
    "multiply",
    "power",
    "sample",
    "OpMatSet",
    "UtToeplitz",
    "apply_row",
    "build",
    "frac_integrate",
    "gamma",
    "FdeProblem",
    "Solution",
    "SolverOptions",
    "Term",
    "residual",
    "solve",
]
