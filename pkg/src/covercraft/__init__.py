"""Exact finite search for coset and hyperplane covering problems."""
from ._kernels import backend, set_backend, using_backend
from .covering import (
    UNATTAINABLE,
    BudgetExhausted,
    CosetSystem,
    SearchBudget,
    audit,
    blocking_number,
    min_trivial_intersection_cover,
    phi,
)
from .gf import FieldSpec, MatrixGF, field_make
from .groups import FiniteAbelianGroup, lambda_of, parse_group, tau_of

__version__ = "0.1.0"

__all__ = [
    "UNATTAINABLE",
    "BudgetExhausted",
    "CosetSystem",
    "FieldSpec",
    "FiniteAbelianGroup",
    "MatrixGF",
    "SearchBudget",
    "audit",
    "backend",
    "blocking_number",
    "field_make",
    "lambda_of",
    "min_trivial_intersection_cover",
    "parse_group",
    "phi",
    "set_backend",
    "tau_of",
    "using_backend",
]
