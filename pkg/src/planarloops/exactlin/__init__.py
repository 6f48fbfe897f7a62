"""Exact coefficient rings and sparse exact linear algebra."""

from .elim import BACKEND
from .matrix import SparseMatrix, block_matrix, hstack
from .rings import QQ, ZZ, CoeffRing, RingError, prime_field
from .smith import (
    DifferentialError,
    HomologySummary,
    check_composite,
    homology_at,
    integer_kernel,
    rank_over_field,
    smith_normal_form,
    smith_with_transforms,
    solve_integer,
)

__all__ = [
    "BACKEND",
    "CoeffRing",
    "DifferentialError",
    "HomologySummary",
    "QQ",
    "RingError",
    "SparseMatrix",
    "ZZ",
    "block_matrix",
    "check_composite",
    "homology_at",
    "hstack",
    "integer_kernel",
    "prime_field",
    "rank_over_field",
    "smith_normal_form",
    "smith_with_transforms",
    "solve_integer",
]
