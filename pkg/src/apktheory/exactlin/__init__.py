"""Exact integer, rational and number-field linear algebra."""

from fractions import Fraction as BigRational

from .kernels import BACKEND
from .matrix import (
    IntMatrix,
    LatticeSolver,
    Reducer,
    det,
    hnf,
    image_basis,
    invariant_factors,
    kernel_basis,
    rank,
    rational_solve,
    saturate,
    snf,
    solve_lattice,
)
from .numfield import FieldElement, FieldSpec
from .poly import char_poly, char_poly_factor, factor, matrix_poly, pformat


def rational_eigenspace(m: IntMatrix, eigenvalue: int) -> IntMatrix:
    """Saturated basis (columns) of the integer eigenlattice ker(m - eigenvalue)."""
    if not m.is_square():
        raise ValueError("rational_eigenspace needs a square matrix")
    return kernel_basis(m - IntMatrix.identity(m.rows).scale(eigenvalue))


__all__ = [
    "BACKEND",
    "BigRational",
    "FieldElement",
    "FieldSpec",
    "IntMatrix",
    "LatticeSolver",
    "Reducer",
    "char_poly",
    "char_poly_factor",
    "det",
    "factor",
    "hnf",
    "image_basis",
    "invariant_factors",
    "kernel_basis",
    "matrix_poly",
    "pformat",
    "rank",
    "rational_eigenspace",
    "rational_solve",
    "saturate",
    "snf",
    "solve_lattice",
]
