"""
Spectral kernels for snorm.

- kernels: dense Jacobi eigen-solver, SVD, polar decomposition and the
  Courant-Fischer value for finite matrices.
- models: symbolic positive diagonal operator models with structured tails.
- snumbers: s-numbers, essential spectrum and compressions for both.
"""

from snorm.spectra.kernels import (
    SVD,
    Eigh,
    Matrix,
    PolarFactors,
    absolute_value,
    as_matrix,
    courant_fischer_value,
    numerical_rank,
    polar_decompose,
    singular_values,
    svd,
    sym_eig,
)
from snorm.spectra.models import CoordinateSelection, DiagonalModel, Gap, TailKind, TailRule
from snorm.spectra.snumbers import (
    SNumbers,
    compress,
    essential_spectrum_model,
    s_numbers_matrix,
    s_numbers_model,
)

__all__ = [
    "SVD",
    "CoordinateSelection",
    "DiagonalModel",
    "Eigh",
    "Gap",
    "Matrix",
    "PolarFactors",
    "SNumbers",
    "TailKind",
    "TailRule",
    "absolute_value",
    "as_matrix",
    "compress",
    "courant_fischer_value",
    "essential_spectrum_model",
    "numerical_rank",
    "polar_decompose",
    "s_numbers_matrix",
    "s_numbers_model",
    "singular_values",
    "svd",
    "sym_eig",
]
