"""
snorm: symmetric norms, their duals and norm attainment.

Public API
----------
The library works on two kinds of operators: dense float64 matrices and
``DiagonalModel`` objects (positive diagonal operators on l2 described by
a finite prefix and a structured tail). Exact rationals are used wherever
the inputs are rational.

Usage::

    from snorm import DiagonalModel, NormFamily, TailRule, is_k_norming, op_norm

    a = DiagonalModel.of([1, 1], TailRule.below(1, 1, 1))
    is_k_norming(a, 2).member   # True
    is_k_norming(a, 3).member   # False
    op_norm(NormFamily.kyfan(2), a)   # Fraction(2, 1)

Main entry points:
- ``op_norm`` / ``sn_eval``: evaluate a symmetric norm family.
- ``adjoint_value`` / ``build_certificate``: dual families and trace-duality witnesses.
- ``is_k_norming`` and friends: norm-attainment decisions with witnesses.
- ``decompose_alpha_kf`` / ``is_an_member``: absolute-norming classification.
- ``non_attainment_demo`` / ``phi_pi_star_norm_model``: the weighted-l1 ideal.
- ``verify_all``: seeded invariant suites.
"""

from snorm.attainment import (
    AttainmentVerdict,
    attaining_set,
    is_k_norming,
    is_norming_general,
    is_norming_positive,
    is_pk_norming,
    is_weighted_norming,
)
from snorm.classify import DecompositionReport, decompose_alpha_kf, decompose_matrix, is_an_member
from snorm.duality import adjoint_argmax, adjoint_value, build_certificate, phi_star_norm
from snorm.exceptions import SnormError
from snorm.norms import NormFamily, SpectrumVector, check_sn_axioms, op_norm, sn_eval
from snorm.sn_ideal import PiWeight, non_attainment_demo, phi_pi_star_norm_model
from snorm.spectra import CoordinateSelection, DiagonalModel, Gap, TailRule, polar_decompose, svd, sym_eig
from snorm.verify import verify_all

__all__ = [
    "AttainmentVerdict",
    "CoordinateSelection",
    "DecompositionReport",
    "DiagonalModel",
    "Gap",
    "NormFamily",
    "PiWeight",
    "SnormError",
    "SpectrumVector",
    "TailRule",
    "adjoint_argmax",
    "adjoint_value",
    "attaining_set",
    "build_certificate",
    "check_sn_axioms",
    "decompose_alpha_kf",
    "decompose_matrix",
    "is_an_member",
    "is_k_norming",
    "is_norming_general",
    "is_norming_positive",
    "is_pk_norming",
    "is_weighted_norming",
    "non_attainment_demo",
    "op_norm",
    "phi_pi_star_norm_model",
    "polar_decompose",
    "sn_eval",
    "svd",
    "sym_eig",
    "verify_all",
]
