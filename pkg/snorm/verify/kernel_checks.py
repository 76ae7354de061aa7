"""
Spectra suite: kernel residuals, polar identities on random and graded
matrices, Courant-Fischer values and the s-numbers of the built-in models.

Eigenvalues from ``numpy.linalg.eigvalsh`` serve as an independent
oracle for the Jacobi kernel.
"""

from __future__ import annotations

import logging

import numpy as np

from snorm.corpus_registry import graded_matrices, random_matrices
from snorm.report import SuiteResult
from snorm.spectra.kernels import courant_fischer_value, polar_decompose, svd, sym_eig
from snorm.spectra.models import DiagonalModel, TailRule
from snorm.spectra.snumbers import s_numbers_model
from snorm.verify.base import SuiteContext

logger = logging.getLogger(__name__)

MATRIX_COUNT = 100
MAX_DIM = 10
GRADED_SPECTRA: tuple[tuple[float, ...], ...] = ((1.0, 1e-4, 1e-7, 1e-9), (1.0, 1e-5, 1e-8))
GRADED_PER_SPECTRUM = 10


def _polar_checks(result: SuiteResult, item: str, t: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.linalg.norm(t)))
    polar = polar_decompose(t)
    u, abs_t = polar.u, polar.abs_t
    projection = u.T @ u
    checks = {
        "T = U|T|": float(np.linalg.norm(t - u @ abs_t)) / scale,
        "|T| = U^T T": float(np.linalg.norm(abs_t - u.T @ t)) / scale,
        "|T|^2 = T^T T": float(np.linalg.norm(abs_t @ abs_t - t.T @ t)) / scale**2,
        "U^T U idempotent": float(np.linalg.norm(projection @ projection - projection)),
        "U^T U fixes range(|T|)": float(np.linalg.norm(projection @ abs_t - abs_t)) / scale,
        "U isometric on range(T^T)": float(np.linalg.norm(projection @ t.T - t.T)) / scale,
    }
    for identity, error in checks.items():
        result.check(error <= tol, item, f"polar: {identity} off by {error:.3e}", witness=t)


def _residual_checks(ctx: SuiteContext, result: SuiteResult) -> None:
    tol = ctx.tolerances.residual
    rng = ctx.rng("spectra")
    for i, t in enumerate(random_matrices(rng, MATRIX_COUNT, MAX_DIM)):
        item = f"matrix[{i}] {t.shape[0]}x{t.shape[1]}"
        scale = max(1.0, float(np.linalg.norm(t)))

        u, s, v = svd(t)
        r = s.size
        rebuilt = (u[:, :r] * s) @ v[:, :r].T
        result.check(
            float(np.linalg.norm(t - rebuilt)) <= tol * scale,
            item,
            "svd residual",
            witness=t,
        )
        result.check(
            float(np.linalg.norm(u.T @ u - np.eye(u.shape[1]))) <= tol * 10
            and float(np.linalg.norm(v.T @ v - np.eye(v.shape[1]))) <= tol * 10,
            item,
            "singular vectors not orthonormal",
            witness=t,
        )

        a = t.T @ t
        eig = sym_eig(a)
        a_scale = max(1.0, float(np.linalg.norm(a)))
        result.check(
            float(np.linalg.norm(a @ eig.vectors - eig.vectors * eig.values)) <= tol * a_scale,
            item,
            "eigen residual",
            witness=a,
        )
        oracle = np.linalg.eigvalsh(a)[::-1]
        result.check(
            float(np.max(np.abs(eig.values - oracle))) <= tol * a_scale,
            item,
            "eigenvalues differ from the reference",
            witness=a,
        )

        if t.shape[0] == t.shape[1]:
            _polar_checks(result, item, t, tol)

        for k in range(0, a.shape[0] - 1):
            value = courant_fischer_value(a, k)
            result.check(
                abs(value - oracle[k]) <= 1e-8 * a_scale,
                item,
                f"Courant-Fischer value for k={k}",
                witness={"k": k, "value": value, "expected": float(oracle[k])},
            )


def _graded_checks(ctx: SuiteContext, result: SuiteResult) -> None:
    tol = ctx.tolerances.residual
    rng = ctx.rng("graded")
    for spectrum in GRADED_SPECTRA:
        for i, t in enumerate(graded_matrices(rng, spectrum, GRADED_PER_SPECTRUM)):
            item = f"graded{list(spectrum)}[{i}]"
            u, s, _ = svd(t)
            result.check(
                float(np.linalg.norm(u.T @ u - np.eye(u.shape[1]))) <= tol,
                item,
                "left singular vectors not orthonormal",
                witness=t,
            )
            result.check(
                float(np.max(np.abs(s - np.asarray(spectrum)))) <= tol,
                item,
                "singular values differ from the construction",
                witness={"expected": list(spectrum), "computed": s.tolist()},
            )
            _polar_checks(result, item, t, tol)


def _model_checks(ctx: SuiteContext, result: SuiteResult) -> None:
    worked = DiagonalModel.of([1, 1], TailRule.below(1, 1, 1))
    s = s_numbers_model(worked).values(100)
    result.check(all(x == 1 for x in s), worked.describe(), "s_j = 1 for j <= 100")

    for a in ctx.models:
        values = s_numbers_model(a).values(len(a.prefix) + 10)
        result.check(
            all(x >= y for x, y in zip(values, values[1:])) and values[0] == a.supremum(),
            a.describe(),
            "s-numbers not nonincreasing from the supremum",
            witness=[str(x) for x in values],
        )


def spectra_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("spectra")
    _residual_checks(ctx, result)
    _graded_checks(ctx, result)
    _model_checks(ctx, result)
    return result
