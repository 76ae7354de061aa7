"""
Duality and certificate suites.

The duality suite compares the closed-form adjoint with the numeric
maximizer and with the two explicit formulas

    KyFan(2)*(eta)            = max(eta_1, sum(eta) / 2)
    WeightedKyFan((1, p2))*   = max(eta_1, sum(eta) / (1 + p2))

on seeded random spectra. The closed form is taken from the context so a
corrupted formula can be injected and must be caught.

The certificate suite builds trace-duality witnesses on random matrices
and pits them against random competitors, whose Phi norms are computed
from ``numpy.linalg.svd`` as an independent reference. Witnesses for
matrices with graded spectra must also have unit Phi norm.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from snorm.corpus_registry import graded_matrices, random_matrices, random_spectrum
from snorm.duality import Certificate, adjoint_eval_numeric, adjoint_value, build_certificate, holder_gap
from snorm.exceptions import NoConvergenceError
from snorm.norms import NormFamily, SpectrumVector, sn_eval_batch
from snorm.report import SuiteResult
from snorm.verify.base import SuiteContext

logger = logging.getLogger(__name__)

SPECTRUM_COUNT = 500
SUPPORT_MAX = 5
SUFFICIENCY_COUNT = 25
HOLDER_COUNT = 50
CERTIFICATE_MATRICES = 200
CERTIFICATE_MAX_DIM = 6
COMPETITORS = 100
GRADED_SPECTRUM = (1.0, 1e-4, 1e-7, 1e-9)
GRADED_CERTIFICATES = 10

_PI2 = Fraction(1, 2)


def duality_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("duality")
    rng = ctx.rng("duality")
    tol = ctx.tolerances.agreement
    kyfan2 = NormFamily.kyfan(2)
    weighted = NormFamily.weighted_kyfan((1, _PI2), 2)

    for i in range(SPECTRUM_COUNT):
        eta = SpectrumVector.from_raw(random_spectrum(rng, SUPPORT_MAX))
        total = float(sum(eta.entries))
        expected = {
            kyfan2: max(float(eta[0]), total / 2),
            weighted: max(float(eta[0]), total / (1 + float(_PI2))),
        }
        for phi, formula in expected.items():
            closed = float(ctx.closed_form(phi, eta))
            result.check(
                abs(closed - formula) <= 1e-12 * max(1.0, formula),
                f"eta[{i}]",
                f"{phi.label} closed form {closed!r} != {formula!r}",
                witness=list(eta.entries),
            )
            try:
                numeric = adjoint_eval_numeric(phi, eta, SUPPORT_MAX)
            except NoConvergenceError as exc:
                result.check(False, f"eta[{i}]", f"{phi.label}: {exc}", witness=list(eta.entries))
                continue
            result.check(
                abs(closed - numeric) <= tol,
                f"eta[{i}]",
                f"{phi.label} closed form {closed!r} vs numeric {numeric!r}",
                witness=list(eta.entries),
            )

    # the adjoint does not depend on how far past the support the search runs
    psingular = NormFamily.psingular(2, 2)
    for i in range(SUFFICIENCY_COUNT):
        eta = SpectrumVector.from_raw(random_spectrum(rng, 3))
        for phi in (kyfan2, psingular):
            try:
                tight = adjoint_eval_numeric(phi, eta, eta.support)
                loose = adjoint_eval_numeric(phi, eta, eta.support + 2)
            except NoConvergenceError as exc:
                result.check(False, f"support[{i}]", f"{phi.label}: {exc}", witness=list(eta.entries))
                continue
            result.check(
                abs(tight - loose) <= tol,
                f"support[{i}]",
                f"{phi.label}: {tight!r} at the support, {loose!r} beyond it",
                witness=list(eta.entries),
            )

    for i in range(HOLDER_COUNT):
        xi = SpectrumVector.from_raw(random_spectrum(rng, SUPPORT_MAX))
        eta = SpectrumVector.from_raw(random_spectrum(rng, SUPPORT_MAX))
        for phi in (kyfan2, weighted, NormFamily.weighted_l1()):
            gap = holder_gap(phi, xi, eta)
            result.check(gap >= -1e-12, f"holder[{i}]", f"{phi.label}: negative gap {gap!r}")

    minimal, maximal = NormFamily.minimal(), NormFamily.maximal()
    eta = SpectrumVector((Fraction(3), Fraction(1), Fraction(1), Fraction(1)))
    result.check(adjoint_value(minimal, eta) == 6, "mutual-adjoint", "Minimal* must be the sum")
    result.check(adjoint_value(maximal, eta) == 3, "mutual-adjoint", "Maximal* must be the first entry")
    return result


def certificate_families() -> list[NormFamily]:
    kyfan2 = NormFamily.kyfan(2)
    weighted = NormFamily.weighted_kyfan((1, _PI2), 2)
    return [
        NormFamily.maximal(),
        kyfan2,
        weighted,
        NormFamily.dual(kyfan2),
        NormFamily.dual(weighted),
    ]


def _check_certificate(
    ctx: SuiteContext,
    result: SuiteResult,
    item: str,
    t: np.ndarray,
    cert: Certificate,
) -> float:
    """Unit Phi norm of K and pairing equal to the dual norm; returns the dual norm."""
    dual_norm = float(cert.dual_norm)
    result.check(
        abs(float(cert.phi_norm_of_k) - 1.0) <= 1e-10,
        item,
        f"||K||_Phi = {float(cert.phi_norm_of_k)!r}",
        witness=t,
    )
    result.check(
        abs(cert.pairing - dual_norm) <= ctx.tolerances.pairing * max(1.0, dual_norm),
        item,
        f"|Tr(TK)| = {cert.pairing!r} vs dual norm {dual_norm!r}",
        witness=t,
    )
    return dual_norm


def certificates_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("certificates")
    rng = ctx.rng("certificates")
    families = certificate_families()
    slack = ctx.tolerances.attaining

    for i, t in enumerate(random_matrices(rng, CERTIFICATE_MATRICES, CERTIFICATE_MAX_DIM)):
        if not np.any(t):
            continue
        m, n = t.shape
        competitors = rng.standard_normal((COMPETITORS, n, m))
        competitor_s = np.linalg.svd(competitors, compute_uv=False)
        competitor_pairing = np.abs(np.einsum("ij,kji->k", t, competitors))
        for phi in families:
            item = f"matrix[{i}] {m}x{n} {phi.label}"
            cert = build_certificate(t, phi)
            dual_norm = _check_certificate(ctx, result, item, t, cert)
            norms = sn_eval_batch(phi, competitor_s)
            best = float(np.max(competitor_pairing / norms))
            result.check(
                best <= cert.pairing + slack * max(1.0, dual_norm),
                item,
                f"competitor pairing {best!r} beats the certificate {cert.pairing!r}",
                witness=t,
            )

    # graded spectra: ||K||_Phi is measured from the returned K
    graded_families = [*families, NormFamily.dual(NormFamily.kyfan(4))]
    for i, t in enumerate(graded_matrices(rng, GRADED_SPECTRUM, GRADED_CERTIFICATES)):
        for phi in graded_families:
            item = f"graded[{i}] {phi.label}"
            _check_certificate(ctx, result, item, t, build_certificate(t, phi))
    return result
