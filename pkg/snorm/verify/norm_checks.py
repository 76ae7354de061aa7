"""Norms suite: s.n. axioms on random samples and the equivalence ratios."""

from __future__ import annotations

import logging
from fractions import Fraction

from snorm.corpus_registry import random_spectrum
from snorm.norms import NormFamily, SpectrumVector, check_sn_axioms, equivalence_ratio, op_norm
from snorm.report import SuiteResult
from snorm.sn_ideal import PiWeight
from snorm.verify.base import SuiteContext

logger = logging.getLogger(__name__)

SAMPLE_PAIRS = 50
RATIO_HORIZON = 30


def axiom_families() -> list[NormFamily]:
    half = Fraction(1, 2)
    return [
        NormFamily.kyfan(1),
        NormFamily.kyfan(2),
        NormFamily.kyfan(3),
        NormFamily.weighted_kyfan((1, half), 2),
        NormFamily.weighted_kyfan((1, half, Fraction(1, 4)), 3),
        NormFamily.psingular(1, 2),
        NormFamily.psingular(2, 2),
        NormFamily.psingular(3, 3),
        NormFamily.weighted_l1(),
        NormFamily.weighted_l1(PiWeight.rule(Fraction(1, 3), 2)),
        NormFamily.minimal(),
        NormFamily.maximal(),
        NormFamily.dual(NormFamily.kyfan(2)),
        NormFamily.dual(NormFamily.weighted_kyfan((1, half), 2)),
    ]


def norms_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("norms")
    rng = ctx.rng("norms")
    samples = [
        (SpectrumVector.from_raw(random_spectrum(rng, 6)), SpectrumVector.from_raw(random_spectrum(rng, 6)))
        for _ in range(SAMPLE_PAIRS)
    ]

    for phi in axiom_families():
        report = check_sn_axioms(phi, samples)
        result.checks += report.checks_run
        for violation in report.violations:
            result.check(False, phi.label, f"{violation.axiom}: {violation.detail}", witness=violation.witness)

    for phi in (NormFamily.weighted_l1(), NormFamily.weighted_l1(PiWeight.rule(Fraction(1, 3), 2))):
        ratios = equivalence_ratio(phi, RATIO_HORIZON)
        result.check(
            ratios.trend == "increasing" and all(r < ratios.analytic_sup for r in ratios.ratios),
            phi.label,
            "n / Phi(1^n) must increase strictly towards 1/L",
            witness=[str(r) for r in ratios.ratios[:5]],
        )
    maximal = equivalence_ratio(NormFamily.maximal(), RATIO_HORIZON)
    result.check(maximal.trend == "constant", "Maximal", "n / Phi_1(1^n) must be constant")

    for a in ctx.models:
        for phi in (NormFamily.kyfan(2), NormFamily.minimal()):
            value = op_norm(phi, a)
            result.check(value >= 0, a.describe(), f"{phi.label} operator norm negative")
        result.check(
            op_norm(NormFamily.minimal(), a) == a.supremum(),
            a.describe(),
            "operator norm differs from the supremum of the entries",
        )
    return result
