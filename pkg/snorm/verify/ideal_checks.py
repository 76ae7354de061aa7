"""
Counterexample and Phi_pi* suites.

The counterexample suite replays the improvement iteration from
diag(1, 0, ...) under pi_j = (1 + 1/j) / 2 in exact arithmetic and checks
that the identity's ratios n / sum pi_j increase to 2 without reaching
it. The phistar suite certifies attainment on compact models and their
compressions.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from snorm.corpus_registry import random_models, sample_selections
from snorm.exceptions import HorizonTooSmallError
from snorm.report import SuiteResult
from snorm.sn_ideal import PiWeight, compact_phi_norming_check, identity_sup_sequence, non_attainment_demo, phi_pi_star_norm_model
from snorm.spectra.models import DiagonalModel, TailRule
from snorm.verify.base import SuiteContext

logger = logging.getLogger(__name__)

ITERATIONS = 50
IDENTITY_HORIZONS = (50, 500)
COMPACT_TARGET = 10
COMPRESSIONS = 5
PHISTAR_HORIZON = 500


def counterexample_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("counterexample")
    pi = PiWeight.default()
    report = non_attainment_demo(pi, ITERATIONS)
    item = pi.describe()
    result.check(report.norm_preserved, item, "Phi_pi changed under an improvement step")
    result.check(report.strictly_increasing, item, "traces are not strictly increasing")
    result.check(report.all_below_bound, item, f"a trace reached {report.bound}")

    ratios = identity_sup_sequence(pi, ITERATIONS)
    harmonic = sum((Fraction(1, j) for j in range(1, ITERATIONS + 1)), Fraction(0))
    expected = Fraction(2 * ITERATIONS) / (ITERATIONS + harmonic)
    result.check(ratios.strictly_increasing, item, "identity ratios are not strictly increasing")
    result.check(
        ratios.ratios[-1] == expected,
        item,
        f"r_{ITERATIONS} = {ratios.ratios[-1]} != {expected}",
    )

    identity = DiagonalModel.of([], TailRule.constant(1))
    for horizon in IDENTITY_HORIZONS:
        star = phi_pi_star_norm_model(identity, pi, horizon)
        result.check(
            star.attained is False,
            f"identity at horizon {horizon}",
            f"expected not attained, got {star.status}",
        )
    return result


def phistar_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("phistar")
    rng = ctx.rng("phistar")
    pi = PiWeight.default()
    compacts = [a for a in ctx.models if a.is_compact]
    if ctx.models and len(compacts) < COMPACT_TARGET:
        compacts += random_models(rng, COMPACT_TARGET - len(compacts), compact=True)

    for a in compacts:
        selections = sample_selections(rng, COMPRESSIONS, len(a.prefix) + 3)
        try:
            report = compact_phi_norming_check(a, pi, selections, PHISTAR_HORIZON)
        except HorizonTooSmallError as exc:
            result.check(False, a.describe(), str(exc))
            continue
        result.check(
            report.all_attained and report.model_result.argmax is not None,
            a.describe(),
            "Phi_pi* norm not attained on the model or a compression",
        )
    return result
