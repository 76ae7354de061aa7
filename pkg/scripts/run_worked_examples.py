"""
Demo script: reproduce the worked objects through the public API.

Usage:
    uv run python scripts/run_worked_examples.py              # worked objects only
    uv run python scripts/run_worked_examples.py --verify     # plus the seeded suites

Prints each object's exact values to the log. With --verify it also runs
``verify_all(42)`` and writes the suite tables to outputs/verify/.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

OUTPUT_ROOT = Path("outputs")
ITERATIONS = 50

# ---------------------------------------------------------------------------
# Logging setup
# ---------------------------------------------------------------------------

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s  %(levelname)-8s  %(name)s  %(message)s",
    datefmt="%H:%M:%S",
)
log = logging.getLogger("run_worked_examples")


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

def _banner(title: str) -> None:
    log.info("=" * 70)
    log.info(title)
    log.info("=" * 70)


def _attainment() -> None:
    from snorm import CoordinateSelection, DiagonalModel, TailRule, is_k_norming, is_norming_positive
    from snorm.spectra import s_numbers_model

    _banner("Model diag(1, 1, 1 - 1/2, 1 - 1/3, ...)")
    a = DiagonalModel.of([1, 1], TailRule.below(1, 1, 1))
    log.info("  first entries : %s", [str(x) for x in a.entries(6)])
    log.info("  s-numbers     : %s", [str(x) for x in s_numbers_model(a).values(6)])
    for k in (1, 2, 3):
        verdict = is_k_norming(a, k)
        log.info("  [%d]-norming   : %s (%s)", k, verdict.member, verdict.reason.value)
    restricted = a.select(CoordinateSelection.dropping({1, 2}))
    log.info("  norming off {1,2}: %s", is_norming_positive(restricted).member)


def _duality() -> None:
    import numpy as np

    from snorm import NormFamily, adjoint_value, build_certificate

    _banner("Dual norms and certificates")
    for phi, eta in [
        (NormFamily.kyfan(2), (3, 1, 1, 1)),
        (NormFamily.weighted_kyfan((1, "1/2", "1/4"), 3), (1, 1, 1)),
        (NormFamily.minimal(), (3, 1, 1, 1)),
    ]:
        log.info("  %s* of %s = %s", phi.label, eta, adjoint_value(phi, eta))
    cert = build_certificate(np.diag([3.0, 2.0]), NormFamily.dual(NormFamily.kyfan(2)))
    log.info("  certificate for diag(3,2): pairing %.6f, dual norm %s", cert.pairing, cert.dual_norm)


def _counterexample() -> None:
    from snorm import DiagonalModel, PiWeight, TailRule, non_attainment_demo, phi_pi_star_norm_model
    from snorm.corpus_registry import get_model

    _banner(f"Improvement iteration, pi_j = (1 + 1/j)/2, {ITERATIONS} steps")
    pi = PiWeight.default()
    report = non_attainment_demo(pi, ITERATIONS)
    log.info("  first traces   : %s", [str(t) for t in report.traces[:4]])
    log.info("  last trace     : %.12f  (bound %s)", float(report.traces[-1]), report.bound)
    log.info("  checks passed  : %s", report.passed)
    identity = DiagonalModel.of([], TailRule.constant(1))
    for horizon in (50, 500):
        result = phi_pi_star_norm_model(identity, pi, horizon)
        log.info("  identity at horizon %d: %s", horizon, result.status)
    squares = get_model("inverse_squares")
    result = phi_pi_star_norm_model(squares, pi, 500)
    log.info("  diag(1, 1, 1/4, 1/9, ...): value %s, argmax %s", result.value, result.argmax)


def _verify() -> None:
    from snorm import verify_all
    from snorm.export import export_verify_tables

    _banner("Seeded verification (seed 42)")
    report = verify_all(42)
    for name, row in report.summary().items():
        log.info("  %-15s %s", name, row)
    export_verify_tables(report, OUTPUT_ROOT / "verify")


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------

def main() -> None:
    _attainment()
    _duality()
    _counterexample()
    if "--verify" in sys.argv:
        _verify()
    log.info("Done.")


if __name__ == "__main__":
    main()
