"""
Verification runner for snorm.

Runs a configurable selection of suites over one seeded context. The
default order is:

1. **spectra**: kernel residuals, polar identities, Courant-Fischer.
2. **norms**: s.n. axioms and equivalence ratios.
3. **duality**: closed-form vs numeric adjoints, support sufficiency.
4. **certificates**: trace-duality witnesses against random competitors.
5. **attainment**: family equivalences, T / |T| / T^T T agreement.
6. **classify**: spectral theorems for absolute norming.
7. **counterexample**: the exact improvement iteration.
8. **phistar**: Phi_pi* attainment on compact models.

The model corpus is injectable: ``None`` means the built-in corpus plus
20 seeded random models, an empty list means no model-driven checks.
Results are reported in the fixed order above whatever the selection
order, so the report bytes depend only on the seed and the selection.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable

from snorm.config import Tolerances
from snorm.corpus_registry import load_builtin_corpus, make_rng, random_models
from snorm.exceptions import PreconditionError
from snorm.report import SuiteResult
from snorm.spectra.models import DiagonalModel
from snorm.verify.attainment_checks import attainment_suite, classify_suite
from snorm.verify.base import ClosedForm, Suite, SuiteContext
from snorm.verify.duality_checks import certificates_suite, duality_suite
from snorm.verify.ideal_checks import counterexample_suite, phistar_suite
from snorm.verify.kernel_checks import spectra_suite
from snorm.verify.norm_checks import norms_suite

logger = logging.getLogger(__name__)

RANDOM_CORPUS_SIZE = 20

SUITES: dict[str, Suite] = {
    "spectra": spectra_suite,
    "norms": norms_suite,
    "duality": duality_suite,
    "certificates": certificates_suite,
    "attainment": attainment_suite,
    "classify": classify_suite,
    "counterexample": counterexample_suite,
    "phistar": phistar_suite,
}


@dataclass
class VerifyReport:
    seed: int
    suites: list[SuiteResult] = field(default_factory=list)
    corpus_size: int = 0
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def summary(self) -> dict[str, dict[str, object]]:
        return {
            s.name: {"checks": s.checks, "violations": len(s.violations), "passed": s.passed}
            for s in self.suites
        }


def default_corpus(seed: int) -> list[DiagonalModel]:
    """Built-in models followed by seeded random ones."""
    builtin = [named.model for named in load_builtin_corpus()]
    return builtin + random_models(make_rng(seed, 0), RANDOM_CORPUS_SIZE)


def _select(suites: Iterable[str] | None) -> list[str]:
    if suites is None:
        return list(SUITES)
    wanted = set(suites)
    if "all" in wanted:
        return list(SUITES)
    unknown = wanted - set(SUITES)
    if unknown:
        raise PreconditionError(f"Unknown suite(s) {sorted(unknown)}; choose from {list(SUITES)} or 'all'")
    return [name for name in SUITES if name in wanted]


def verify_all(
    seed: int = 42,
    *,
    corpus: list[DiagonalModel] | None = None,
    suites: Iterable[str] | None = None,
    closed_form: ClosedForm | None = None,
    tolerances: Tolerances | None = None,
) -> VerifyReport:
    """Run the selected suites (all by default) under *seed*.

    Failures are report entries with witnesses; nothing is raised for a
    violated check.
    """
    names = _select(suites)
    models = default_corpus(seed) if corpus is None else list(corpus)
    ctx = SuiteContext(seed=seed, models=models, tolerances=tolerances or Tolerances())
    if closed_form is not None:
        ctx.closed_form = closed_form

    report = VerifyReport(seed=seed, corpus_size=len(models))
    for i, name in enumerate(names, start=1):
        logger.info("Suite %d/%d: %s (%d models)", i, len(names), name, len(models))
        started = time.perf_counter()
        result = SUITES[name](ctx)
        elapsed = time.perf_counter() - started
        report.suites.append(result)
        report.timing[name] = elapsed
        logger.info(
            "  %s: %d checks, %d violation(s) in %.2fs",
            name,
            result.checks,
            len(result.violations),
            elapsed,
        )
    logger.info("Verification %s", "passed" if report.passed else "FAILED")
    return report
