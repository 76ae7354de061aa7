"""
The alpha*I + K + F decomposition of positive diagonal models.

A positive operator is absolutely [k]-norming (for some k, equivalently
for every k, and likewise for the [pi,k] and (p,k) variants) exactly when
it has the form ``alpha*I + K + F`` with ``alpha >= 0``, ``K`` positive
compact and ``F`` self-adjoint finite-rank. For a model the only
candidate is ``alpha = tail.alpha``:

- Constant tail: K and F live on the prefix.
- Above tail: tail entries contribute ``k(j) = g(j) -> 0`` to K.
- Below tail: infinitely many entries sit strictly below alpha, which
  would need an infinite-rank F. Refused.

Canonical split of the prefix: entries ``d >= alpha`` go to K
(``k = d - alpha``), entries ``d < alpha`` go to F (``f = d - alpha``).

Finite matrices are compact, hence trivially decomposable with
``alpha = 0`` and ``K = |T|``.

Key functions:
- decompose_alpha_kf(A) -> DecompositionReport
- decompose_matrix(T) -> DecompositionReport
- is_an_member(T, family=None) -> bool
- spectral_theorem_suite(corpus, ks, pis, ps, ...) -> SuiteResult
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from snorm.attainment import an_witness, is_k_norming
from snorm.corpus_registry import make_rng, sample_selections
from snorm.norms import NormFamily
from snorm.report import SuiteResult
from snorm.sn_ideal import PiWeight
from snorm.spectra.kernels import Matrix, as_matrix, polar_decompose, sym_eig
from snorm.spectra.models import DiagonalModel, TailKind, TailRule

logger = logging.getLogger(__name__)

RESYNTHESIS_HORIZON = 50


class Refusal(str, Enum):
    TAIL_APPROACHES_FROM_BELOW = "TailApproachesFromBelow"


@dataclass
class DecompositionReport:
    """Result of the alpha*I + K + F split.

    ``k_entries`` and ``f_entries`` are keyed by 1-based prefix position;
    tail positions contribute through ``k_tail`` (the tail rule shifted
    down to limit 0). ``prefix_length`` says where the tail starts.
    """

    decomposable: bool
    alpha: Fraction | float
    k_entries: dict[int, Fraction | float] = field(default_factory=dict)
    f_entries: dict[int, Fraction | float] = field(default_factory=dict)
    k_tail: TailRule | None = None
    prefix_length: int = 0
    refusal: Refusal | None = None
    polar_rank: int | None = None

    def k_value(self, j: int) -> Fraction | float:
        if j <= self.prefix_length:
            return self.k_entries.get(j, Fraction(0))
        if self.k_tail is None:
            return Fraction(0)
        return self.k_tail.value(j - self.prefix_length)

    def entry(self, j: int) -> Fraction | float:
        """alpha + k(j) + f(j)."""
        if not self.decomposable:
            raise ValueError("Refused decompositions have no entries")
        return self.alpha + self.k_value(j) + self.f_entries.get(j, Fraction(0))

    def resynthesize(self, n: int) -> list[Fraction | float]:
        return [self.entry(j) for j in range(1, n + 1)]


def decompose_alpha_kf(a: DiagonalModel) -> DecompositionReport:
    """Split a positive model as alpha*I + K + F, or refuse."""
    alpha = a.alpha
    if a.tail.kind is TailKind.BELOW:
        logger.debug("%s refused: tail approaches %s from below", a.describe(), alpha)
        return DecompositionReport(
            False, alpha, prefix_length=len(a.prefix), refusal=Refusal.TAIL_APPROACHES_FROM_BELOW
        )

    k_entries: dict[int, Fraction | float] = {}
    f_entries: dict[int, Fraction | float] = {}
    for j, d in enumerate(a.prefix, start=1):
        if d >= alpha:
            if d > alpha:
                k_entries[j] = d - alpha
        else:
            f_entries[j] = d - alpha

    if a.tail.kind is TailKind.ABOVE:
        k_tail = TailRule(TailKind.ABOVE, Fraction(0), a.tail.gap)
    else:
        k_tail = None
    return DecompositionReport(True, alpha, k_entries, f_entries, k_tail, len(a.prefix))


def decompose_matrix(t: Matrix) -> DecompositionReport:
    """alpha = 0, F = 0, K = |T| (reported through its eigenvalues)."""
    polar = polar_decompose(as_matrix(t))
    eigenvalues = sym_eig(polar.abs_t).values
    k_entries = {j: float(v) for j, v in enumerate(eigenvalues, start=1) if v > 0}
    return DecompositionReport(
        True, 0.0, k_entries, {}, None, len(eigenvalues), polar_rank=polar.rank
    )


def is_an_member(t: Matrix | DiagonalModel, family: NormFamily | None = None) -> bool:
    """Absolute-norming membership; the family parameters do not matter."""
    if family is not None:
        logger.debug("is_an_member: %s does not affect the verdict", family.label)
    if isinstance(t, DiagonalModel):
        return decompose_alpha_kf(t).decomposable
    return True


# ---------------------------------------------------------------------------
# Spectral-theorem suite
# ---------------------------------------------------------------------------

def _families(ks: Sequence[int], pis: Sequence[Sequence[object]], ps: Sequence[object]) -> list[NormFamily]:
    out: list[NormFamily] = []
    for k in ks:
        out.append(NormFamily.kyfan(k))
        for pi in pis:
            out.append(NormFamily.weighted_kyfan(PiWeight.from_prefix(pi).weights(k), k))
        for p in ps:
            out.append(NormFamily.psingular(p, k))
    return out


def spectral_theorem_suite(
    corpus: Iterable[DiagonalModel],
    ks: Sequence[int] = (1, 2, 3),
    pis: Sequence[Sequence[object]] = ((1, Fraction(1, 2)),),
    ps: Sequence[object] = (1, 2),
    *,
    rng: np.random.Generator | None = None,
    compressions: int = 20,
) -> SuiteResult:
    """Check the spectral theorems for absolute norming on every model.

    (a) membership is the same for every sampled family and parameter;
    (b) refused models yield an an_witness compression that fails;
    (c) decomposable models re-synthesize exactly and are [k]-norming,
        together with *compressions* sampled legal compressions, for
        every k in *ks*.
    """
    rng = rng or make_rng(42)
    families = _families(ks, pis, ps)
    result = SuiteResult("spectral-theorem")

    for a in corpus:
        item = a.describe()
        verdicts = {is_an_member(a, phi) for phi in families}
        result.check(len(verdicts) == 1, item, "membership depends on the family")
        report = decompose_alpha_kf(a)

        if not report.decomposable:
            for k in ks:
                witness = an_witness(a, k)
                result.check(
                    witness is not None and not witness.verdict.member,
                    item,
                    f"no failing compression found for k={k}",
                )
            continue

        n = len(a.prefix) + RESYNTHESIS_HORIZON
        result.check(report.resynthesize(n) == a.entries(n), item, "re-synthesis differs from the entries")
        selections = sample_selections(rng, compressions, len(a.prefix) + 5)
        for k in ks:
            result.check(is_k_norming(a, k).member, item, f"decomposable model is not [{k}]-norming")
            for selection in selections:
                compressed = a.select(selection)
                result.check(
                    is_k_norming(compressed, k).member,
                    item,
                    f"compression ({selection.describe()}) is not [{k}]-norming",
                    witness=selection.describe(),
                )

    logger.info(
        "Spectral-theorem suite: %d checks, %d violation(s)", result.checks, len(result.violations)
    )
    return result
