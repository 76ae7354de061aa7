"""
Attainment and classification suites.

Attainment: on the model corpus and on random square matrices, the
[k], [pi,k] and (p,k) verdicts coincide, [k+1]-norming implies
[k]-norming, T, |T| and T^T T agree, eigenframes attain the norm, and
the five s_{m+1} statements agree. The worked model diag(1, 1, 1 - 1/2,
1 - 1/3, ...) is checked verbatim.

Classification: the spectral-theorem suite, plus the consistency rule
that a refused model always has a falsifying compression.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from snorm.attainment import (
    an_witness,
    attaining_set,
    is_k_norming,
    is_norming_general,
    is_norming_positive,
    is_pk_norming,
    is_weighted_norming,
    prop41_equivalences,
)
from snorm.classify import is_an_member, spectral_theorem_suite
from snorm.corpus_registry import random_matrices
from snorm.norms import NormFamily
from snorm.report import SuiteResult
from snorm.spectra.kernels import polar_decompose
from snorm.spectra.models import CoordinateSelection, DiagonalModel, TailRule
from snorm.spectra.snumbers import s_numbers_model
from snorm.verify.base import SuiteContext

logger = logging.getLogger(__name__)

KS = (1, 2, 3)
PIS = ((1, Fraction(1, 2), Fraction(1, 4)), (1, Fraction(2, 3), Fraction(2, 3)))
PS = (1, 2, Fraction(7, 2))
MATRIX_COUNT = 20
MAX_DIM = 6


def _worked_model_checks(result: SuiteResult) -> None:
    worked = DiagonalModel.of([1, 1], TailRule.below(1, 1, 1))
    item = worked.describe()
    result.check(is_k_norming(worked, 2).member, item, "must be [2]-norming")
    result.check(not is_k_norming(worked, 3).member, item, "must not be [3]-norming")
    restricted = worked.select(CoordinateSelection.dropping({1, 2}))
    result.check(not is_norming_positive(restricted).member, item, "restriction off {1,2} must not be norming")


def _family_verdicts(target: object, k: int) -> set[bool]:
    verdicts = {is_k_norming(target, k).member}  # type: ignore[arg-type]
    for pi in PIS:
        verdicts.add(is_weighted_norming(target, pi, k).member)  # type: ignore[arg-type]
    for p in PS:
        verdicts.add(is_pk_norming(target, p, k).member)  # type: ignore[arg-type]
    return verdicts


def attainment_suite(ctx: SuiteContext) -> SuiteResult:
    result = SuiteResult("attainment")
    _worked_model_checks(result)

    for a in ctx.models:
        item = a.describe()
        previous: bool | None = None
        for k in KS:
            verdicts = _family_verdicts(a, k)
            result.check(len(verdicts) == 1, item, f"[k], [pi,k], (p,k) verdicts differ at k={k}")
            member = verdicts.pop()
            if previous is not None:
                result.check(previous or not member, item, f"[{k}]-norming without [{k - 1}]-norming")
            previous = member
        if s_numbers_model(a).value_at(1) != a.alpha:
            report = prop41_equivalences(a)
            result.check(report.all_agree, item, "s_{m+1} statements disagree", witness=report.statements)

    rng = ctx.rng("attainment")
    families = [NormFamily.kyfan(k) for k in KS] + [
        NormFamily.weighted_kyfan(PIS[0][:2], 2),
        NormFamily.psingular(2, 2),
    ]
    for i, t in enumerate(random_matrices(rng, MATRIX_COUNT, MAX_DIM, square=True)):
        item = f"matrix[{i}] {t.shape[0]}x{t.shape[1]}"
        abs_t = polar_decompose(t).abs_t
        for k in KS:
            verdicts = {
                is_norming_general(t, NormFamily.kyfan(k)).member,
                is_k_norming(abs_t, k).member,
                is_k_norming(t.T @ t, k).member,
            } | _family_verdicts(abs_t, k)
            result.check(verdicts == {True}, item, f"finite matrix verdicts differ from 'member' at k={k}")
        for phi in families:
            frame = attaining_set(t, phi)
            result.check(
                frame.verified,
                item,
                f"{phi.label}: eigenframe value {frame.value!r} != norm {frame.op_norm!r}",
                witness=t,
            )
    return result


def classify_suite(ctx: SuiteContext) -> SuiteResult:
    result = spectral_theorem_suite(
        ctx.models,
        KS,
        PIS,
        PS,
        rng=ctx.rng("classify"),
    )
    result.name = "classify"
    for a in ctx.models:
        if not is_an_member(a):
            witness = an_witness(a, 1)
            result.check(
                witness is not None and not is_norming_positive(witness.compressed).member,
                a.describe(),
                "refused model without a compression failing N",
            )
    rng = ctx.rng("classify-matrices")
    for i, t in enumerate(random_matrices(rng, MATRIX_COUNT, MAX_DIM)):
        result.check(is_an_member(t), f"matrix[{i}]", "finite matrices are absolutely norming")
    return result
