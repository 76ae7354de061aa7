"""
Unit tests for s.n. functions and operator norms (snorm.norms).

Covers family construction rules, exact evaluation, operator norms on
matrices and models, the axiom checker and the equivalence ratios.
"""

from fractions import Fraction

import numpy as np
import pytest

from snorm.exceptions import InvalidNormFamilyError, PreconditionError, UnsupportedForModelError
from snorm.norms import (
    FamilyTag,
    NormFamily,
    SpectrumVector,
    check_sn_axioms,
    equivalence_ratio,
    op_norm,
    sn_eval,
    sn_eval_batch,
)
from snorm.sn_ideal import PiWeight
from snorm.spectra.models import DiagonalModel, TailRule


# ---------------------------------------------------------------------------
# SpectrumVector
# ---------------------------------------------------------------------------

class TestSpectrumVector:
    def test_from_raw_canonicalizes(self):
        assert SpectrumVector.from_raw([1, -3, 2]).entries == (3, 2, 1)

    def test_rejects_unsorted(self):
        with pytest.raises(PreconditionError, match="nonincreasing"):
            SpectrumVector((1, 2))

    def test_rejects_negative(self):
        with pytest.raises(PreconditionError):
            SpectrumVector((1, -1))

    def test_support_and_padding(self):
        xi = SpectrumVector((2, 1, 0))
        assert xi.support == 2
        assert xi.padded(5) == (2, 1, 0, 0, 0)


# ---------------------------------------------------------------------------
# NormFamily construction
# ---------------------------------------------------------------------------

class TestNormFamily:
    @pytest.mark.parametrize("k", [0, -1, 1.5, True])
    def test_bad_k(self, k):
        with pytest.raises(InvalidNormFamilyError):
            NormFamily.kyfan(k)

    def test_weights_must_start_at_one(self):
        with pytest.raises(InvalidNormFamilyError, match="pi_1 = 1"):
            NormFamily.weighted_kyfan((Fraction(1, 2), Fraction(1, 2)), 2)

    def test_weights_nonincreasing(self):
        with pytest.raises(InvalidNormFamilyError, match="nonincreasing"):
            NormFamily.weighted_kyfan((1, Fraction(1, 2), Fraction(3, 4)), 3)

    def test_too_few_weights(self):
        with pytest.raises(InvalidNormFamilyError, match="needs k=3"):
            NormFamily.weighted_kyfan((1, Fraction(1, 2)), 3)

    def test_p_below_one(self):
        with pytest.raises(InvalidNormFamilyError):
            NormFamily.psingular(0.5, 2)

    def test_double_dual_is_identity(self):
        phi = NormFamily.kyfan(2)
        assert NormFamily.dual(NormFamily.dual(phi)) == phi

    def test_labels(self):
        assert NormFamily.kyfan(2).label == "KyFan(2)"
        assert NormFamily.dual(NormFamily.minimal()).label == "Dual(Minimal)"

    def test_to_dict(self):
        phi = NormFamily.dual(NormFamily.weighted_kyfan((1, Fraction(1, 2)), 2))
        assert phi.to_dict() == {"family": "dual", "of": {"family": "wkyfan", "k": 2, "pi": ["1", "1/2"]}}

    def test_model_support(self):
        assert NormFamily.kyfan(1).supports_models
        assert NormFamily.minimal().supports_models
        assert not NormFamily.maximal().supports_models
        assert not NormFamily.weighted_l1().supports_models


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

class TestSnEval:
    def test_kyfan(self):
        assert sn_eval(NormFamily.kyfan(2), (3, 2, 1)) == 5

    def test_weighted_kyfan_exact(self):
        phi = NormFamily.weighted_kyfan((1, Fraction(1, 2), Fraction(1, 4)), 3)
        assert sn_eval(phi, (1, 1, 1)) == Fraction(7, 4)

    def test_psingular(self):
        assert sn_eval(NormFamily.psingular(2, 2), (3, 4, 1)) == pytest.approx(5.0)
        assert sn_eval(NormFamily.psingular(1, 2), (3, 4, 1)) == 7

    def test_weighted_l1(self):
        phi = NormFamily.weighted_l1(PiWeight.default())
        assert sn_eval(phi, (1, 1)) == Fraction(7, 4)

    def test_min_max(self):
        assert sn_eval(NormFamily.minimal(), (1, 3, 2)) == 3
        assert sn_eval(NormFamily.maximal(), (1, 3, 2)) == 6

    def test_dual_of_kyfan(self):
        """KyFan(2)* = max(eta_1, sum / 2)."""
        assert sn_eval(NormFamily.dual(NormFamily.kyfan(2)), (3, 1, 1, 1)) == 3
        assert sn_eval(NormFamily.dual(NormFamily.kyfan(2)), (1, 1, 1, 1)) == 2

    def test_empty_is_zero(self):
        assert sn_eval(NormFamily.kyfan(3), ()) == 0

    def test_batch_matches_scalar(self):
        x = np.array([[3.0, 2.0, 1.0], [1.0, 1.0, 0.5]])
        for phi in (NormFamily.kyfan(2), NormFamily.psingular(3, 2), NormFamily.dual(NormFamily.kyfan(2))):
            expected = [float(sn_eval(phi, row)) for row in x]
            np.testing.assert_allclose(sn_eval_batch(phi, x), expected)


# ---------------------------------------------------------------------------
# Operator norms
# ---------------------------------------------------------------------------

class TestOpNorm:
    def test_matrix_kyfan(self, diag321):
        assert op_norm(NormFamily.kyfan(2), diag321) == pytest.approx(5.0)

    def test_matrix_max_is_trace_norm(self, diag321):
        assert op_norm(NormFamily.maximal(), -diag321) == pytest.approx(6.0)

    def test_model_kyfan(self, ones_then_below):
        assert op_norm(NormFamily.kyfan(3), ones_then_below) == 3

    def test_model_min_is_supremum(self, inverse_squares):
        assert op_norm(NormFamily.minimal(), inverse_squares) == inverse_squares.supremum()

    def test_model_max_rejected(self, inverse_squares):
        with pytest.raises(UnsupportedForModelError):
            op_norm(NormFamily.maximal(), inverse_squares)

    def test_finite_rank_model_any_family(self):
        a = DiagonalModel.of([2, 1], TailRule.constant(0))
        assert op_norm(NormFamily.maximal(), a) == 3
        assert op_norm(NormFamily.weighted_l1(), a) == 2 + Fraction(3, 4)


# ---------------------------------------------------------------------------
# Axioms and equivalence ratios
# ---------------------------------------------------------------------------

def _samples() -> list[tuple[SpectrumVector, SpectrumVector]]:
    rng = np.random.default_rng(0)
    return [
        (SpectrumVector.from_raw(rng.uniform(0, 1, 4)), SpectrumVector.from_raw(rng.uniform(0, 1, 3)))
        for _ in range(10)
    ]


class TestAxioms:
    @pytest.mark.parametrize(
        "phi",
        [
            NormFamily.kyfan(2),
            NormFamily.weighted_kyfan((1, Fraction(1, 2)), 2),
            NormFamily.psingular(3, 2),
            NormFamily.weighted_l1(),
            NormFamily.minimal(),
            NormFamily.maximal(),
            NormFamily.dual(NormFamily.kyfan(2)),
        ],
        ids=lambda phi: phi.label,
    )
    def test_builtin_families_pass(self, phi):
        report = check_sn_axioms(phi, _samples())
        assert report.passed, report.first_violation
        assert report.checks_run > 2


class TestEquivalenceRatio:
    def test_weighted_l1_increases_to_two(self):
        report = equivalence_ratio(NormFamily.weighted_l1(), 20)
        assert report.trend == "increasing"
        assert report.analytic_sup == 2
        assert all(r < 2 for r in report.ratios)

    def test_maximal_constant(self):
        report = equivalence_ratio(NormFamily.maximal(), 10)
        assert report.trend == "constant"
        assert report.ratios == [1] * 10

    def test_kyfan_unbounded(self):
        report = equivalence_ratio(NormFamily.kyfan(1), 5)
        assert report.bounded is False
        assert report.ratios[-1] == 5

    def test_bad_horizon(self):
        with pytest.raises(PreconditionError):
            equivalence_ratio(NormFamily.maximal(), 0)

    def test_family_tag_values(self):
        assert FamilyTag("wl1") is FamilyTag.WL1
