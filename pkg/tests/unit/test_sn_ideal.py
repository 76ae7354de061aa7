"""
Unit tests for the weighted-l1 ideal (snorm.sn_ideal).

All expected values are exact rationals: the improvement step and the
dual norm evaluator never go through floating point.
"""

from fractions import Fraction

import pytest

from snorm.exceptions import HorizonTooSmallError, InvalidNormFamilyError, NoImprovableIndexError, PreconditionError
from snorm.sn_ideal import (
    PiWeight,
    TraceClassDiag,
    compact_phi_norming_check,
    identity_sup_sequence,
    improvement_step,
    non_attainment_demo,
    phi_pi_eval,
    phi_pi_star_norm_model,
)
from snorm.spectra.models import CoordinateSelection, DiagonalModel, TailRule

PI = PiWeight.default()


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

class TestPiWeight:
    def test_default_rule(self):
        assert PI.weights(3) == [1, Fraction(3, 4), Fraction(2, 3)]
        assert PI.limit_value == Fraction(1, 2)

    def test_rule_with_c(self):
        pi = PiWeight.rule(Fraction(1, 3), 2)
        assert pi.weight(1) == 1
        assert pi.weight(2) == Fraction(1, 3) + Fraction(2, 3) * Fraction(2, 3)

    def test_explicit_prefix_continues(self):
        pi = PiWeight.from_prefix([1, Fraction(1, 2)])
        assert pi.weights(4) == [1, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]
        assert not pi.is_strictly_decreasing

    @pytest.mark.parametrize("limit, c", [(0, 1), (1, 1), (Fraction(1, 2), Fraction(1, 2))])
    def test_invalid_rule(self, limit, c):
        with pytest.raises(InvalidNormFamilyError):
            PiWeight.rule(limit, c)

    def test_invalid_prefix(self):
        with pytest.raises(InvalidNormFamilyError):
            PiWeight.from_prefix([Fraction(1, 2)])

    def test_to_dict(self):
        assert PI.to_dict() == {"L": "1/2", "c": "1"}


class TestPhiPiEval:
    def test_exact(self):
        assert phi_pi_eval(PI, [1, 1]) == Fraction(7, 4)

    def test_rejects_increasing(self):
        with pytest.raises(PreconditionError):
            phi_pi_eval(PI, [1, 2])


# ---------------------------------------------------------------------------
# Improvement iteration
# ---------------------------------------------------------------------------

class TestImprovementStep:
    def test_first_step(self):
        """From diag(1, 0, ...): t = (1*1 + 3/4*0)/(1 + 3/4) = 4/7, trace 8/7."""
        k1 = improvement_step(PI, TraceClassDiag.of([1], PI))
        assert k1.entries == (Fraction(4, 7), Fraction(4, 7))
        assert k1.trace == Fraction(8, 7)
        assert k1.phi_pi_norm == 1

    def test_second_step(self):
        k1 = improvement_step(PI, TraceClassDiag.of([1], PI))
        k2 = improvement_step(PI, k1)
        assert k2.entries == (Fraction(4, 7), Fraction(36, 119), Fraction(36, 119))
        assert k2.trace == Fraction(140, 119)
        assert k2.phi_pi_norm == 1

    def test_zero_operator(self):
        with pytest.raises(NoImprovableIndexError):
            improvement_step(PI, TraceClassDiag.of([], PI))

    def test_requires_unit_norm(self):
        with pytest.raises(PreconditionError, match="Phi_pi"):
            improvement_step(PI, TraceClassDiag.of([2], PI))

    def test_requires_strict_weights(self):
        pi = PiWeight.from_prefix([1, Fraction(1, 2)])
        with pytest.raises(PreconditionError, match="strictly decreasing"):
            improvement_step(pi, TraceClassDiag.of([1], pi))


class TestNonAttainmentDemo:
    def test_fifty_iterations(self):
        report = non_attainment_demo(PI, 50)
        assert report.passed
        assert len(report.traces) == 51
        assert report.phi_values == [1] * 51
        assert report.bound == 2
        assert all(gap > 0 for gap in report.gaps)

    def test_identity_ratios(self):
        ratios = identity_sup_sequence(PI, 50)
        assert ratios.strictly_increasing
        assert ratios.below_limit
        assert ratios.ratios[-1] == Fraction(100) / (50 + _harmonic(50))

    def test_bad_iterations(self):
        with pytest.raises(PreconditionError):
            non_attainment_demo(PI, 0)


# ---------------------------------------------------------------------------
# Dual norm of models
# ---------------------------------------------------------------------------

class TestPhiStarModel:
    def test_rank_one_attained_at_one(self):
        result = phi_pi_star_norm_model(DiagonalModel.of([1], TailRule.constant(0)), PI, 50)
        assert result.attained is True
        assert result.argmax == 1
        assert result.value == 1

    def test_inverse_squares(self, inverse_squares):
        """R_2 = 2 / (1 + 3/4) = 8/7 beats every other ratio."""
        result = phi_pi_star_norm_model(inverse_squares, PI, 500)
        assert result.status == "attained"
        assert result.argmax == 2
        assert result.value == Fraction(8, 7)

    @pytest.mark.parametrize("horizon", [50, 500])
    def test_identity_not_attained(self, identity_model, horizon):
        result = phi_pi_star_norm_model(identity_model, PI, horizon)
        assert result.attained is False
        assert result.argmax is None
        assert result.value == 2

    def test_inconclusive_and_strict(self):
        # s_j = 1 + 1/j = 2 pi_j: every ratio is 2 and the tail bound s_{n+1}/L stays above it
        a = DiagonalModel.of([], TailRule.above(1, 1, 0))
        result = phi_pi_star_norm_model(a, PI, 20)
        assert result.attained is None
        assert result.status == "inconclusive"
        with pytest.raises(HorizonTooSmallError):
            phi_pi_star_norm_model(a, PI, 20, strict=True)

    def test_bad_horizon(self, identity_model):
        with pytest.raises(PreconditionError):
            phi_pi_star_norm_model(identity_model, PI, 0)


class TestCompactCheck:
    def test_inverse_squares_and_compressions(self, inverse_squares):
        selections = [CoordinateSelection.dropping({1}), CoordinateSelection.tail_from(3)]
        report = compact_phi_norming_check(inverse_squares, PI, selections)
        assert report.all_attained
        assert len(report.compressions) == 2

    def test_rejects_noncompact(self, identity_model):
        with pytest.raises(PreconditionError, match="not compact"):
            compact_phi_norming_check(identity_model, PI)
