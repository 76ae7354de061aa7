"""
Unit tests for the alpha*I + K + F classification (snorm.classify).
"""

from fractions import Fraction

import numpy as np
import pytest

from snorm.classify import Refusal, decompose_alpha_kf, decompose_matrix, is_an_member, spectral_theorem_suite
from snorm.corpus_registry import make_rng
from snorm.norms import NormFamily
from snorm.spectra.models import DiagonalModel, TailRule


class TestDecomposeModels:
    def test_constant_tail_prefix_split(self):
        """dip_under_constant: 1/2 goes to F, 3 goes to K."""
        report = decompose_alpha_kf(DiagonalModel.of([Fraction(1, 2), 3], TailRule.constant(2)))
        assert report.decomposable
        assert report.alpha == 2
        assert report.k_entries == {2: 1}
        assert report.f_entries == {1: Fraction(-3, 2)}
        assert report.k_tail is None

    def test_above_tail_goes_to_k(self):
        a = DiagonalModel.of([Fraction(1, 2), 4], TailRule.above(2, 1, 0))
        report = decompose_alpha_kf(a)
        assert report.decomposable
        assert report.k_tail is not None and report.k_tail.alpha == 0
        assert report.k_value(3) == 1
        assert report.resynthesize(60) == a.entries(60)

    def test_compact(self, inverse_squares):
        report = decompose_alpha_kf(inverse_squares)
        assert report.alpha == 0
        assert not report.f_entries
        assert report.resynthesize(20) == inverse_squares.entries(20)

    def test_below_tail_refused(self, ones_then_below):
        report = decompose_alpha_kf(ones_then_below)
        assert not report.decomposable
        assert report.refusal is Refusal.TAIL_APPROACHES_FROM_BELOW
        with pytest.raises(ValueError):
            report.entry(1)


class TestDecomposeMatrix:
    def test_diag(self, diag321):
        report = decompose_matrix(-diag321)
        assert report.decomposable
        assert report.alpha == 0
        assert report.k_entries == pytest.approx({1: 3.0, 2: 2.0, 3: 1.0})
        assert report.polar_rank == 3

    def test_rank_deficient(self):
        report = decompose_matrix(np.diag([2.0, 0.0]))
        assert report.polar_rank == 1
        assert list(report.k_entries) == [1]


class TestIsAnMember:
    def test_models(self, ones_then_below, identity_model, inverse_squares):
        assert not is_an_member(ones_then_below)
        assert is_an_member(identity_model)
        assert is_an_member(inverse_squares)

    def test_family_does_not_matter(self, ones_then_below):
        families = [NormFamily.kyfan(1), NormFamily.weighted_kyfan((1, Fraction(1, 2)), 2), NormFamily.psingular(3, 3)]
        assert {is_an_member(ones_then_below, phi) for phi in families} == {False}

    def test_matrices(self):
        assert is_an_member(np.random.default_rng(0).standard_normal((3, 2)))


class TestSpectralTheoremSuite:
    def test_mixed_corpus_passes(self, ones_then_below, identity_model, inverse_squares):
        corpus = [
            ones_then_below,
            identity_model,
            inverse_squares,
            DiagonalModel.of([5, 5], TailRule.constant(2)),
            DiagonalModel.of([Fraction(1, 2), 4], TailRule.above(2, 1, 0)),
        ]
        result = spectral_theorem_suite(corpus, rng=make_rng(7), compressions=5)
        assert result.passed, result.violations
        assert result.checks > len(corpus)

    def test_empty_corpus(self):
        result = spectral_theorem_suite([])
        assert result.passed
        assert result.checks == 0
