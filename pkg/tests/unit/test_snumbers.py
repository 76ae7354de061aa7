"""
Unit tests for s-numbers and compressions (snorm.spectra.snumbers).
"""

import logging
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, seed, settings
from hypothesis import strategies as st

from snorm.exceptions import ParseError, UnsupportedSelectionError
from snorm.spectra.models import CoordinateSelection, DiagonalModel, TailRule
from snorm.spectra.snumbers import compress, essential_spectrum_model, s_numbers_matrix, s_numbers_model


class TestModelSNumbers:
    def test_worked_model_all_ones(self, ones_then_below):
        """The tail never exceeds 1, so every s-number is 1."""
        snumbers = s_numbers_model(ones_then_below)
        assert snumbers.values(100) == [Fraction(1)] * 100

    def test_constant_tail(self):
        a = DiagonalModel.of([5, 1, 3], TailRule.constant(2))
        assert s_numbers_model(a).values(5) == [5, 3, 2, 2, 2]

    def test_above_tail_merges(self):
        a = DiagonalModel.of([Fraction(5, 2)], TailRule.above(2, 1, 0))
        # tail values 3, 5/2, 7/3, ...
        assert s_numbers_model(a).values(4) == [3, Fraction(5, 2), Fraction(5, 2), Fraction(7, 3)]

    def test_nonincreasing_and_sup(self, inverse_squares):
        values = s_numbers_model(inverse_squares).values(20)
        assert values[0] == inverse_squares.supremum()
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_value_at(self, inverse_squares):
        assert s_numbers_model(inverse_squares).value_at(3) == Fraction(1, 4)
        with pytest.raises(IndexError):
            s_numbers_model(inverse_squares).value_at(0)

    def test_segments(self):
        a = DiagonalModel.of([5, 5, 3], TailRule.constant(2))
        assert s_numbers_model(a).segments() == [(5, 2), (3, 1)]

    def test_mixed_case_flag(self):
        a = DiagonalModel.of([1], TailRule.below(1, 1, 1))
        assert s_numbers_model(a).mixed_case

    def test_essential_spectrum(self, ones_then_below):
        assert essential_spectrum_model(ones_then_below) == frozenset({Fraction(1)})


class TestMatrixSNumbers:
    def test_diag321(self, diag321):
        snumbers = s_numbers_matrix(diag321)
        assert snumbers.head == pytest.approx((3.0, 2.0, 1.0))
        assert snumbers.values(5)[3:] == [0.0, 0.0]


class TestCompress:
    def test_model_selection(self, ones_then_below):
        compressed = compress(ones_then_below, CoordinateSelection.dropping({1}))
        assert compressed.entries(2) == [1, Fraction(1, 2)]

    def test_model_rejects_index_set(self, ones_then_below):
        with pytest.raises(UnsupportedSelectionError):
            compress(ones_then_below, [1, 2, 3])

    def test_matrix_index_set(self, diag321):
        np.testing.assert_array_equal(compress(diag321, [1, 3]), np.diag([3.0, 1.0]))

    def test_matrix_basis(self, diag321):
        basis = np.eye(3)[:, :2]
        np.testing.assert_array_equal(compress(diag321, basis), diag321[:, :2])

    def test_matrix_basis_not_orthonormal(self, diag321):
        with pytest.raises(ParseError, match="orthonormal"):
            compress(diag321, np.ones((3, 2)))

    def test_matrix_index_out_of_range(self, diag321):
        with pytest.raises(UnsupportedSelectionError):
            compress(diag321, [0, 4])


# ---------------------------------------------------------------------------
# Peel-off against brute force on a truncated diagonal
# ---------------------------------------------------------------------------

_LIMITS = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]
_PREFIX_VALUES = [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]


@st.composite
def diagonal_models(draw):
    alpha = draw(st.sampled_from(_LIMITS))
    kind = draw(st.sampled_from(["constant", "above", "below"]))
    if kind == "constant":
        tail = TailRule.constant(alpha)
    else:
        c = draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(1)]))
        d = draw(st.integers(0, 3))
        q = draw(st.integers(1, 2))
        if kind == "below":
            assume(alpha - c / (1 + d) ** q >= 0)
            tail = TailRule.below(alpha, c, d, q)
        else:
            tail = TailRule.above(alpha, c, d, q)
    # alpha itself may appear in the prefix (mixed case)
    prefix = draw(st.lists(st.sampled_from([*_PREFIX_VALUES, alpha]), max_size=4))
    return DiagonalModel.of(prefix, tail)


def brute_force_snumbers(a: DiagonalModel, count: int) -> list[Fraction]:
    """s_j = min over (j-1)-sets F of leading positions of the sup of the entries outside F."""
    n = len(a.prefix) + count + 2
    entries = a.entries(n)
    beyond = max(a.alpha, a.entry(n + 1))
    out: list[Fraction] = []
    for j in range(1, count + 1):
        out.append(
            min(
                max([beyond, *(x for i, x in enumerate(entries) if i not in dropped)])
                for dropped in map(set, combinations(range(n), j - 1))
            )
        )
    return out


class TestModelSNumbersBruteForce:
    @seed(31)
    @settings(max_examples=150, deadline=None)
    @given(a=diagonal_models())
    def test_matches_truncated_enumeration(self, a):
        assert s_numbers_model(a).values(4) == brute_force_snumbers(a, 4)

    @pytest.mark.parametrize(
        "a, expected",
        [
            (DiagonalModel.of([3, 1], TailRule.constant(2)), [3, 2, 2, 2]),
            (
                DiagonalModel.of([1], TailRule.above(1, 1, 1)),
                [Fraction(3, 2), Fraction(4, 3), Fraction(5, 4), Fraction(6, 5)],
            ),
            (DiagonalModel.of([2, 1], TailRule.below(1, Fraction(1, 2))), [2, 1, 1, 1]),
        ],
    )
    def test_worked_shapes(self, a, expected):
        assert s_numbers_model(a).values(4) == expected == brute_force_snumbers(a, 4)


class TestMixedCaseWarning:
    def test_warned_once_per_model(self, caplog):
        a = DiagonalModel.of([Fraction(17, 13), 3], TailRule.below(Fraction(17, 13), Fraction(1, 13)))
        with caplog.at_level(logging.WARNING, logger="snorm.spectra.snumbers"):
            for _ in range(5):
                assert s_numbers_model(a).mixed_case
        warnings = [r for r in caplog.records if "accumulation point" in r.getMessage()]
        assert len(warnings) == 1

    def test_plain_model_is_silent(self, caplog):
        with caplog.at_level(logging.WARNING, logger="snorm.spectra.snumbers"):
            s_numbers_model(DiagonalModel.of([5, 1], TailRule.below(2, 1)))
        assert not caplog.records
