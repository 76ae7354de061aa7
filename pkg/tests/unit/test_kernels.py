"""
Unit tests for the dense spectral kernels (snorm.spectra.kernels).

Fixed examples pin the ordering and rank conventions; hypothesis checks
the factorization identities on generated matrices against numpy as an
independent reference.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from snorm.corpus_registry import graded_matrices, make_rng
from snorm.exceptions import BadRankError, NotSymmetricError, ParseError
from snorm.spectra.kernels import (
    absolute_value,
    as_matrix,
    courant_fischer_value,
    numerical_rank,
    polar_decompose,
    singular_values,
    svd,
    sym_eig,
)

MAX_DIMENSION = 5
ENTRY_BOUND = 10.0

_entries = st.floats(
    min_value=-ENTRY_BOUND,
    max_value=ENTRY_BOUND,
    allow_nan=False,
    allow_infinity=False,
    allow_subnormal=False,
)


@st.composite
def matrices(draw, square: bool = False):
    m = draw(st.integers(1, MAX_DIMENSION))
    n = m if square else draw(st.integers(1, MAX_DIMENSION))
    return draw(arrays(np.float64, (m, n), elements=_entries))


@st.composite
def symmetric_matrices(draw):
    a = draw(matrices(square=True))
    return a + a.T


# ---------------------------------------------------------------------------
# Input validation
# ---------------------------------------------------------------------------

class TestAsMatrix:
    def test_list_input(self):
        a = as_matrix([[1, 2], [3, 4]])
        assert a.dtype == np.float64
        assert a.shape == (2, 2)

    def test_rejects_vector(self):
        with pytest.raises(ParseError, match="2-D"):
            as_matrix([1.0, 2.0])

    def test_rejects_empty(self):
        with pytest.raises(ParseError):
            as_matrix(np.zeros((0, 3)))

    def test_rejects_nan(self):
        with pytest.raises(ParseError, match="finite"):
            as_matrix([[1.0, float("nan")]])


# ---------------------------------------------------------------------------
# sym_eig
# ---------------------------------------------------------------------------

class TestSymEig:
    def test_diagonal_sorted_descending(self):
        eig = sym_eig(np.diag([1.0, 2.0, 3.0]))
        np.testing.assert_allclose(eig.values, [3.0, 2.0, 1.0])
        # eigenvectors are the identity columns, permuted
        np.testing.assert_allclose(np.abs(eig.vectors), np.eye(3)[:, [2, 1, 0]], atol=1e-15)

    def test_two_by_two(self):
        eig = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(eig.values, [3.0, 1.0], atol=1e-14)

    def test_zero_matrix(self):
        eig = sym_eig(np.zeros((3, 3)))
        np.testing.assert_array_equal(eig.values, np.zeros(3))
        np.testing.assert_allclose(eig.vectors, np.eye(3))

    def test_rejects_nonsymmetric(self):
        with pytest.raises(NotSymmetricError):
            sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_rectangular(self):
        with pytest.raises(NotSymmetricError, match="square"):
            sym_eig(np.ones((2, 3)))

    @seed(1)
    @settings(max_examples=60, deadline=None)
    @given(a=symmetric_matrices())
    def test_eigen_residual_and_orthonormality(self, a):
        eig = sym_eig(a)
        scale = max(1.0, float(np.linalg.norm(a)))
        residual = a @ eig.vectors - eig.vectors * eig.values
        assert np.linalg.norm(residual) <= 1e-10 * scale
        np.testing.assert_allclose(eig.vectors.T @ eig.vectors, np.eye(a.shape[0]), atol=1e-10)
        assert np.all(np.diff(eig.values) <= 0)
        np.testing.assert_allclose(eig.values, np.linalg.eigvalsh(a)[::-1], atol=1e-10 * scale)


# ---------------------------------------------------------------------------
# SVD and polar factors
# ---------------------------------------------------------------------------

class TestSVD:
    def test_shapes_rectangular(self):
        t = np.arange(6, dtype=float).reshape(2, 3)
        u, s, v = svd(t)
        assert u.shape == (2, 2)
        assert s.shape == (2,)
        assert v.shape == (3, 3)

    def test_diag321(self, diag321):
        np.testing.assert_allclose(singular_values(diag321), [3.0, 2.0, 1.0])

    def test_negative_diagonal(self):
        np.testing.assert_allclose(singular_values(np.diag([-1.0, 2.0])), [2.0, 1.0])

    @seed(2)
    @settings(max_examples=60, deadline=None)
    @given(t=matrices())
    def test_reconstruction(self, t):
        u, s, v = svd(t)
        p = s.size
        scale = max(1.0, float(np.linalg.norm(t)))
        rebuilt = u[:, :p] @ np.diag(s) @ v[:, :p].T
        assert np.linalg.norm(t - rebuilt) <= 1e-8 * scale
        np.testing.assert_allclose(u.T @ u, np.eye(u.shape[0]), atol=1e-8)
        np.testing.assert_allclose(v.T @ v, np.eye(v.shape[0]), atol=1e-8)
        np.testing.assert_allclose(s, np.linalg.svd(t, compute_uv=False), atol=1e-7 * scale)


class TestPolar:
    def test_rank_deficient_diagonal(self):
        """T = diag(1, 0): U is a partial isometry, not unitary."""
        polar = polar_decompose(np.diag([1.0, 0.0]))
        np.testing.assert_allclose(polar.u, np.diag([1.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(polar.abs_t, np.diag([1.0, 0.0]), atol=1e-14)
        assert polar.rank == 1

    def test_rejects_rectangular(self):
        with pytest.raises(ParseError, match="square"):
            polar_decompose(np.ones((2, 3)))

    def test_absolute_value_rectangular(self):
        t = np.array([[3.0, 0.0, 0.0], [0.0, -2.0, 0.0]])
        np.testing.assert_allclose(absolute_value(t), np.diag([3.0, 2.0, 0.0]), atol=1e-14)

    @seed(3)
    @settings(max_examples=60, deadline=None)
    @given(t=matrices(square=True))
    def test_factorization_identities(self, t):
        polar = polar_decompose(t)
        scale = max(1.0, float(np.linalg.norm(t)))
        assert np.linalg.norm(t - polar.u @ polar.abs_t) <= 1e-8 * scale
        assert np.linalg.norm(t.T @ t - polar.abs_t @ polar.abs_t) <= 1e-8 * scale**2
        np.testing.assert_allclose(polar.abs_t, polar.abs_t.T, atol=1e-12 * scale)


# ---------------------------------------------------------------------------
# Courant-Fischer
# ---------------------------------------------------------------------------

class TestCourantFischer:
    def test_diagonal(self):
        a = np.diag([3.0, 2.0, 1.0])
        assert courant_fischer_value(a, 0) == pytest.approx(3.0)
        assert courant_fischer_value(a, 1) == pytest.approx(2.0)
        assert courant_fischer_value(a, 2) == pytest.approx(1.0)

    def test_rank_out_of_range(self):
        with pytest.raises(BadRankError):
            courant_fischer_value(np.eye(2), 2)
        with pytest.raises(BadRankError):
            courant_fischer_value(np.eye(2), -1)

    @seed(4)
    @settings(max_examples=40, deadline=None)
    @given(t=matrices(square=True), data=st.data())
    def test_matches_next_eigenvalue(self, t, data):
        a = t.T @ t
        k = data.draw(st.integers(0, a.shape[0] - 1))
        expected = np.linalg.eigvalsh(a)[::-1][k]
        assert courant_fischer_value(a, k) == pytest.approx(expected, abs=1e-8 * max(1.0, np.linalg.norm(a)))


# ---------------------------------------------------------------------------
# Graded spectra and the full set of polar identities
# ---------------------------------------------------------------------------

GRADED_SPECTRA = [(1.0, 1e-4, 1e-7, 1e-9), (1.0, 1e-5, 1e-8)]


def assert_polar_identities(t: np.ndarray, tol: float = 1e-10) -> None:
    """T = U|T|, |T| = U^T T, U^T U a projection fixing range(|T|) and range(T^T)."""
    polar = polar_decompose(t)
    u, abs_t = polar.u, polar.abs_t
    scale = max(1.0, float(np.linalg.norm(t)))
    projection = u.T @ u
    assert np.linalg.norm(t - u @ abs_t) <= tol * scale
    assert np.linalg.norm(abs_t - u.T @ t) <= tol * scale
    assert np.linalg.norm(projection @ projection - projection) <= tol
    assert np.linalg.norm(projection - projection.T) <= tol
    assert np.linalg.norm(projection @ abs_t - abs_t) <= tol * scale
    assert np.linalg.norm(projection @ t.T - t.T) <= tol * scale


class TestGradedSpectra:
    @pytest.mark.parametrize("spectrum", GRADED_SPECTRA)
    @pytest.mark.parametrize("stream", range(20))
    def test_svd_orthonormal_and_accurate(self, spectrum, stream):
        t = graded_matrices(make_rng(2024, stream), spectrum, 1)[0]
        u, s, v = svd(t)
        np.testing.assert_allclose(u.T @ u, np.eye(len(spectrum)), atol=1e-12)
        np.testing.assert_allclose(v.T @ v, np.eye(len(spectrum)), atol=1e-12)
        np.testing.assert_allclose(s, spectrum, rtol=0, atol=1e-12)
        assert np.linalg.norm(t - (u * s) @ v.T) <= 1e-12

    @pytest.mark.parametrize("spectrum", GRADED_SPECTRA)
    @pytest.mark.parametrize("stream", range(20))
    def test_polar_identities(self, spectrum, stream):
        t = graded_matrices(make_rng(2024, stream), spectrum, 1)[0]
        assert_polar_identities(t)
        assert polar_decompose(t).rank == len(spectrum)

    def test_rank_deficient_graded(self):
        """A singular value below 1e-12 * s_max is dropped from U."""
        t = graded_matrices(make_rng(7), (1.0, 1e-6, 1e-14), 1)[0]
        polar = polar_decompose(t)
        assert polar.rank == 2
        assert_polar_identities(t)


class TestPolarIdentities:
    @seed(5)
    @settings(max_examples=80, deadline=None)
    @given(t=matrices(square=True))
    def test_random_square(self, t):
        assert_polar_identities(t)

    def test_zero_matrix(self):
        polar = polar_decompose(np.zeros((3, 3)))
        assert polar.rank == 0
        np.testing.assert_array_equal(polar.u, np.zeros((3, 3)))
        assert_polar_identities(np.zeros((3, 3)))

    def test_wide_svd_through_transpose(self):
        t = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1e-8]])
        u, s, v = svd(t)
        np.testing.assert_allclose(s, [1.0, 1e-8], rtol=1e-12)
        np.testing.assert_allclose(u.T @ u, np.eye(2), atol=1e-14)
        np.testing.assert_allclose((u * s) @ v[:, :2].T, t, atol=1e-15)


class TestNumericalRank:
    def test_empty_and_zero(self):
        assert numerical_rank(np.array([])) == 0
        assert numerical_rank(np.zeros(3)) == 0

    def test_threshold_relative_to_largest(self):
        assert numerical_rank(np.array([3.0, 1e-11, 2e-12])) == 2
        assert numerical_rank(np.array([1.0, 1e-12])) == 1
        assert numerical_rank(np.array([1e-20, 1e-21])) == 2

    def test_matches_polar_rank(self):
        t = np.diag([2.0, 0.0, 1.0])
        assert numerical_rank(singular_values(t)) == polar_decompose(t).rank == 2
