"""
Dense spectral kernels for finite real matrices.

Eigenvalues come from a cyclic Jacobi iteration with a sweep cap of 100
and an off-diagonal stopping threshold of ``1e-14 * ||A||_F``. Singular
values, |T| and polar factors come from a one-sided Jacobi SVD that
rotates the columns of T itself, so small singular values keep their
relative accuracy and the left vectors stay orthonormal. Matrices are
small (dim <= 64) and real.

Ordering convention: eigenvalues and singular values are returned
nonincreasing, ties broken by original index (stable sort), so outputs
are deterministic.

Key functions:
- sym_eig(A) -> Eigh(values, vectors)
- svd(T) -> SVD(u, s, v) with T = u[:, :p] @ diag(s) @ v[:, :p].T
- polar_decompose(T) -> PolarFactors(u, abs_t)
- courant_fischer_value(A, k) -> float
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from snorm.exceptions import BadRankError, NoConvergenceError, NotSymmetricError, ParseError

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.float64]

MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-14
SYMMETRY_RTOL = 1e-12
RANK_RTOL = 1e-12
ORTHOGONALITY_RTOL = float(np.finfo(np.float64).eps)


class Eigh(NamedTuple):
    values: npt.NDArray[np.float64]
    vectors: Matrix


class SVD(NamedTuple):
    u: Matrix
    s: npt.NDArray[np.float64]
    v: Matrix


@dataclass(frozen=True)
class PolarFactors:
    """Polar decomposition ``T = u @ abs_t``.

    Attributes:
        u: Partial isometry whose initial space is the closure of range(|T|).
        abs_t: The positive semidefinite factor |T| = (T^T T)^(1/2).
        rank: Numerical rank used to build ``u``.
    """

    u: Matrix
    abs_t: Matrix
    rank: int


def as_matrix(data: object) -> Matrix:
    """Validate *data* as a finite 2-D float64 matrix.

    Raises:
        ParseError: For non-2-D input or NaN/Inf entries.
    """
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ParseError(f"Expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParseError("Matrix entries must be finite (no NaN/Inf)")
    return arr


# ---------------------------------------------------------------------------
# Symmetric eigen-solver
# ---------------------------------------------------------------------------

def _rotation(a_pp: float, a_qq: float, a_pq: float) -> tuple[float, float]:
    """Cosine and sine of the Jacobi rotation annihilating ``a_pq``."""
    theta = (a_qq - a_pp) / (2.0 * a_pq)
    if abs(theta) > 1e150:
        t = 1.0 / (2.0 * theta)
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    return c, t * c


def _off_norm(a: Matrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def sym_eig(a: Matrix, max_sweeps: int = MAX_SWEEPS) -> Eigh:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi.

    Args:
        a: Square matrix, symmetric to ``1e-12 * ||a||_F``.
        max_sweeps: Sweep cap.

    Returns:
        ``Eigh(values, vectors)`` with values nonincreasing (stable ties)
        and orthonormal eigenvector columns.

    Raises:
        NotSymmetricError: If *a* is not square or not symmetric.
        NoConvergenceError: If the sweep cap is exceeded.
    """
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise NotSymmetricError(f"sym_eig requires a square matrix, got {a.shape}")
    norm = float(np.linalg.norm(a))
    if float(np.linalg.norm(a - a.T)) > SYMMETRY_RTOL * norm:
        raise NotSymmetricError(
            f"Matrix is not symmetric: ||A - A^T||_F = {np.linalg.norm(a - a.T):.3e}"
        )

    work = 0.5 * (a + a.T)
    vectors = np.eye(n)
    threshold = OFF_DIAGONAL_RTOL * norm

    for sweep in range(max_sweeps + 1):
        if _off_norm(work) <= threshold:
            logger.debug("Jacobi converged after %d sweep(s) (n=%d)", sweep, n)
            break
        if sweep == max_sweeps:
            raise NoConvergenceError(
                f"Jacobi did not converge within {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(work):.3e}, threshold {threshold:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                a_pq = work[p, q]
                if a_pq == 0.0:
                    continue
                c, s = _rotation(work[p, p], work[q, q], a_pq)
                col_p = work[:, p].copy()
                col_q = work[:, q].copy()
                work[:, p] = c * col_p - s * col_q
                work[:, q] = s * col_p + c * col_q
                row_p = work[p, :].copy()
                row_q = work[q, :].copy()
                work[p, :] = c * row_p - s * row_q
                work[q, :] = s * row_p + c * row_q
                work[p, q] = work[q, p] = 0.0
                vec_p = vectors[:, p].copy()
                vec_q = vectors[:, q].copy()
                vectors[:, p] = c * vec_p - s * vec_q
                vectors[:, q] = s * vec_p + c * vec_q

    values = np.diag(work).copy()
    order = np.argsort(-values, kind="stable")
    return Eigh(values[order], vectors[:, order])


# ---------------------------------------------------------------------------
# Singular values and polar factors
# ---------------------------------------------------------------------------

def _complete_basis(columns: Matrix, dim: int) -> Matrix:
    """Extend orthonormal *columns* to an orthonormal basis of R^dim."""
    r = columns.shape[1]
    if r == dim:
        return columns
    q, _ = np.linalg.qr(np.hstack([columns, np.eye(dim)]))
    return np.hstack([columns, q[:, r:dim]])


def numerical_rank(s: npt.NDArray[np.float64]) -> int:
    """Number of singular values above ``1e-12 * s_max``."""
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s > RANK_RTOL * s[0]))


def _orthogonalize_columns(a: Matrix, max_sweeps: int = MAX_SWEEPS) -> tuple[Matrix, Matrix]:
    """One-sided Jacobi: rotate column pairs of *a* until all are orthogonal.

    Returns ``(w, v)`` with ``a = w @ v.T`` and ``v`` orthogonal. A pair is
    rotated while ``|<w_p, w_q>| > rows * eps * ||w_p|| ||w_q||``; columns
    below ``1e-14 * ||a||_F`` are numerically zero and left alone.

    Raises:
        NoConvergenceError: If the sweep cap is exceeded.
    """
    rows, cols = a.shape
    w = a.copy()
    v = np.eye(cols)
    tol = rows * ORTHOGONALITY_RTOL
    negligible = OFF_DIAGONAL_RTOL * float(np.linalg.norm(a))

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                col_p = w[:, p].copy()
                col_q = w[:, q].copy()
                norm_p = float(np.linalg.norm(col_p))
                norm_q = float(np.linalg.norm(col_q))
                if norm_p <= negligible or norm_q <= negligible:
                    continue
                gamma = float(col_p @ col_q)
                if abs(gamma) <= tol * norm_p * norm_q:
                    continue
                # same rotation that annihilates the (p, q) entry of w^T w
                c, s = _rotation(norm_p * norm_p, norm_q * norm_q, gamma)
                w[:, p] = c * col_p - s * col_q
                w[:, q] = s * col_p + c * col_q
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
                rotated = True
        if not rotated:
            logger.debug("One-sided Jacobi converged after %d sweep(s) (%dx%d)", sweep, rows, cols)
            return w, v
    raise NoConvergenceError(f"One-sided Jacobi did not converge within {max_sweeps} sweeps ({rows}x{cols})")


def svd(t: Matrix) -> SVD:
    """Singular value decomposition by one-sided Jacobi on T.

    Wide matrices are handled through their transpose. The entries are
    scaled by ``max |t_ij|`` before rotating. Singular values are the
    column norms of the rotated matrix, left singular vectors its
    normalized columns above the rank threshold ``1e-12 * s_max``,
    completed to an orthonormal basis below it.

    Returns:
        ``SVD(u, s, v)`` with ``u`` (m x m), ``s`` of length ``min(m, n)``
        nonincreasing, ``v`` (n x n).
    """
    t = as_matrix(t)
    m, n = t.shape
    if m < n:
        u, s, v = svd(t.T)
        return SVD(v, s, u)

    scale = float(np.max(np.abs(t)))
    if scale == 0.0:
        return SVD(np.eye(m), np.zeros(n), np.eye(n))
    w, v = _orthogonalize_columns(t / scale)
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, w, v = sigma[order], w[:, order], v[:, order]

    rank = numerical_rank(sigma)
    u = _complete_basis(w[:, :rank] / sigma[:rank], m)
    return SVD(u, sigma * scale, v)


def singular_values(t: Matrix) -> npt.NDArray[np.float64]:
    """Nonincreasing singular values of *t* (length ``min(m, n)``)."""
    return svd(t).s


def polar_decompose(t: Matrix) -> PolarFactors:
    """Polar decomposition ``T = U |T|`` of a square matrix.

    ``|T| = V diag(s) V^T`` and ``U = U_r V_r^T`` restricted to the
    numerical rank, so ``U`` is a partial isometry (not unitary when T is
    singular).
    """
    t = as_matrix(t)
    if t.shape[0] != t.shape[1]:
        raise ParseError(f"polar_decompose requires a square matrix, got {t.shape}")
    u, s, v = svd(t)
    rank = numerical_rank(s)
    abs_t = (v * s) @ v.T
    abs_t = 0.5 * (abs_t + abs_t.T)
    partial_isometry = u[:, :rank] @ v[:, :rank].T
    return PolarFactors(partial_isometry, abs_t, rank)


def absolute_value(t: Matrix) -> Matrix:
    """|T| = (T^T T)^(1/2)."""
    _, s, v = svd(t)
    n = v.shape[0]
    full = np.zeros(n)
    full[: s.size] = s
    abs_t = (v * full) @ v.T
    return 0.5 * (abs_t + abs_t.T)


# ---------------------------------------------------------------------------
# Courant-Fischer
# ---------------------------------------------------------------------------

def courant_fischer_value(a: Matrix, k: int) -> float:
    """Max of ``<Ax, x>`` over unit x orthogonal to the top-k eigenvectors.

    Computed as the largest eigenvalue of the compression of *a* to the
    orthocomplement of the span of its top-k eigenvectors; for positive
    semidefinite *a* this equals the (k+1)-th eigenvalue.

    Raises:
        BadRankError: If ``k < 0`` or ``k >= dim``.
    """
    a = as_matrix(a)
    dim = a.shape[0]
    if k < 0 or k >= dim:
        raise BadRankError(f"Courant-Fischer rank k={k} outside 0 <= k < {dim}")
    if k == 0:
        return float(sym_eig(a).values[0])
    top = sym_eig(a).vectors[:, :k]
    complement = _complete_basis(top, dim)[:, k:]
    compressed = complement.T @ a @ complement
    return float(sym_eig(0.5 * (compressed + compressed.T)).values[0])
