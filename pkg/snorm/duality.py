"""
Adjoint s.n. functions, trace pairing and trace-duality certificates.

The adjoint of an s.n. function Phi is

    Phi*(eta) = max { <eta, xi> : xi nonincreasing >= 0, Phi(xi) = 1 }.

Every nonincreasing xi is a nonnegative combination of prefix indicators
``1^m = (1, ..., 1, 0, ...)``, so the feasible set is parameterized by
coefficients ``c_m >= 0`` with ``xi = sum_m c_m 1^m``.

Two evaluation paths:

- **closed form** for families linear on the cone (Ky Fan, weighted Ky
  Fan, weighted-l1, minimal, maximal): both objective and constraint are
  linear in ``c``, so the maximum sits on a ray ``1^m`` and

      Phi*(eta) = max_{1 <= m <= N} H_m / W_m,
      H_m = sum_{j<=m} eta_j,  W_m = Phi(1^m).

  For ``Dual(Phi)`` the adjoint is Phi itself.
- **numeric** for everything else ((p,k)-singular): multi-start
  coordinate ascent over ``c`` with ray renormalization to Phi = 1,
  32 restarts seeded 1..32.

A certificate for ``||T||_{Phi*}`` aligns a maximizer xi* with the SVD
``T = U diag(s) V^T``: ``K = V diag(xi*) U^T`` has ``||K||_Phi = Phi(xi*) = 1``
and ``Tr(TK) = sum_j s_j xi*_j = Phi*(s(T))``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from snorm.exceptions import (
    NoConvergenceError,
    PreconditionError,
    ShapeMismatchError,
    UnsupportedFamilyError,
    ZeroOperatorError,
)
from snorm.norms import FamilyTag, NormFamily, SpectrumVector, Value, sn_eval, sn_eval_batch
from snorm.spectra.kernels import Matrix, as_matrix, svd

logger = logging.getLogger(__name__)

RESTART_SEEDS: tuple[int, ...] = tuple(range(1, 33))
SOLVER_TOL = 1e-9
AGREEMENT_TOL = 1e-7
MIN_AGREEING_RESTARTS = 4
MAX_SWEEPS = 200

_GRID = np.linspace(0.0, 1.0, 17)
_REFINEMENTS = 6


@dataclass
class AdjointResult:
    """Value of Phi*(eta) with the maximizer that achieves it.

    Attributes:
        value: Phi*(eta).
        xi_star: Maximizer on the nonincreasing cone with Phi(xi_star) = 1.
        method: "closed-form", "bidual", "holder" or "numeric".
        argmax_m: The maximizing prefix length for the closed form.
    """

    value: Value
    xi_star: tuple[Value, ...]
    method: str
    argmax_m: int | None = None


# ---------------------------------------------------------------------------
# Closed form
# ---------------------------------------------------------------------------

def _canonical(eta: SpectrumVector | Iterable[Real]) -> SpectrumVector:
    return eta if isinstance(eta, SpectrumVector) else SpectrumVector.from_raw(eta)


def _prefix_ratio(phi: NormFamily, eta: SpectrumVector) -> tuple[Value, int]:
    """max_m H_m / W_m over m = 1..support(eta), and the smallest argmax."""
    n = max(eta.support, 1)
    weights = phi.cone_weights(n)
    best: Value | None = None
    best_m = 1
    entries = eta.padded(n)
    h: Value = Fraction(0)
    w: Fraction = Fraction(0)
    for m in range(1, n + 1):
        h = h + entries[m - 1]
        w = w + weights[m - 1]
        ratio = h / w
        if best is None or ratio > best:
            best, best_m = ratio, m
    assert best is not None
    return best, best_m


def adjoint_closed_form(phi: NormFamily, eta: SpectrumVector | Iterable[Real]) -> Value:
    """Phi*(eta) by the prefix-ratio formula (or biduality for ``Dual``).

    Raises:
        UnsupportedFamilyError: For (p,k)-singular norms.
    """
    eta = _canonical(eta)
    if phi.tag is FamilyTag.DUAL:
        assert phi.inner is not None
        return sn_eval(phi.inner, eta)
    if not phi.is_linear_on_cone:
        raise UnsupportedFamilyError(f"No closed-form adjoint for {phi.label}")
    value, _ = _prefix_ratio(phi, eta)
    return value


# ---------------------------------------------------------------------------
# Numeric maximizer
# ---------------------------------------------------------------------------

def _xi_from_coefficients(c: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """xi_i = sum_{m >= i} c_m along the last axis."""
    return np.flip(np.cumsum(np.flip(c, axis=-1), axis=-1), axis=-1)


def _ratios(phi: NormFamily, h: npt.NDArray[np.float64], c: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    xi = _xi_from_coefficients(c)
    shape = xi.shape
    norms = sn_eval_batch(phi, xi.reshape(-1, shape[-1])).reshape(shape[:-1])
    objective = c @ h
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(norms > 0, objective / np.where(norms > 0, norms, 1.0), -np.inf)
    return out


def _line_search(
    phi: NormFamily,
    h: npt.NDArray[np.float64],
    start: npt.NDArray[np.float64],
    target: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    """Best point on the segments start -> target, row by row.

    The ratio is quasi-concave along each segment, so a grid search with
    repeated local refinement converges to the segment maximum; theta = 0
    (no move) is always a candidate.
    """
    rows = start.shape[0]
    lo = np.zeros(rows)
    hi = np.ones(rows)
    best_theta = np.zeros(rows)
    best_ratio = _ratios(phi, h, start)
    for _ in range(_REFINEMENTS):
        thetas = lo[:, None] + (hi - lo)[:, None] * _GRID[None, :]
        cand = start[:, None, :] + thetas[:, :, None] * (target - start)[:, None, :]
        ratios = _ratios(phi, h, cand)
        idx = np.argmax(ratios, axis=1)
        picked = ratios[np.arange(rows), idx]
        improve = picked > best_ratio
        best_ratio = np.where(improve, picked, best_ratio)
        best_theta = np.where(improve, thetas[np.arange(rows), idx], best_theta)
        step = (hi - lo) / (len(_GRID) - 1)
        lo = np.clip(best_theta - step, 0.0, 1.0)
        hi = np.clip(best_theta + step, 0.0, 1.0)
    return start + best_theta[:, None] * (target - start)


def _coordinate_ascent(
    phi: NormFamily,
    eta: npt.NDArray[np.float64],
    seeds: Sequence[int],
    tol: float,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Run all restarts together; returns (ratios, coefficients) per restart."""
    n = eta.size
    h = np.cumsum(eta)
    coeffs = np.vstack([np.random.default_rng(seed).random(n) + 1e-3 for seed in seeds])
    current = _ratios(phi, h, coeffs)

    for sweep in range(MAX_SWEEPS):
        previous = current
        for m in range(n):
            scale = coeffs.sum(axis=1)
            vertex = np.zeros_like(coeffs)
            vertex[:, m] = scale
            coeffs = _line_search(phi, h, coeffs, vertex)
            removed = coeffs.copy()
            removed[:, m] = 0.0
            coeffs = _line_search(phi, h, coeffs, removed)
        xi = _xi_from_coefficients(coeffs)
        coeffs = coeffs / sn_eval_batch(phi, xi)[:, None]
        current = _ratios(phi, h, coeffs)
        gain = float(np.max(current - previous))
        if gain <= tol * max(1.0, float(np.max(np.abs(current)))):
            logger.debug("Coordinate ascent for %s converged after %d sweep(s)", phi.label, sweep + 1)
            break
    return current, coeffs


def _numeric_argmax(
    phi: NormFamily,
    eta: SpectrumVector,
    support_bound: int,
    seeds: Sequence[int] = RESTART_SEEDS,
    tol: float = SOLVER_TOL,
) -> AdjointResult:
    if support_bound < max(eta.support, 1):
        raise PreconditionError(f"support_bound {support_bound} < support(eta) = {eta.support}")
    if phi.tag is FamilyTag.DUAL and not (phi.inner and phi.inner.is_linear_on_cone):
        raise UnsupportedFamilyError(f"No numeric adjoint for {phi.label}")
    vector = eta.as_array(support_bound)
    ratios, coeffs = _coordinate_ascent(phi, vector, seeds, tol)
    best_idx = int(np.argmax(ratios))
    best = float(ratios[best_idx])
    agreeing = int(np.sum(ratios >= best - AGREEMENT_TOL * max(1.0, abs(best))))
    if agreeing < min(MIN_AGREEING_RESTARTS, len(seeds)):
        raise NoConvergenceError(
            f"Adjoint of {phi.label} at {eta.entries}: only {agreeing} of {len(seeds)} "
            f"restarts reached the best value {best:.12g}"
        )
    xi = _xi_from_coefficients(coeffs[best_idx])
    return AdjointResult(best, tuple(float(x) for x in xi), "numeric")


def adjoint_eval_numeric(
    phi: NormFamily,
    eta: SpectrumVector | Iterable[Real],
    support_bound: int,
) -> float:
    """Phi*(eta) by multi-start coordinate ascent over prefix coefficients.

    Raises:
        PreconditionError: If ``support_bound < support(eta)``.
        NoConvergenceError: If fewer than 4 restarts agree on the best value.
    """
    return float(_numeric_argmax(phi, _canonical(eta), support_bound).value)


# ---------------------------------------------------------------------------
# Combined entry points
# ---------------------------------------------------------------------------

def adjoint_argmax(
    phi: NormFamily,
    eta: SpectrumVector | Iterable[Real],
    support_bound: int | None = None,
    *,
    numeric: bool = False,
) -> AdjointResult:
    """Phi*(eta) with a maximizer xi* of length *support_bound*."""
    eta = _canonical(eta)
    n = support_bound if support_bound is not None else max(len(eta), 1)

    if numeric or phi.tag is FamilyTag.PSINGULAR:
        return _numeric_argmax(phi, eta, n)

    if phi.tag is FamilyTag.DUAL:
        inner = phi.inner
        assert inner is not None
        value = sn_eval(inner, eta)
        if inner.is_linear_on_cone:
            return AdjointResult(value, tuple(inner.cone_weights(n)), "bidual")
        if inner.tag is FamilyTag.PSINGULAR:
            return AdjointResult(value, _holder_maximizer(inner, eta, n), "holder")
        raise UnsupportedFamilyError(f"No adjoint maximizer for {phi.label}")

    value, m = _prefix_ratio(phi, eta)
    w_m = sum(phi.cone_weights(m), Fraction(0))
    xi = tuple(Fraction(1) / w_m if j < m else Fraction(0) for j in range(n))
    return AdjointResult(value, xi, "closed-form", m)


def _holder_maximizer(phi: NormFamily, eta: SpectrumVector, n: int) -> tuple[float, ...]:
    """xi_j = (eta_j / ||eta_k||_p)^(p-1) on the top k, the Hölder equality case."""
    assert phi.p is not None and phi.k is not None
    top = eta.as_array(n)[: phi.k]
    norm = float(sn_eval(phi, eta))
    if phi.p == 1 or norm == 0:
        xi = np.zeros(n)
        xi[: phi.k] = 1.0 if norm else 0.0
        return tuple(float(x) for x in xi)
    xi = np.zeros(n)
    xi[: top.size] = (top / norm) ** (phi.p - 1)
    return tuple(float(x) for x in xi)


def adjoint_value(phi: NormFamily, eta: SpectrumVector | Iterable[Real]) -> Value:
    """Phi*(eta): closed form where available, numeric otherwise."""
    eta = _canonical(eta)
    if phi.tag is FamilyTag.PSINGULAR:
        return adjoint_eval_numeric(phi, eta, max(eta.support, 1))
    return adjoint_closed_form(phi, eta)


def holder_gap(phi: NormFamily, xi: SpectrumVector, eta: SpectrumVector) -> float:
    """Phi(xi) * Phi*(eta) - <eta, xi>; nonnegative by definition of Phi*."""
    n = max(len(xi), len(eta))
    pairing = sum(float(a) * float(b) for a, b in zip(xi.padded(n), eta.padded(n)))
    return float(sn_eval(phi, xi)) * float(adjoint_value(phi, eta)) - pairing


# ---------------------------------------------------------------------------
# Trace pairing and certificates
# ---------------------------------------------------------------------------

def trace_pairing(t: Matrix, k: Matrix) -> float:
    """|Tr(T K)|.

    Raises:
        ShapeMismatchError: If ``T K`` is not square.
    """
    t, k = as_matrix(t), as_matrix(k)
    if t.shape[1] != k.shape[0] or t.shape[0] != k.shape[1]:
        raise ShapeMismatchError(f"Cannot pair T {t.shape} with K {k.shape}")
    return abs(float(np.trace(t @ k)))


def phi_star_norm(t: Matrix, phi: NormFamily, *, numeric: bool = False) -> Value:
    """||T||_{Phi*} = Phi*(s(T))."""
    s = svd(t).s
    eta = SpectrumVector(tuple(float(x) for x in s))
    if numeric:
        return adjoint_eval_numeric(phi, eta, max(len(eta), 1))
    return adjoint_value(phi, eta)


@dataclass
class Certificate:
    """Trace-duality witness for ``||T||_{Phi*}``.

    Attributes:
        k: The finite-rank witness K = V diag(xi*) U^T.
        phi_norm_of_k: ||K||_Phi measured from the singular values of k;
            equal to 1 when the alignment is exact.
        pairing: |Tr(T K)|.
        dual_norm: Phi*(s(T)).
        xi_star: Singular values of K (aligned with those of T).
        attaining_vectors: Pairs (x_j, y_j = T x_j / ||T x_j||) for j in
            the support of xi*.
        method: How xi* was obtained.
    """

    k: Matrix
    phi_norm_of_k: Value
    pairing: float
    dual_norm: Value
    xi_star: tuple[Value, ...]
    method: str
    attaining_vectors: list[tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]] = field(default_factory=list)


def build_certificate(t: Matrix, phi: NormFamily) -> Certificate:
    """Build the aligned witness K with ||K||_Phi = 1 and Tr(TK) = ||T||_{Phi*}.

    Raises:
        ZeroOperatorError: If T = 0.
    """
    t = as_matrix(t)
    u, s, v = svd(t)
    if s.size == 0 or s[0] == 0.0:
        raise ZeroOperatorError("The zero operator has no norming certificate")
    p = s.size
    eta = SpectrumVector(tuple(float(x) for x in s))
    result = adjoint_argmax(phi, eta, p)
    xi = np.array([float(x) for x in result.xi_star])
    k = (v[:, :p] * xi) @ u[:, :p].T
    attaining = [
        (v[:, j].copy(), u[:, j].copy())
        for j in range(p)
        if result.xi_star[j] != 0 and s[j] > 0
    ]
    certificate = Certificate(
        k=k,
        phi_norm_of_k=sn_eval(phi, SpectrumVector.from_raw(svd(k).s)),
        pairing=trace_pairing(t, k),
        dual_norm=result.value,
        xi_star=result.xi_star,
        method=result.method,
        attaining_vectors=attaining,
    )
    logger.debug(
        "Certificate for %s: pairing %.12g, dual norm %.12g, ||K|| = %s",
        phi.label,
        certificate.pairing,
        float(certificate.dual_norm),
        certificate.phi_norm_of_k,
    )
    return certificate
