"""
Norm-attainment deciders for positive matrices and diagonal models.

For a positive operator A the characterization reduces [k]-norming to a
counting question: A attains ||A||_[k] exactly when each distinct value v
among s_1(A), ..., s_k(A) occurs there no more often than its eigenvalue
multiplicity. The weighted [pi,k] and (p,k) variants have the same
characterization for positive operators, so they delegate here.

Multiplicities on models are exact: the prefix count of v, plus infinity
when v equals a Constant tail value, plus one when v is hit exactly by a
converging tail. A limit that is only an accumulation point contributes
nothing.

Finite matrices always attain (their eigenframe is a witness). General
matrices go through |T| from the polar decomposition.

Key functions:
- is_norming_positive, is_k_norming, is_weighted_norming, is_pk_norming
- is_norming_general (any matrix, via |T|)
- attaining_set (eigenframe witness and its value)
- prop41_equivalences (the five statements about s_{m+1})
- an_witness (compression falsifying absolute norming)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np
import numpy.typing as npt

from snorm.exceptions import HypothesisViolatedError, PreconditionError, UnsupportedFamilyError
from snorm.norms import FamilyTag, NormFamily, op_norm
from snorm.spectra.kernels import Matrix, as_matrix, polar_decompose, svd, sym_eig
from snorm.spectra.models import CoordinateSelection, DiagonalModel
from snorm.spectra.snumbers import s_numbers_model

logger = logging.getLogger(__name__)

POSITIVITY_RTOL = 1e-10
ATTAINING_TOL = 1e-9


class Reason(str, Enum):
    TOP_K_ARE_EIGENVALUES = "TopKAreEigenvalues"
    MULTIPLICITY_DEFICIT = "MultiplicityDeficit"
    SUP_NOT_EIGENVALUE = "SupNotEigenvalue"
    FINITE_DIMENSIONAL = "FiniteDimensional"


@dataclass
class AttainmentVerdict:
    """Membership verdict with its reason and witness.

    Attributes:
        member: Whether the operator attains the norm.
        reason: Why.
        witness: Eigen-coordinate positions (models) or orthonormal
            witness vectors as matrix columns (matrices).
        family: The class decided, e.g. "N_[3]" or "N_[pi,2] via N_[2]".
        s_checked: The s-numbers that were checked.
        deficit_value: For failures, the s-number value that lacks
            multiplicity.
    """

    member: bool
    reason: Reason
    witness: list[int] | Matrix | None = None
    family: str = ""
    s_checked: tuple[object, ...] = field(default_factory=tuple)
    deficit_value: object | None = None


def eigenvalue_multiplicity(a: DiagonalModel, value: object) -> float | int:
    """Multiplicity of *value* as an eigenvalue of the model (``math.inf`` allowed)."""
    return a.multiplicity(value)


def _check_positive(a: Matrix) -> Matrix:
    a = as_matrix(a)
    norm = float(np.linalg.norm(a))
    if a.shape[0] != a.shape[1] or float(np.linalg.norm(a - a.T)) > 1e-12 * norm:
        raise PreconditionError("Positive checker needs a symmetric matrix; use is_norming_general")
    if sym_eig(a).values[-1] < -POSITIVITY_RTOL * norm:
        raise PreconditionError("Matrix is not positive semidefinite; use is_norming_general")
    return a


# ---------------------------------------------------------------------------
# Positive operators
# ---------------------------------------------------------------------------

def _k_norming_model(a: DiagonalModel, k: int, family: str) -> AttainmentVerdict:
    s = s_numbers_model(a).values(k)
    needed: dict[Fraction, int] = {}
    for value in s:
        needed[value] = needed.get(value, 0) + 1

    witness: list[int] = []
    for value, count in needed.items():
        multiplicity = a.multiplicity(value)
        if count > multiplicity:
            reason = (
                Reason.SUP_NOT_EIGENVALUE
                if value == s[0] and multiplicity == 0
                else Reason.MULTIPLICITY_DEFICIT
            )
            logger.debug(
                "%s fails %s: value %s needed %d time(s), multiplicity %s",
                a.describe(),
                family,
                value,
                count,
                multiplicity,
            )
            return AttainmentVerdict(False, reason, None, family, tuple(s), value)
        positions = a.positions_of(value, limit=count)
        assert positions is not None
        witness.extend(positions[:count])
    return AttainmentVerdict(True, Reason.TOP_K_ARE_EIGENVALUES, sorted(witness), family, tuple(s))


def _k_norming_matrix(a: Matrix, k: int, family: str) -> AttainmentVerdict:
    a = _check_positive(a)
    eig = sym_eig(a)
    r = min(k, a.shape[0])
    return AttainmentVerdict(
        True,
        Reason.FINITE_DIMENSIONAL,
        eig.vectors[:, :r].copy(),
        family,
        tuple(float(x) for x in eig.values[:r]),
    )


def is_k_norming(a: DiagonalModel | Matrix, k: int, *, family: str | None = None) -> AttainmentVerdict:
    """Decide A in N_[k] for a positive model or positive semidefinite matrix."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    label = family or f"N_[{k}]"
    if isinstance(a, DiagonalModel):
        return _k_norming_model(a, k, label)
    return _k_norming_matrix(a, k, label)


def is_norming_positive(a: DiagonalModel | Matrix) -> AttainmentVerdict:
    """Decide A in N: ||A|| = s_1(A) is an eigenvalue."""
    return is_k_norming(a, 1, family="N")


def is_weighted_norming(a: DiagonalModel | Matrix, pi: Sequence[object], k: int) -> AttainmentVerdict:
    """Decide A in N_[pi,k]; coincides with N_[k] for positive operators."""
    NormFamily.weighted_kyfan(pi, k)
    return is_k_norming(a, k, family=f"N_[pi,{k}] via N_[{k}]")


def is_pk_norming(a: DiagonalModel | Matrix, p: object, k: int) -> AttainmentVerdict:
    """Decide A in N_(p,k); coincides with N_[k] for positive operators."""
    NormFamily.psingular(p, k)
    return is_k_norming(a, k, family=f"N_({float(p):g},{k}) via N_[{k}]")  # type: ignore[arg-type]


def _rank_of(phi: NormFamily) -> int:
    if phi.tag is FamilyTag.MIN:
        return 1
    if phi.tag in (FamilyTag.KYFAN, FamilyTag.WKYFAN, FamilyTag.PSINGULAR):
        assert phi.k is not None
        return phi.k
    raise UnsupportedFamilyError(f"Attainment is decided for Ky Fan type families, not {phi.label}")


def is_norming_general(t: Matrix, phi: NormFamily) -> AttainmentVerdict:
    """Decide T in the attainment class of *phi* through |T|."""
    abs_t = polar_decompose(as_matrix(t)).abs_t
    k = _rank_of(phi)
    if phi.tag is FamilyTag.WKYFAN:
        return is_weighted_norming(abs_t, phi.weights, k)
    if phi.tag is FamilyTag.PSINGULAR:
        return is_pk_norming(abs_t, phi.p, k)
    return is_k_norming(abs_t, k)


# ---------------------------------------------------------------------------
# Attaining sets
# ---------------------------------------------------------------------------

@dataclass
class AttainingSet:
    """Orthonormal eigenframe of |T| and the norm value it produces."""

    vectors: Matrix
    value: float
    op_norm: float
    verified: bool


def attaining_set(t: Matrix, phi: NormFamily) -> AttainingSet:
    """Top-k eigenvectors of |T| (right singular vectors) and their value.

    The value is ``sum_j pi_j ||T x_j||`` for the Ky Fan families and
    ``(sum_j ||T x_j||^p)^(1/p)`` for (p,k); it equals the operator norm.
    When ``k > dim`` all ``dim`` vectors are returned.
    """
    t = as_matrix(t)
    if phi.tag not in (FamilyTag.KYFAN, FamilyTag.WKYFAN, FamilyTag.PSINGULAR):
        raise UnsupportedFamilyError(f"attaining_set supports Ky Fan type families, not {phi.label}")
    assert phi.k is not None
    _, _, v = svd(t)
    r = min(phi.k, v.shape[1])
    vectors = v[:, :r].copy()
    lengths: npt.NDArray[np.float64] = np.linalg.norm(t @ vectors, axis=0)
    if phi.tag is FamilyTag.WKYFAN:
        value = float(sum(float(w) * x for w, x in zip(phi.weights, lengths)))
    elif phi.tag is FamilyTag.PSINGULAR and phi.p != 1:
        assert phi.p is not None
        value = float(np.sum(lengths**phi.p) ** (1.0 / phi.p))
    else:
        value = float(np.sum(lengths))
    norm = float(op_norm(phi, t))
    verified = abs(value - norm) <= ATTAINING_TOL * max(1.0, norm)
    if not verified:
        logger.warning("Eigenframe value %.12g differs from %s = %.12g", value, phi.label, norm)
    return AttainingSet(vectors, value, norm, verified)


# ---------------------------------------------------------------------------
# The s_{m+1} equivalences
# ---------------------------------------------------------------------------

@dataclass
class Prop41Report:
    """The five statements about s_{m+1}, m the multiplicity of mu = s_1.

    1. s_{m+1}(A) is an eigenvalue of A.
    2. s_{m+1}(A) is an eigenvalue of A - mu P (mu-entries zeroed).
    3. A - mu P restricted to the complement of the mu-eigenspace is norming.
    4. A restricted to that complement is norming.
    5. A is [m+1]-norming.
    """

    mu: Fraction
    m: int
    s_next: Fraction
    statements: dict[int, bool]

    @property
    def all_agree(self) -> bool:
        return len(set(self.statements.values())) == 1


def prop41_equivalences(a: DiagonalModel) -> Prop41Report:
    """Evaluate the five equivalent statements on a model.

    Raises:
        HypothesisViolatedError: If mu = s_1(A) lies in the essential spectrum.
    """
    snumbers = s_numbers_model(a)
    mu = snumbers.value_at(1)
    if mu == a.alpha:
        raise HypothesisViolatedError(
            f"s_1 = {mu} of {a.describe()} lies in the essential spectrum {{{a.alpha}}}"
        )
    positions = a.positions_of(mu)
    assert positions is not None
    m = len(positions)
    s_next = snumbers.value_at(m + 1)

    zeroed = a.with_positions_zeroed(positions)
    off_eigenspace = CoordinateSelection.dropping(positions)
    statements = {
        1: a.multiplicity(s_next) >= 1,
        2: zeroed.multiplicity(s_next) >= 1,
        3: is_norming_positive(zeroed.select(off_eigenspace)).member,
        4: is_norming_positive(a.select(off_eigenspace)).member,
        5: is_k_norming(a, m + 1).member,
    }
    report = Prop41Report(mu, m, s_next, statements)
    if not report.all_agree:
        logger.warning("Equivalences disagree on %s: %s", a.describe(), statements)
    return report


# ---------------------------------------------------------------------------
# Absolute-norming falsification
# ---------------------------------------------------------------------------

@dataclass
class AnWitness:
    """A compression whose restriction is not [k]-norming."""

    selection: CoordinateSelection
    compressed: DiagonalModel
    verdict: AttainmentVerdict


def an_witness(a: DiagonalModel, k: int) -> AnWitness | None:
    """Compression falsifying A in AN_[k], or None when A has the aI+K+F form.

    Dropping the finite prefix leaves a tail converging from below,
    whose norm is a limit that is never an eigenvalue.
    """
    from snorm.classify import decompose_alpha_kf

    if decompose_alpha_kf(a).decomposable:
        return None
    selection = CoordinateSelection.dropping(range(1, len(a.prefix) + 1))
    compressed = a.select(selection)
    verdict = is_k_norming(compressed, k)
    if verdict.member:
        logger.warning("Candidate witness %s of %s is norming", selection.describe(), a.describe())
    return AnWitness(selection, compressed, verdict)
