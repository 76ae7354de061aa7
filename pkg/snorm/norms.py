"""
Symmetric norming (s.n.) functions and the operator norms built on them.

An s.n. function is evaluated on the canonical nonincreasing nonnegative
representative of a spectrum (``SpectrumVector``); operator norms are the
s.n. function applied to s-numbers.

Families (``NormFamily.tag``):

========== ===================================== ==========================
tag        value on canonical xi                 JSON ``family``
========== ===================================== ==========================
KYFAN      sum_{j<=k} xi_j                       "kyfan"
WKYFAN     sum_{j<=k} pi_j xi_j                  "wkyfan"
PSINGULAR  (sum_{j<=k} xi_j^p)^(1/p)             "psingular"
WL1        sum_j pi_j xi_j (pi a PiWeight)       "wl1"
MIN        xi_1                                  "min"
MAX        sum_j xi_j                            "max"
DUAL       adjoint of the inner family           "dual"
========== ===================================== ==========================

All families except PSINGULAR (and duals of it) are linear on the
nonincreasing cone: ``Phi(xi) = sum_j w_j xi_j`` with the weights returned
by ``NormFamily.cone_weights``. That linearity is what makes the
prefix-ratio adjoint formula in ``snorm.duality`` exact.

Exact arithmetic is preserved: Fraction inputs with Fraction weights give
Fraction results; floats give floats.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from snorm.exceptions import (
    InvalidNormFamilyError,
    PreconditionError,
    UnsupportedFamilyError,
    UnsupportedForModelError,
)
from snorm.rationals import as_fraction, format_fraction
from snorm.sn_ideal import PiWeight
from snorm.spectra.kernels import Matrix
from snorm.spectra.models import DiagonalModel
from snorm.spectra.snumbers import s_numbers_matrix, s_numbers_model

logger = logging.getLogger(__name__)

Value = Fraction | float


# ---------------------------------------------------------------------------
# Spectrum vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumVector:
    """Finitely supported nonincreasing nonnegative sequence."""

    entries: tuple[Value, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        if any(x < 0 for x in entries):
            raise PreconditionError("SpectrumVector entries must be >= 0; use from_raw to canonicalize")
        if any(b > a for a, b in zip(entries, entries[1:])):
            raise PreconditionError("SpectrumVector entries must be nonincreasing; use from_raw to canonicalize")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_raw(cls, values: Iterable[Real]) -> SpectrumVector:
        """Canonicalize: absolute values sorted descending."""
        return cls(tuple(sorted((abs(x) for x in values), reverse=True)))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j: int) -> Value:
        return self.entries[j]

    @property
    def support(self) -> int:
        """Number of nonzero entries."""
        return sum(1 for x in self.entries if x != 0)

    def padded(self, n: int) -> tuple[Value, ...]:
        """First *n* entries, zero-filled."""
        head = self.entries[:n]
        return head + (0,) * (n - len(head))

    def as_array(self, n: int | None = None) -> npt.NDArray[np.float64]:
        values = self.entries if n is None else self.padded(n)
        return np.array([float(x) for x in values], dtype=np.float64)


# ---------------------------------------------------------------------------
# Norm families
# ---------------------------------------------------------------------------

class FamilyTag(str, Enum):
    KYFAN = "kyfan"
    WKYFAN = "wkyfan"
    PSINGULAR = "psingular"
    WL1 = "wl1"
    MIN = "min"
    MAX = "max"
    DUAL = "dual"


_LINEAR_TAGS = {FamilyTag.KYFAN, FamilyTag.WKYFAN, FamilyTag.WL1, FamilyTag.MIN, FamilyTag.MAX}
_MODEL_TAGS = {FamilyTag.KYFAN, FamilyTag.WKYFAN, FamilyTag.PSINGULAR, FamilyTag.MIN}


@dataclass(frozen=True)
class NormFamily:
    """One of the built-in s.n. function families with its parameters.

    Build through the classmethod constructors, which validate:
    ``k >= 1``, ``p >= 1``, weights positive, nonincreasing, ``pi_1 = 1``.
    """

    tag: FamilyTag
    k: int | None = None
    p: float | None = None
    weights: tuple[Fraction, ...] = field(default_factory=tuple)
    pi: PiWeight | None = None
    inner: NormFamily | None = None

    # -- Constructors ---------------------------------------------------------

    @staticmethod
    def _check_k(k: int) -> int:
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise InvalidNormFamilyError(f"k must be an integer >= 1, got {k!r}")
        return k

    @classmethod
    def kyfan(cls, k: int) -> NormFamily:
        return cls(FamilyTag.KYFAN, k=cls._check_k(k))

    @classmethod
    def weighted_kyfan(cls, pi: Sequence[object], k: int) -> NormFamily:
        k = cls._check_k(k)
        weights = tuple(as_fraction(x) for x in pi)
        if len(weights) < k:
            raise InvalidNormFamilyError(f"Weighted Ky Fan needs k={k} weights, got {len(weights)}")
        weights = weights[:k]
        if weights[0] != 1:
            raise InvalidNormFamilyError(f"Weights must start with pi_1 = 1, got {weights[0]}")
        if any(w <= 0 for w in weights):
            raise InvalidNormFamilyError("Weights must be positive")
        if any(b > a for a, b in zip(weights, weights[1:])):
            raise InvalidNormFamilyError(
                f"Weights must be nonincreasing, got ({', '.join(str(w) for w in weights)})"
            )
        return cls(FamilyTag.WKYFAN, k=k, weights=weights)

    @classmethod
    def psingular(cls, p: object, k: int) -> NormFamily:
        k = cls._check_k(k)
        p_value = float(p)  # type: ignore[arg-type]
        if not math.isfinite(p_value) or p_value < 1:
            raise InvalidNormFamilyError(f"p must be a finite number >= 1, got {p!r}")
        return cls(FamilyTag.PSINGULAR, k=k, p=p_value)

    @classmethod
    def weighted_l1(cls, pi: PiWeight | None = None) -> NormFamily:
        return cls(FamilyTag.WL1, pi=pi or PiWeight.default())

    @classmethod
    def minimal(cls) -> NormFamily:
        return cls(FamilyTag.MIN)

    @classmethod
    def maximal(cls) -> NormFamily:
        return cls(FamilyTag.MAX)

    @classmethod
    def dual(cls, of: NormFamily) -> NormFamily:
        """Adjoint family; ``dual(dual(phi))`` is ``phi``."""
        if of.tag is FamilyTag.DUAL:
            assert of.inner is not None
            return of.inner
        return cls(FamilyTag.DUAL, inner=of)

    # -- Properties -----------------------------------------------------------

    @property
    def is_linear_on_cone(self) -> bool:
        return self.tag in _LINEAR_TAGS

    @property
    def supports_models(self) -> bool:
        """Depends on finitely many s-numbers, so it is defined on any model."""
        return self.tag in _MODEL_TAGS

    def cone_weights(self, n: int) -> list[Fraction]:
        """w_1..w_n with Phi(xi) = sum_j w_j xi_j on the nonincreasing cone."""
        if self.tag is FamilyTag.KYFAN:
            assert self.k is not None
            return [Fraction(1) if j < self.k else Fraction(0) for j in range(n)]
        if self.tag is FamilyTag.WKYFAN:
            return [self.weights[j] if j < len(self.weights) else Fraction(0) for j in range(n)]
        if self.tag is FamilyTag.WL1:
            assert self.pi is not None
            return self.pi.weights(n)
        if self.tag is FamilyTag.MIN:
            return [Fraction(1) if j == 0 else Fraction(0) for j in range(n)]
        if self.tag is FamilyTag.MAX:
            return [Fraction(1)] * n
        raise UnsupportedFamilyError(f"{self.label} is not linear on the nonincreasing cone")

    @property
    def label(self) -> str:
        if self.tag is FamilyTag.KYFAN:
            return f"KyFan({self.k})"
        if self.tag is FamilyTag.WKYFAN:
            return f"WeightedKyFan(({', '.join(str(w) for w in self.weights)}), {self.k})"
        if self.tag is FamilyTag.PSINGULAR:
            return f"PSingular({self.p:g}, {self.k})"
        if self.tag is FamilyTag.WL1:
            assert self.pi is not None
            return f"WeightedL1({self.pi.describe()})"
        if self.tag is FamilyTag.MIN:
            return "Minimal"
        if self.tag is FamilyTag.MAX:
            return "Maximal"
        assert self.inner is not None
        return f"Dual({self.inner.label})"

    def to_dict(self) -> dict[str, object]:
        """JSON form, inverse of ``snorm.config.NormSpec``."""
        out: dict[str, object] = {"family": self.tag.value}
        if self.k is not None:
            out["k"] = self.k
        if self.p is not None:
            out["p"] = self.p
        if self.weights:
            out["pi"] = [format_fraction(w) for w in self.weights]
        if self.pi is not None:
            out["pi_rule"] = self.pi.to_dict()
        if self.inner is not None:
            out["of"] = self.inner.to_dict()
        return out


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _canonical(xi: SpectrumVector | Iterable[Real]) -> SpectrumVector:
    return xi if isinstance(xi, SpectrumVector) else SpectrumVector.from_raw(xi)


def _weighted_sum(weights: Sequence[Value], entries: Sequence[Value]) -> Value:
    return sum((w * x for w, x in zip(weights, entries)), Fraction(0))


def sn_eval(phi: NormFamily, xi: SpectrumVector | Iterable[Real]) -> Value:
    """Evaluate the s.n. function *phi* at the canonical form of *xi*."""
    xi = _canonical(xi)
    entries = xi.entries
    if phi.tag is FamilyTag.KYFAN:
        assert phi.k is not None
        return sum(entries[: phi.k], Fraction(0))
    if phi.tag is FamilyTag.WKYFAN:
        return _weighted_sum(phi.weights, entries)
    if phi.tag is FamilyTag.PSINGULAR:
        assert phi.p is not None and phi.k is not None
        top = entries[: phi.k]
        if phi.p == 1:
            return sum(top, Fraction(0))
        return float(sum(float(x) ** phi.p for x in top) ** (1.0 / phi.p))
    if phi.tag is FamilyTag.WL1:
        return _weighted_sum(phi.cone_weights(len(entries)), entries)
    if phi.tag is FamilyTag.MIN:
        return entries[0] if entries else Fraction(0)
    if phi.tag is FamilyTag.MAX:
        return sum(entries, Fraction(0))

    from snorm.duality import adjoint_value

    assert phi.inner is not None
    return adjoint_value(phi.inner, xi)


def sn_eval_batch(phi: NormFamily, x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Evaluate *phi* on every row of *x* (rows nonincreasing, nonnegative)."""
    n = x.shape[-1]
    if phi.is_linear_on_cone:
        w = np.array([float(v) for v in phi.cone_weights(n)])
        return x @ w
    if phi.tag is FamilyTag.PSINGULAR:
        assert phi.p is not None and phi.k is not None
        top = x[..., : phi.k]
        if phi.p == 1:
            return top.sum(axis=-1)
        return np.power(np.power(top, phi.p).sum(axis=-1), 1.0 / phi.p)
    assert phi.inner is not None
    if phi.inner.is_linear_on_cone:
        # adjoint of a cone-linear family: max_m H_m / W_m
        w_cum = np.cumsum([float(v) for v in phi.inner.cone_weights(n)])
        h_cum = np.cumsum(x, axis=-1)
        return np.max(h_cum / w_cum, axis=-1)
    raise UnsupportedFamilyError(f"No batch evaluation for {phi.label}")


def op_norm(phi: NormFamily, t: Matrix | DiagonalModel) -> Value:
    """Operator norm ``Phi(s(T))``.

    For models only families reading finitely many s-numbers are defined,
    plus any family on finite-rank models.

    Raises:
        UnsupportedForModelError: For WL1/MAX/DUAL on a model whose
            s-numbers are not eventually zero.
    """
    if isinstance(t, DiagonalModel):
        snumbers = s_numbers_model(t)
        if t.is_finite_rank:
            return sn_eval(phi, SpectrumVector(tuple(snumbers.head)))
        if not phi.supports_models:
            raise UnsupportedForModelError(
                f"{phi.label} reads infinitely many nonzero s-numbers of {t.describe()}"
            )
        assert phi.k is not None or phi.tag is FamilyTag.MIN
        count = 1 if phi.tag is FamilyTag.MIN else phi.k
        return sn_eval(phi, SpectrumVector(tuple(snumbers.values(count))))
    snumbers = s_numbers_matrix(t)
    return sn_eval(phi, SpectrumVector(tuple(snumbers.head)))


# ---------------------------------------------------------------------------
# Axiom checks
# ---------------------------------------------------------------------------

@dataclass
class AxiomViolation:
    axiom: str
    witness: tuple[object, ...]
    detail: str


@dataclass
class AxiomReport:
    """Outcome of sample-based s.n. axiom checks for one family."""

    family: str
    checks_run: int = 0
    violations: list[AxiomViolation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> AxiomViolation | None:
        return self.violations[0] if self.violations else None


def _slack(*values: Value) -> float:
    return 1e-12 * max(1.0, *(abs(float(v)) for v in values))


def check_sn_axioms(
    phi: NormFamily,
    samples: Sequence[tuple[SpectrumVector, SpectrumVector]],
) -> AxiomReport:
    """Check s.n. function axioms on sample pairs.

    Checked: normalization Phi(e_1) = 1, Phi(0) = 0, positivity,
    definiteness, homogeneity, triangle inequality (on the sorted and the
    anti-sorted sum), permutation/sign symmetry and the sandwich
    ``xi_1 <= Phi(xi) <= sum(xi)``.
    """
    report = AxiomReport(phi.label)

    def check(axiom: str, ok: bool, witness: tuple[object, ...], detail: str) -> None:
        report.checks_run += 1
        if not ok:
            report.violations.append(AxiomViolation(axiom, witness, detail))

    e1 = sn_eval(phi, SpectrumVector((1,)))
    check("normalization", abs(float(e1) - 1.0) <= _slack(1), (1,), f"Phi(e1) = {e1}")
    zero = sn_eval(phi, SpectrumVector(()))
    check("definiteness", zero == 0, (), f"Phi(0) = {zero}")

    for xi, eta in samples:
        phi_xi = sn_eval(phi, xi)
        phi_eta = sn_eval(phi, eta)
        witness = (xi.entries, eta.entries)

        check("positivity", phi_xi >= 0, witness, f"Phi(xi) = {phi_xi}")
        if xi.support:
            check("definiteness", phi_xi > 0, witness, f"Phi(xi) = {phi_xi} for nonzero xi")

        scaled = sn_eval(phi, SpectrumVector(tuple(x * 2.5 for x in xi.entries)))
        check(
            "homogeneity",
            abs(float(scaled) - 2.5 * float(phi_xi)) <= _slack(scaled),
            witness,
            f"Phi(2.5 xi) = {scaled}, 2.5 Phi(xi) = {2.5 * float(phi_xi)}",
        )

        n = max(len(xi), len(eta))
        a, b = xi.padded(n), eta.padded(n)
        for name, other in (("sorted", b), ("anti-sorted", b[::-1])):
            total = sn_eval(phi, SpectrumVector.from_raw([x + y for x, y in zip(a, other)]))
            check(
                "triangle",
                float(total) <= float(phi_xi) + float(phi_eta) + _slack(phi_xi, phi_eta),
                witness,
                f"Phi(xi + eta[{name}]) = {total} > {phi_xi} + {phi_eta}",
            )

        shuffled = [(-x if i % 2 else x) for i, x in enumerate(reversed(xi.entries))]
        sym = sn_eval(phi, SpectrumVector.from_raw(shuffled))
        check("symmetry", abs(float(sym) - float(phi_xi)) <= _slack(phi_xi), witness, f"{sym} != {phi_xi}")

        lower = xi.entries[0] if xi.entries else 0
        upper = sum(xi.entries, 0)
        check(
            "sandwich",
            float(lower) - _slack(lower) <= float(phi_xi) <= float(upper) + _slack(upper),
            witness,
            f"{lower} <= {phi_xi} <= {upper} fails",
        )

    if report.violations:
        logger.warning("%s: %d axiom violation(s), first: %s", phi.label, len(report.violations), report.violations[0])
    return report


# ---------------------------------------------------------------------------
# Equivalence to the maximal function
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceReport:
    """r_n = n / Phi(1^n) for n = 1..n_max.

    ``trend`` is one of "constant", "increasing", "nondecreasing",
    "decreasing", "nonincreasing", "mixed". ``analytic_sup`` is the exact
    supremum when known (1/L for weighted-l1, 1 for the maximal function);
    ``bounded`` is False when the ratios are known to diverge.
    """

    family: str
    ratios: list[Value]
    trend: str
    analytic_sup: Value | None
    bounded: bool | None


def _trend(values: Sequence[Value]) -> str:
    pairs = list(zip(values, values[1:]))
    if all(b == a for a, b in pairs):
        return "constant"
    if all(b > a for a, b in pairs):
        return "increasing"
    if all(b >= a for a, b in pairs):
        return "nondecreasing"
    if all(b < a for a, b in pairs):
        return "decreasing"
    if all(b <= a for a, b in pairs):
        return "nonincreasing"
    return "mixed"


def equivalence_ratio(phi: NormFamily, n_max: int) -> EquivalenceReport:
    """Ratios n / Phi(1^n), their monotonicity and the analytic supremum."""
    if n_max < 1:
        raise PreconditionError(f"n_max must be >= 1, got {n_max}")
    ratios: list[Value] = []
    for n in range(1, n_max + 1):
        value = sn_eval(phi, SpectrumVector((Fraction(1),) * n))
        ratios.append(Fraction(n) / value if isinstance(value, Fraction) else n / float(value))

    analytic_sup: Value | None = None
    bounded: bool | None = None
    if phi.tag is FamilyTag.WL1:
        assert phi.pi is not None
        analytic_sup, bounded = 1 / phi.pi.limit_value, True
    elif phi.tag is FamilyTag.MAX:
        analytic_sup, bounded = Fraction(1), True
    elif phi.tag in (FamilyTag.MIN, FamilyTag.KYFAN, FamilyTag.WKYFAN, FamilyTag.PSINGULAR):
        bounded = False
    return EquivalenceReport(phi.label, ratios, _trend(ratios), analytic_sup, bounded)
