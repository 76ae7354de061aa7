"""
Weighted-l1 s.n. functions and the identity non-attainment construction.

This module works entirely in exact rational arithmetic. Its content is
strict inequalities and exact norm preservation, which floating point
would weaken to tolerance claims.

Objects:
- ``PiWeight``: a weight sequence pi in Pi (positive, nonincreasing,
  pi_1 = 1). The parametric rule ``pi_j = L + (1 - L) * c / (j + c - 1)``
  with ``0 < L < 1`` and ``c >= 1`` is strictly decreasing with limit
  ``L``; ``PiWeight.default()`` (L = 1/2, c = 1) gives
  ``pi_j = (1 + 1/j) / 2``. An explicit finite prefix continued by its
  last value is also accepted (used for hand-written weight lists).
- ``TraceClassDiag``: a finitely supported nonincreasing diagonal
  operator with its Phi_pi norm.

Key functions:
- phi_pi_eval(pi, xi): Phi_pi(xi) = sum_j pi_j xi_j.
- identity_sup_sequence(pi, n_max): r_n = n / sum_{j<=n} pi_j, limit 1/L.
- improvement_step(pi, K): replace entries M, M+1 (M the smallest index
  with s_M > s_{M+1}) by their pi-weighted average. Keeps Phi_pi(K) = 1
  and strictly increases the trace.
- non_attainment_demo(pi, iterations): iterate the step from diag(1,0,...)
  and certify the traces stay strictly below 1/L.
- phi_pi_star_norm_model(A, pi, horizon): the diagonal-reduced dual norm
  sup_m (sum_{j<=m} s_j(A)) / (sum_{j<=m} pi_j) with certified tail bounds.
- compact_phi_norming_check(A, pi, selections): attainment on a compact
  model and its compressions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Sequence

from snorm.exceptions import (
    HorizonTooSmallError,
    InvalidNormFamilyError,
    NoImprovableIndexError,
    PreconditionError,
)
from snorm.rationals import as_fraction, format_fraction
from snorm.spectra.models import CoordinateSelection, DiagonalModel
from snorm.spectra.snumbers import s_numbers_model

logger = logging.getLogger(__name__)

REDUCED_DUAL_LABEL = "diagonal-reduced dual norm"


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PiWeight:
    """A weight sequence in Pi.

    Exactly one of the two forms is set: the parametric rule
    (``limit``, ``c``) or an ``explicit`` prefix.
    """

    limit: Fraction | None = None
    c: Fraction | None = None
    explicit: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        if self.explicit is not None:
            if self.limit is not None or self.c is not None:
                raise InvalidNormFamilyError("PiWeight takes either a rule (L, c) or an explicit prefix, not both")
            values = tuple(as_fraction(x) for x in self.explicit)
            if not values:
                raise InvalidNormFamilyError("Explicit weight prefix must not be empty")
            if values[0] != 1:
                raise InvalidNormFamilyError(f"Weights must start with pi_1 = 1, got {values[0]}")
            if any(x <= 0 for x in values):
                raise InvalidNormFamilyError("Weights must be positive")
            if any(b > a for a, b in zip(values, values[1:])):
                raise InvalidNormFamilyError(f"Weights must be nonincreasing, got {[str(x) for x in values]}")
            object.__setattr__(self, "explicit", values)
            return

        if self.limit is None:
            raise InvalidNormFamilyError("PiWeight rule requires a limit L")
        limit = as_fraction(self.limit)
        c = as_fraction(1 if self.c is None else self.c)
        if not 0 < limit < 1:
            raise InvalidNormFamilyError(f"Weight limit L must lie in (0, 1), got {limit}")
        if c < 1:
            raise InvalidNormFamilyError(f"Weight rule constant c must be >= 1, got {c}")
        object.__setattr__(self, "limit", limit)
        object.__setattr__(self, "c", c)

    @classmethod
    def rule(cls, limit: object, c: object = 1) -> PiWeight:
        return cls(limit=as_fraction(limit), c=as_fraction(c))

    @classmethod
    def from_prefix(cls, values: Iterable[object]) -> PiWeight:
        return cls(explicit=tuple(as_fraction(x) for x in values))

    @classmethod
    def default(cls) -> PiWeight:
        """pi_j = (1 + 1/j) / 2."""
        return cls.rule(Fraction(1, 2), 1)

    @property
    def is_rule(self) -> bool:
        return self.explicit is None

    @property
    def limit_value(self) -> Fraction:
        """lim pi_j (the last explicit weight for the prefix form)."""
        if self.explicit is not None:
            return self.explicit[-1]
        assert self.limit is not None
        return self.limit

    @property
    def is_strictly_decreasing(self) -> bool:
        return self.explicit is None

    def weight(self, j: int) -> Fraction:
        """pi_j for ``j >= 1``."""
        if j < 1:
            raise IndexError(f"Weight index must be >= 1, got {j}")
        if self.explicit is not None:
            return self.explicit[min(j, len(self.explicit)) - 1]
        assert self.limit is not None and self.c is not None
        return self.limit + (1 - self.limit) * self.c / (j + self.c - 1)

    def weights(self, n: int) -> list[Fraction]:
        return [self.weight(j) for j in range(1, n + 1)]

    def partial_sums(self, n: int) -> list[Fraction]:
        """[sum_{j<=1} pi_j, ..., sum_{j<=n} pi_j]."""
        return list(accumulate(self.weights(n)))

    def partial_sum(self, n: int) -> Fraction:
        return sum(self.weights(n), Fraction(0))

    def to_dict(self) -> dict[str, object]:
        if self.explicit is not None:
            return {"prefix": [format_fraction(x) for x in self.explicit]}
        assert self.limit is not None and self.c is not None
        return {"L": format_fraction(self.limit), "c": format_fraction(self.c)}

    def describe(self) -> str:
        if self.explicit is not None:
            return "pi=(" + ", ".join(str(x) for x in self.explicit) + ", ...)"
        return f"pi_j = {self.limit} + (1-{self.limit})*{self.c}/(j+{self.c}-1)"


# ---------------------------------------------------------------------------
# Trace-class diagonals
# ---------------------------------------------------------------------------

def _canonical_entries(values: Iterable[object]) -> tuple[Fraction, ...]:
    entries = [as_fraction(x) for x in values]
    if any(x < 0 for x in entries):
        raise PreconditionError("Diagonal entries must be >= 0")
    if any(b > a for a, b in zip(entries, entries[1:])):
        raise PreconditionError("Diagonal entries must be nonincreasing")
    while entries and entries[-1] == 0:
        entries.pop()
    return tuple(entries)


def phi_pi_eval(pi: PiWeight, xi: Iterable[object]) -> Fraction:
    """Exact Phi_pi(xi) = sum_j pi_j xi_j for nonincreasing xi >= 0."""
    entries = _canonical_entries(xi)
    return sum((pi.weight(j) * x for j, x in enumerate(entries, start=1)), Fraction(0))


@dataclass(frozen=True)
class TraceClassDiag:
    """Finitely supported diagonal trace-class operator diag(s_1, s_2, ...).

    Trailing zeros are trimmed; ``phi_pi_norm`` is exact.
    """

    entries: tuple[Fraction, ...]
    phi_pi_norm: Fraction

    @classmethod
    def of(cls, entries: Iterable[object], pi: PiWeight) -> TraceClassDiag:
        canonical = _canonical_entries(entries)
        return cls(canonical, phi_pi_eval(pi, canonical))

    @property
    def trace(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def entry(self, j: int) -> Fraction:
        return self.entries[j - 1] if j <= len(self.entries) else Fraction(0)


# ---------------------------------------------------------------------------
# Identity ratios and the improvement step
# ---------------------------------------------------------------------------

@dataclass
class IdentitySupSequence:
    """r_n = n / sum_{j<=n} pi_j for n = 1..n_max, with limit 1/L."""

    ratios: list[Fraction]
    limit: Fraction
    strictly_increasing: bool
    below_limit: bool


def identity_sup_sequence(pi: PiWeight, n_max: int) -> IdentitySupSequence:
    """The ratios n / Phi_pi(1^n) whose supremum is the Phi_pi* norm of I."""
    if n_max < 1:
        raise PreconditionError(f"n_max must be >= 1, got {n_max}")
    ratios = [Fraction(n) / total for n, total in enumerate(pi.partial_sums(n_max), start=1)]
    limit = 1 / pi.limit_value
    return IdentitySupSequence(
        ratios=ratios,
        limit=limit,
        strictly_increasing=all(b > a for a, b in zip(ratios, ratios[1:])),
        below_limit=all(r < limit for r in ratios),
    )


def _require_strict(pi: PiWeight) -> None:
    if not pi.is_strictly_decreasing:
        raise PreconditionError("The improvement step requires a strictly decreasing weight rule")


def improvement_step(pi: PiWeight, k: TraceClassDiag) -> TraceClassDiag:
    """Average entries M and M+1 with weights pi_M, pi_{M+1}.

    M is the smallest index with ``s_M > s_{M+1}``. The result keeps
    Phi_pi = 1, has a strictly larger trace and stays nonincreasing with
    ``s_{M+1} < t_M = t_{M+1} < s_M``.

    Raises:
        NoImprovableIndexError: If K = 0.
        PreconditionError: If Phi_pi(K) != 1 or pi is not strictly decreasing.
    """
    _require_strict(pi)
    if not k.entries:
        raise NoImprovableIndexError("The zero operator has no index with s_M > s_{M+1}")
    if k.phi_pi_norm != 1:
        raise PreconditionError(f"improvement_step expects Phi_pi(K) = 1, got {k.phi_pi_norm}")

    s = list(k.entries) + [Fraction(0)]
    m = next(i for i in range(1, len(s)) if s[i - 1] > s[i])
    w_m, w_next = pi.weight(m), pi.weight(m + 1)
    t = (w_m * s[m - 1] + w_next * s[m]) / (w_m + w_next)
    s[m - 1] = s[m] = t
    improved = TraceClassDiag.of(s, pi)

    if improved.phi_pi_norm != 1:
        raise AssertionError(f"Phi_pi not preserved: {improved.phi_pi_norm}")
    if not improved.trace > k.trace:
        raise AssertionError(f"Trace did not increase: {improved.trace} <= {k.trace}")
    if not k.entry(m + 1) < t < k.entry(m):
        raise AssertionError(f"Average {t} is not strictly between its neighbours")
    logger.debug("Improvement step at M=%d: t=%s, trace %s -> %s", m, t, k.trace, improved.trace)
    return improved


@dataclass
class CounterexampleReport:
    """Trace sequence of repeated improvement steps from diag(1, 0, ...).

    Attributes:
        traces: Trace of K_0, K_1, ..., K_iterations.
        phi_values: Phi_pi norm of each K_n (all exactly 1).
        gaps: 1/L - trace_n for each n.
        bound: 1/L.
        final_entries: Diagonal of the last operator.
    """

    pi: PiWeight
    iterations: int
    traces: list[Fraction]
    phi_values: list[Fraction]
    gaps: list[Fraction]
    bound: Fraction
    final_entries: tuple[Fraction, ...]
    strictly_increasing: bool
    all_below_bound: bool
    norm_preserved: bool

    @property
    def passed(self) -> bool:
        return self.strictly_increasing and self.all_below_bound and self.norm_preserved


def non_attainment_demo(pi: PiWeight, iterations: int) -> CounterexampleReport:
    """Iterate the improvement step and certify the traces never reach 1/L."""
    if iterations < 1:
        raise PreconditionError(f"iterations must be >= 1, got {iterations}")
    _require_strict(pi)

    k = TraceClassDiag.of([1], pi)
    operators = [k]
    for _ in range(iterations):
        k = improvement_step(pi, k)
        operators.append(k)

    bound = 1 / pi.limit_value
    traces = [op.trace for op in operators]
    report = CounterexampleReport(
        pi=pi,
        iterations=iterations,
        traces=traces,
        phi_values=[op.phi_pi_norm for op in operators],
        gaps=[bound - t for t in traces],
        bound=bound,
        final_entries=operators[-1].entries,
        strictly_increasing=all(b > a for a, b in zip(traces, traces[1:])),
        all_below_bound=all(t < bound for t in traces),
        norm_preserved=all(op.phi_pi_norm == 1 for op in operators),
    )
    logger.info(
        "Counterexample: %d iterations, final trace %.12f, bound %s",
        iterations,
        float(traces[-1]),
        bound,
    )
    return report


# ---------------------------------------------------------------------------
# Phi_pi* norms of diagonal models
# ---------------------------------------------------------------------------

@dataclass
class PhiStarResult:
    """Diagonal-reduced Phi_pi* norm of a model.

    ``attained`` is True (certified at ``argmax``), False (certified
    supremum approached but never reached) or None (inconclusive at this
    horizon). ``value_lower``/``value_upper`` bracket the supremum.
    """

    value: Fraction
    attained: bool | None
    argmax: int | None
    horizon: int
    value_lower: Fraction
    value_upper: Fraction
    limit: Fraction
    ratios_head: list[Fraction] = field(default_factory=list)
    label: str = REDUCED_DUAL_LABEL

    @property
    def status(self) -> str:
        if self.attained is None:
            return "inconclusive"
        return "attained" if self.attained else "not-attained"


def phi_pi_star_norm_model(
    a: DiagonalModel,
    pi: PiWeight,
    horizon: int = 500,
    *,
    strict: bool = False,
) -> PhiStarResult:
    """sup_m R_m with R_m = (sum_{j<=m} s_j(A)) / (sum_{j<=m} pi_j).

    R_m is computed exactly for m <= horizon. Beyond the horizon,
    ``s_j <= s_{n+1}`` and ``pi_j >= L`` bound every later ratio by
    ``max((S_n + s_{n+1}) / (P_n + L), s_{n+1} / L)``; when that bound does
    not exceed the best computed ratio the supremum is attained there.
    When the s-numbers are constant equal to their limit beyond the
    horizon and every computed ratio is below ``limit / L``, the ratios
    increase to ``limit / L`` without reaching it.

    Raises:
        PreconditionError: If ``horizon < 1``.
        HorizonTooSmallError: In strict mode, when neither case certifies.
    """
    if horizon < 1:
        raise PreconditionError(f"horizon must be >= 1, got {horizon}")
    snumbers = s_numbers_model(a)
    s = [as_fraction(x) for x in snumbers.values(horizon + 1)]
    s_sums = list(accumulate(s[:horizon]))
    pi_sums = pi.partial_sums(horizon)
    ratios = [num / den for num, den in zip(s_sums, pi_sums)]

    best = max(ratios)
    argmax = ratios.index(best) + 1
    big_l = pi.limit_value
    limit = as_fraction(snumbers.essential_sup) / big_l
    s_next = s[horizon]
    upper = max((s_sums[-1] + s_next) / (pi_sums[-1] + big_l), s_next / big_l)

    attained: bool | None
    if upper <= best:
        attained, value = True, best
    elif (
        snumbers.eventually_constant
        and s_next == snumbers.essential_sup
        and snumbers.essential_sup > 0
        and best < limit
    ):
        attained, value = False, limit
    else:
        attained, value = None, max(best, limit)

    result = PhiStarResult(
        value=value,
        attained=attained,
        argmax=argmax if attained else None,
        horizon=horizon,
        value_lower=max(best, limit),
        value_upper=max(best, upper, limit),
        limit=limit,
        ratios_head=ratios[:10],
    )
    logger.debug("phi* of %s at horizon %d: %s (%s)", a.describe(), horizon, value, result.status)
    if attained is None:
        if strict:
            raise HorizonTooSmallError(
                f"Horizon {horizon} cannot certify attainment for {a.describe()}: "
                f"best ratio {float(best):.6g}, tail bound {float(upper):.6g}"
            )
        logger.warning("phi* of %s inconclusive at horizon %d", a.describe(), horizon)
    return result


@dataclass
class CompactCheckReport:
    """Attainment of the Phi_pi* norm on a compact model and its compressions."""

    model: DiagonalModel
    model_result: PhiStarResult
    compressions: list[tuple[CoordinateSelection, PhiStarResult]]

    @property
    def all_attained(self) -> bool:
        return self.model_result.attained is True and all(
            r.attained is True for _, r in self.compressions
        )


def compact_phi_norming_check(
    a: DiagonalModel,
    pi: PiWeight,
    selections: Sequence[CoordinateSelection] = (),
    horizon: int = 500,
) -> CompactCheckReport:
    """Certify Phi_pi*-attainment on a compact model and sampled compressions.

    Raises:
        PreconditionError: If the model is not compact.
        HorizonTooSmallError: If some attainment cannot be certified.
    """
    if not a.is_compact:
        raise PreconditionError(f"Model {a.describe()} is not compact (tail limit {a.alpha})")
    model_result = phi_pi_star_norm_model(a, pi, horizon, strict=True)
    compressions = [
        (selection, phi_pi_star_norm_model(a.select(selection), pi, horizon, strict=True))
        for selection in selections
    ]
    report = CompactCheckReport(a, model_result, compressions)
    logger.info(
        "Compact check on %s: %d compression(s), all attained=%s",
        a.describe(),
        len(compressions),
        report.all_attained,
    )
    return report
