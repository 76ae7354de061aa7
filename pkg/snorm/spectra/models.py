"""
Symbolic positive diagonal operator models.

A ``DiagonalModel`` stands in for a positive diagonal operator on l2: a
finite prefix of entries followed by a structured tail. The tail is one
of three kinds:

- ``constant``: every tail entry equals ``alpha`` (an eigenvalue of
  infinite multiplicity).
- ``above``: entries ``alpha + g(j)`` decreasing to ``alpha``.
- ``below``: entries ``alpha - g(j)`` increasing to ``alpha``.

The gap ``g(j) = c / (j + d)**q`` (``c > 0``, ``d >= 0``, integer
``q >= 1``) is strictly decreasing to zero, which keeps suprema, limits
and exact membership questions decidable. All model arithmetic is exact
(``Fraction``).

Coordinate positions are 1-based throughout: position ``j`` of the entry
stream is ``prefix[j-1]`` for ``j <= len(prefix)`` and the tail value at
tail index ``j - len(prefix)`` afterwards.

Key types:
- Gap, TailKind, TailRule, DiagonalModel
- CoordinateSelection: the two legal model selections (drop a finite
  set, keep everything from a position onwards), combinable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from snorm.exceptions import InvalidModelError, UnsupportedSelectionError
from snorm.rationals import as_fraction


class TailKind(str, Enum):
    """How the tail of a diagonal model approaches its limit."""

    CONSTANT = "constant"
    ABOVE = "above"
    BELOW = "below"


@dataclass(frozen=True)
class Gap:
    """Strictly decreasing positive gap ``g(j) = c / (j + d)**q``."""

    c: Fraction
    d: Fraction = Fraction(0)
    q: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "d", as_fraction(self.d))
        if self.c <= 0:
            raise InvalidModelError(f"Gap constant c must be > 0, got {self.c}")
        if self.d < 0:
            raise InvalidModelError(f"Gap offset d must be >= 0, got {self.d}")
        if isinstance(self.q, bool) or not isinstance(self.q, int) or self.q < 1:
            raise InvalidModelError(f"Gap exponent q must be an integer >= 1, got {self.q!r}")

    def value(self, j: int) -> Fraction:
        """Gap at tail index *j* (``j >= 1``)."""
        return self.c / (j + self.d) ** self.q

    def shifted(self, n: int) -> Gap:
        """The gap seen from tail index ``n + 1`` onwards."""
        return Gap(self.c, self.d + n, self.q)

    def index_of(self, value: Fraction) -> int | None:
        """Return the tail index ``j >= 1`` with ``g(j) == value`` exactly, if any."""
        value = as_fraction(value)
        if value <= 0 or value > self.value(1):
            return None
        # (j + d)**q = c / value; estimate in floating point, confirm exactly
        estimate = float(self.c / value) ** (1.0 / self.q) - float(self.d)
        centre = int(round(estimate))
        for j in range(max(1, centre - 2), centre + 3):
            if self.value(j) == value:
                return j
        return None


@dataclass(frozen=True)
class TailRule:
    """Structured tail of a diagonal model.

    Attributes:
        kind: Constant, ConvergesFromAbove or ConvergesFromBelow.
        alpha: The limit of the tail (>= 0).
        gap: Required for the converging kinds, forbidden for Constant.
    """

    kind: TailKind
    alpha: Fraction
    gap: Gap | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", TailKind(self.kind))
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.alpha < 0:
            raise InvalidModelError(f"Tail limit alpha must be >= 0, got {self.alpha}")
        if self.kind is TailKind.CONSTANT:
            if self.gap is not None:
                raise InvalidModelError("A constant tail has no gap")
        elif self.gap is None:
            raise InvalidModelError(f"A '{self.kind.value}' tail requires a gap")
        elif self.kind is TailKind.BELOW and self.alpha - self.gap.value(1) < 0:
            raise InvalidModelError(
                f"Tail 'below' starts at alpha - g(1) = {self.alpha - self.gap.value(1)} < 0"
            )

    @classmethod
    def constant(cls, alpha: object) -> TailRule:
        return cls(TailKind.CONSTANT, as_fraction(alpha))

    @classmethod
    def above(cls, alpha: object, c: object = 1, d: object = 0, q: int = 1) -> TailRule:
        return cls(TailKind.ABOVE, as_fraction(alpha), Gap(as_fraction(c), as_fraction(d), q))

    @classmethod
    def below(cls, alpha: object, c: object = 1, d: object = 0, q: int = 1) -> TailRule:
        return cls(TailKind.BELOW, as_fraction(alpha), Gap(as_fraction(c), as_fraction(d), q))

    def value(self, j: int) -> Fraction:
        """Tail entry at tail index *j* (1-based)."""
        if j < 1:
            raise IndexError(f"Tail index must be >= 1, got {j}")
        if self.kind is TailKind.CONSTANT:
            return self.alpha
        assert self.gap is not None
        if self.kind is TailKind.ABOVE:
            return self.alpha + self.gap.value(j)
        return self.alpha - self.gap.value(j)

    def shifted(self, n: int) -> TailRule:
        """The tail rule describing tail indices ``n + 1, n + 2, ...``."""
        if self.gap is None or n == 0:
            return self
        return TailRule(self.kind, self.alpha, self.gap.shifted(n))

    def index_of(self, value: Fraction) -> int | None:
        """Tail index holding exactly *value*, for the converging kinds."""
        if self.gap is None:
            return None
        if self.kind is TailKind.ABOVE:
            return self.gap.index_of(value - self.alpha)
        return self.gap.index_of(self.alpha - value)

    def describe(self) -> str:
        if self.gap is None:
            return f"Constant({self.alpha})"
        g = self.gap
        power = "" if g.q == 1 else f"^{g.q}"
        name = "Above" if self.kind is TailKind.ABOVE else "Below"
        return f"{name}({self.alpha}, {g.c}/(j+{g.d}){power})"


@dataclass(frozen=True)
class CoordinateSelection:
    """A legal coordinate selection on a diagonal model.

    Keeps every position ``j >= keep_from`` that is not in ``drop``.
    Positions are 1-based.
    """

    drop: frozenset[int] = field(default_factory=frozenset)
    keep_from: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "drop", frozenset(self.drop))
        if any(isinstance(j, bool) or not isinstance(j, int) or j < 1 for j in self.drop):
            raise UnsupportedSelectionError(f"Dropped positions must be integers >= 1: {sorted(self.drop)}")
        if isinstance(self.keep_from, bool) or not isinstance(self.keep_from, int) or self.keep_from < 1:
            raise UnsupportedSelectionError(f"keep_from must be an integer >= 1, got {self.keep_from!r}")

    @classmethod
    def dropping(cls, positions: Iterable[int]) -> CoordinateSelection:
        return cls(drop=frozenset(positions))

    @classmethod
    def tail_from(cls, j0: int) -> CoordinateSelection:
        return cls(keep_from=j0)

    @property
    def horizon(self) -> int:
        """Last position this selection treats individually."""
        return max(max(self.drop, default=0), self.keep_from - 1)

    def keeps(self, j: int) -> bool:
        return j >= self.keep_from and j not in self.drop

    def describe(self) -> str:
        parts = []
        if self.drop:
            parts.append("drop {" + ",".join(str(j) for j in sorted(self.drop)) + "}")
        if self.keep_from > 1:
            parts.append(f"keep from {self.keep_from}")
        return "; ".join(parts) or "identity"


@dataclass(frozen=True)
class DiagonalModel:
    """Positive diagonal operator: a finite prefix followed by a tail rule."""

    prefix: tuple[Fraction, ...]
    tail: TailRule

    def __post_init__(self) -> None:
        entries = tuple(as_fraction(x) for x in self.prefix)
        negative = [x for x in entries if x < 0]
        if negative:
            raise InvalidModelError(f"Model entries must be >= 0, got {negative[0]}")
        object.__setattr__(self, "prefix", entries)

    @classmethod
    def of(cls, prefix: Iterable[object], tail: TailRule) -> DiagonalModel:
        return cls(tuple(as_fraction(x) for x in prefix), tail)

    # -- Entry stream ---------------------------------------------------------

    @property
    def alpha(self) -> Fraction:
        return self.tail.alpha

    @property
    def is_compact(self) -> bool:
        """Entries tend to zero (the only accumulation point is 0)."""
        return self.tail.alpha == 0

    @property
    def is_finite_rank(self) -> bool:
        return self.tail.kind is TailKind.CONSTANT and self.tail.alpha == 0

    def entry(self, j: int) -> Fraction:
        """Entry at 1-based position *j*."""
        if j < 1:
            raise IndexError(f"Position must be >= 1, got {j}")
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        return self.tail.value(j - len(self.prefix))

    def entries(self, n: int) -> list[Fraction]:
        """First *n* entries of the stream."""
        return [self.entry(j) for j in range(1, n + 1)]

    def supremum(self) -> Fraction:
        """Supremum of the entry closure."""
        if self.tail.kind is TailKind.ABOVE:
            tail_sup = self.tail.value(1)
        else:
            tail_sup = self.tail.alpha
        return max([tail_sup, *self.prefix])

    def materialize(self, n: int) -> DiagonalModel:
        """Move the first *n* tail entries into the prefix."""
        if n <= 0:
            return self
        moved = [self.tail.value(j) for j in range(1, n + 1)]
        return DiagonalModel((*self.prefix, *moved), self.tail.shifted(n))

    # -- Derived models -------------------------------------------------------

    def select(self, selection: CoordinateSelection) -> DiagonalModel:
        """Compression to the coordinates kept by *selection*."""
        horizon = max(selection.horizon, len(self.prefix))
        wide = self.materialize(horizon - len(self.prefix))
        kept = tuple(x for j, x in enumerate(wide.prefix, start=1) if selection.keeps(j))
        return DiagonalModel(kept, wide.tail)

    def with_positions_zeroed(self, positions: Iterable[int]) -> DiagonalModel:
        """Same model with the entries at *positions* replaced by 0."""
        positions = set(positions)
        if not positions:
            return self
        wide = self.materialize(max(positions) - len(self.prefix))
        prefix = tuple(Fraction(0) if j in positions else x for j, x in enumerate(wide.prefix, start=1))
        return DiagonalModel(prefix, wide.tail)

    def positions_of(self, value: Fraction, limit: int | None = None) -> list[int] | None:
        """Positions holding exactly *value*.

        Returns ``None`` when the value occupies infinitely many positions
        (a Constant tail equal to *value*); in that case callers ask for as
        many tail positions as they need through *limit*.
        """
        value = as_fraction(value)
        hits = [j for j, x in enumerate(self.prefix, start=1) if x == value]
        if self.tail.kind is TailKind.CONSTANT:
            if value == self.tail.alpha:
                if limit is None:
                    return None
                extra = max(0, limit - len(hits))
                hits.extend(len(self.prefix) + i for i in range(1, extra + 1))
            return hits
        index = self.tail.index_of(value)
        if index is not None:
            hits.append(len(self.prefix) + index)
        return hits

    def multiplicity(self, value: object) -> float | int:
        """Eigenvalue multiplicity of *value* (``math.inf`` when infinite)."""
        positions = self.positions_of(as_fraction(value))
        if positions is None:
            return math.inf
        return len(positions)

    def describe(self) -> str:
        prefix = ", ".join(str(x) for x in self.prefix)
        return f"[{prefix}] | {self.tail.describe()}"
