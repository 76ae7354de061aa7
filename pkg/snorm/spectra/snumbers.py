"""
s-numbers, essential spectrum and compressions.

For a finite matrix the s-numbers are its singular values followed by
zeros. For a positive diagonal model they follow the peel-off recursion:
take the supremum ``mu`` of the entry closure; if ``mu`` is the tail limit
(which is always in the essential spectrum) every remaining s-number is
``mu``; otherwise ``mu`` is an entry of finite multiplicity, emitted that
many times and removed.

Under the structured tail rules this gives three shapes:

- Constant / below tails: the prefix entries above ``alpha`` in
  nonincreasing order, then ``alpha`` forever.
- Above tails: the prefix entries above ``alpha`` merged with the tail
  stream ``alpha + g(j)``; never reaches ``alpha``.

``SNumbers`` represents both lazily: ``value_at(j)`` and ``values(n)``
work for any index.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from snorm.exceptions import ParseError, UnsupportedSelectionError
from snorm.spectra.kernels import Matrix, as_matrix, singular_values
from snorm.spectra.models import CoordinateSelection, DiagonalModel, TailKind, TailRule

logger = logging.getLogger(__name__)

Value = Fraction | float

_DEFAULT_SEGMENT_LIMIT = 64

# models already reported as mixed; the warning is logged once per model
_mixed_warned: set[DiagonalModel] = set()


@dataclass(frozen=True)
class SNumbers:
    """Nonincreasing s-number sequence.

    Attributes:
        head: Explicit leading values (nonincreasing).
        essential_sup: Value every index eventually equals (or tends to).
        tail: For models with an ``above`` tail, the tail stream merged
            with ``head``; ``None`` otherwise.
        mixed_case: The limit is an accumulation point that is also an
            eigenvalue of finite multiplicity.
    """

    head: tuple[Value, ...]
    essential_sup: Value
    tail: TailRule | None = None
    mixed_case: bool = False

    @property
    def eventually_constant(self) -> bool:
        return self.tail is None

    def values(self, n: int) -> list[Value]:
        """First *n* s-numbers."""
        if self.tail is None:
            head = list(self.head[:n])
            return head + [self.essential_sup] * (n - len(head))
        out: list[Value] = []
        i, j = 0, 1
        while len(out) < n:
            t = self.tail.value(j)
            if i < len(self.head) and self.head[i] >= t:
                out.append(self.head[i])
                i += 1
            else:
                out.append(t)
                j += 1
        return out

    def value_at(self, j: int) -> Value:
        """The j-th s-number (1-based)."""
        if j < 1:
            raise IndexError(f"s-number index must be >= 1, got {j}")
        return self.values(j)[-1]

    def segments(self, limit: int | None = None) -> list[tuple[Value, int]]:
        """(value, multiplicity) runs above the essential supremum.

        For an ``above`` tail the run list is infinite; only runs among the
        first *limit* values are returned.
        """
        if self.tail is None:
            values = list(self.head)
        else:
            values = self.values(limit or _DEFAULT_SEGMENT_LIMIT)
        runs: list[tuple[Value, int]] = []
        for value in values:
            if value <= self.essential_sup:
                break
            if runs and runs[-1][0] == value:
                runs[-1] = (value, runs[-1][1] + 1)
            else:
                runs.append((value, 1))
        return runs


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

def s_numbers_matrix(t: Matrix) -> SNumbers:
    """Singular values of *t*, then zeros."""
    s = singular_values(as_matrix(t))
    return SNumbers(tuple(float(x) for x in s), 0.0)


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

def essential_spectrum_model(a: DiagonalModel) -> frozenset[Fraction]:
    """Essential spectrum of a model: exactly ``{alpha}`` under the tail rules."""
    return frozenset({a.tail.alpha})


def s_numbers_model(a: DiagonalModel) -> SNumbers:
    """Peel-off s-numbers of a positive diagonal model."""
    alpha = a.tail.alpha
    high = tuple(sorted((x for x in a.prefix if x > alpha), reverse=True))
    mixed = a.tail.kind is not TailKind.CONSTANT and alpha in a.prefix
    if mixed and a not in _mixed_warned:
        _mixed_warned.add(a)
        logger.warning(
            "Model %s: limit %s is both an accumulation point and a finite-multiplicity eigenvalue",
            a.describe(),
            alpha,
        )
    tail = a.tail if a.tail.kind is TailKind.ABOVE else None
    return SNumbers(high, alpha, tail, mixed)


# ---------------------------------------------------------------------------
# Compressions
# ---------------------------------------------------------------------------

def compress(
    t: Matrix | DiagonalModel,
    coords: CoordinateSelection | Iterable[int] | Matrix,
) -> Matrix | DiagonalModel:
    """Restrict *t* to a set of coordinates or a subspace.

    Models take a ``CoordinateSelection``. Matrices take either a 1-based
    index set, giving the coordinate compression ``V^T T V`` for square
    ``T`` (``T V`` for rectangular ``T``), or an orthonormal basis matrix
    ``V`` giving the restriction ``T V``.

    Raises:
        UnsupportedSelectionError: If a model selection is not a
            ``CoordinateSelection`` (a finite keep-set would leave the
            structured-tail form).
    """
    if isinstance(t, DiagonalModel):
        if not isinstance(coords, CoordinateSelection):
            raise UnsupportedSelectionError(
                "Model compressions must drop a finite index set or keep a tail "
                f"from some position onwards; got {type(coords).__name__}"
            )
        return t.select(coords)

    t = as_matrix(t)
    if isinstance(coords, np.ndarray) and coords.ndim == 2:
        basis = as_matrix(coords)
        if basis.shape[0] != t.shape[1]:
            raise ParseError(f"Basis has {basis.shape[0]} rows, operator has {t.shape[1]} columns")
        gram = basis.T @ basis
        if float(np.linalg.norm(gram - np.eye(basis.shape[1]))) > 1e-10:
            raise ParseError("Basis columns are not orthonormal")
        return t @ basis

    if isinstance(coords, CoordinateSelection):
        raise UnsupportedSelectionError("Matrices are compressed by an index set or a basis matrix")
    index = sorted({int(j) for j in coords})
    if not index or index[0] < 1 or index[-1] > t.shape[1]:
        raise UnsupportedSelectionError(f"Index set {index} outside 1..{t.shape[1]}")
    cols = [j - 1 for j in index]
    if t.shape[0] == t.shape[1]:
        return t[np.ix_(cols, cols)]
    return t[:, cols]
