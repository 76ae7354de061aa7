"""
Exact scalar helpers for snorm.

Diagonal models, weight sequences and the s.n. ideal computations run on
``fractions.Fraction`` so that equalities (eigenvalue multiplicities,
norm preservation) and strict inequalities are decided with zero
tolerance. Inputs arrive as JSON numbers, YAML scalars or rational
strings; this module is the single place that turns them into exact
values and back into report strings.

Key functions:
- as_fraction(x) -> Fraction: exact conversion (decimal text read exactly).
- format_fraction(x) -> str: "p/q" (or "p" for integers).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

Scalar = Fraction | float


def as_fraction(x: object) -> Fraction:
    """Convert *x* to an exact ``Fraction``.

    Accepted:
      - int, Fraction
      - str: integer "3", rational "3/2", decimal "0.25"
      - float / numpy floating: read through its shortest repr, so that
        ``0.1`` becomes ``1/10`` rather than the binary expansion.

    Raises:
        ValueError: For booleans, non-finite floats and unparseable text.
    """
    if isinstance(x, bool):
        raise ValueError("Cannot convert bool to an exact scalar")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(float(x)):
            raise ValueError(f"Cannot convert non-finite value {x!r} to an exact scalar")
        return Fraction(repr(float(x)))
    if isinstance(x, str):
        text = x.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Cannot parse {x!r} as a rational number") from exc
    raise ValueError(f"Cannot convert {type(x).__name__} to an exact scalar (got {x!r})")


def format_fraction(x: Fraction | int) -> str:
    """Serialize an exact scalar as ``"p/q"``, or ``"p"`` when integral."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
