"""
Shared test fixtures and path constants for snorm tests.

The built-in corpus directory and the worked models used across the
unit and integration tests are defined here. If the corpus moves or a
worked object changes, update this file.
"""

from pathlib import Path

import numpy as np
import pytest

from snorm.spectra.models import DiagonalModel, TailRule

# ---------------------------------------------------------------------------
# Paths -- edit here if files move
# ---------------------------------------------------------------------------
PACKAGE_DIR = Path(__file__).resolve().parent.parent / "snorm"
CORPUS_DIR = PACKAGE_DIR / "corpus"


# ---------------------------------------------------------------------------
# Worked objects
# ---------------------------------------------------------------------------

@pytest.fixture
def ones_then_below() -> DiagonalModel:
    """diag(1, 1, 1 - 1/2, 1 - 1/3, ...): [2]-norming, not [3]-norming."""
    return DiagonalModel.of([1, 1], TailRule.below(1, 1, 1))


@pytest.fixture
def identity_model() -> DiagonalModel:
    return DiagonalModel.of([], TailRule.constant(1))


@pytest.fixture
def inverse_squares() -> DiagonalModel:
    """Compact diag(1, 1, 1/4, 1/9, ...)."""
    return DiagonalModel.of([1], TailRule.above(0, 1, 0, 2))


@pytest.fixture
def diag321() -> np.ndarray:
    return np.diag([3.0, 2.0, 1.0])


# ---------------------------------------------------------------------------
# Pytest markers
# ---------------------------------------------------------------------------
def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line(
        "markers",
        "integration: mark test as integration test (CLI and verification runner end to end)",
    )
    config.addinivalue_line(
        "markers",
        "slow: mark test as slow (full seeded verification run)",
    )
