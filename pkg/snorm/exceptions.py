"""
Custom exception hierarchy for snorm.

Every error raised by the library derives from ``SnormError`` so that the
CLI can map library failures to exit code 2 with one ``except`` clause,
while callers can still catch the precise condition (for example
``NotSymmetricError`` vs ``NoConvergenceError``).
"""


class SnormError(Exception):
    """Base exception for all snorm errors."""


# ---------------------------------------------------------------------------
# Input and construction errors
# ---------------------------------------------------------------------------

class ParseError(SnormError):
    """Raised when a model, norm, matrix or config input cannot be parsed.

    Covers malformed JSON/YAML, ragged or non-finite CSV matrices and
    schema validation failures surfaced by the pydantic models.
    """


class InvalidModelError(SnormError):
    """Raised when a DiagonalModel, TailRule or Gap violates its invariants.

    For example a negative prefix entry, a Constant tail carrying a gap,
    or a ConvergesFromBelow tail whose first entry ``alpha - g(1)`` is
    negative.
    """


class InvalidNormFamilyError(SnormError):
    """Raised when a NormFamily or PiWeight violates its invariants.

    Weights must be positive, nonincreasing and start at 1; ``k >= 1`` and
    ``p >= 1``.
    """


class PreconditionError(SnormError):
    """Raised when an operation is called outside its precondition.

    Used for the preconditions that have no dedicated error, such as
    ``iterations < 1`` or a non-compact model handed to the compact check.
    """


# ---------------------------------------------------------------------------
# Spectral kernel errors
# ---------------------------------------------------------------------------

class NotSymmetricError(SnormError):
    """Raised when sym_eig receives a matrix that is not symmetric to tolerance."""


class NoConvergenceError(SnormError):
    """Raised when an iterative kernel fails to converge.

    The Jacobi eigen-solver and the one-sided Jacobi SVD raise it when the
    sweep cap is exceeded; the numeric adjoint solver raises it when its
    restarts disagree.
    """


class BadRankError(SnormError):
    """Raised when a Courant-Fischer rank ``k`` is outside ``0 <= k < dim``."""


class UnsupportedSelectionError(SnormError):
    """Raised when a model compression would break the structured-tail form.

    Legal selections drop a finite index set or keep the tail from some
    index onwards.
    """


# ---------------------------------------------------------------------------
# Norm and duality errors
# ---------------------------------------------------------------------------

class UnsupportedForModelError(SnormError):
    """Raised when a norm family reads infinitely many s-numbers of a model."""


class UnsupportedFamilyError(SnormError):
    """Raised when an operation has no implementation for a norm family.

    For example the closed-form adjoint of a (p,k)-singular norm.
    """


class ShapeMismatchError(SnormError):
    """Raised when two matrices do not compose for a trace pairing."""


class ZeroOperatorError(SnormError):
    """Raised when a certificate is requested for the zero operator."""


# ---------------------------------------------------------------------------
# Attainment and s.n. ideal errors
# ---------------------------------------------------------------------------

class HypothesisViolatedError(SnormError):
    """Raised when the top s-number lies in the essential spectrum.

    The equivalence suite for the top eigenvalue only applies when
    ``s_1`` is an isolated eigenvalue of finite multiplicity.
    """


class HorizonTooSmallError(SnormError):
    """Raised when tail bounds cannot certify attainment either way.

    Only raised in strict mode; otherwise the result is reported as
    inconclusive.
    """


class NoImprovableIndexError(SnormError):
    """Raised when the improvement step finds no index with ``s_M > s_{M+1}``."""


# ---------------------------------------------------------------------------
# Output errors
# ---------------------------------------------------------------------------

class ExportError(SnormError):
    """Raised when the exporter fails to write output files.

    For example permission errors, disk full, or unsupported format.
    """
