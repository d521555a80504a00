"""Exception types shared across the package.

Every failure mode gets its own class so callers (and the experiment
harness, which records per-row failures instead of aborting) can tell
them apart.
"""

from __future__ import annotations

__all__ = [
    "WclmmseError",
    "DimensionError",
    "NumericInputError",
    "SingularMatrixError",
    "UndefinedConditionError",
    "InsufficientDataError",
    "InvalidSpectrumError",
    "ModelError",
    "RankError",
    "InvalidWeightError",
    "DegenerateDataError",
]


class WclmmseError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(WclmmseError, ValueError):
    """Inputs have incompatible or unexpected shapes."""


class NumericInputError(WclmmseError, ValueError):
    """Input contains NaN or infinite entries."""


class SingularMatrixError(WclmmseError, ArithmeticError):
    """A matrix required to be (numerically) invertible is not.

    Carries the offending eigenvalue index and value when the failure was
    detected spectrally; the pair doubles as a conditioning diagnostic.
    """

    def __init__(self, message: str, index: int | None = None,
                 value: float | None = None):
        super().__init__(message)
        self.index = index
        self.value = value


class UndefinedConditionError(WclmmseError, ArithmeticError):
    """Condition number requested for a matrix where it is undefined."""


class InsufficientDataError(WclmmseError, ValueError):
    """Too few samples for the requested estimate."""


class InvalidSpectrumError(WclmmseError, ValueError):
    """A synthetic spectrum contains nonpositive entries."""


class ModelError(WclmmseError, ValueError):
    """A covariance model violates its invariants for the requested use."""


class RankError(WclmmseError, ValueError):
    """A matrix required to have full rank is rank-deficient."""


class InvalidWeightError(WclmmseError, ValueError):
    """A weighting matrix is singular or has the wrong shape."""


class DegenerateDataError(WclmmseError, ValueError):
    """Data degenerate for the requested statistic (e.g. zero denominator)."""
