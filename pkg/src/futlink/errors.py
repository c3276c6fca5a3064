"""Exception hierarchy shared by all futlink modules.

Every error raised by the library derives from :class:`FutlinkError` so the
CLI can map any failure to a single machine-parsable line and a nonzero exit
status.
"""

from __future__ import annotations


class FutlinkError(Exception):
    """Base class for all futlink errors."""


# --- panel ingestion / windowing ---------------------------------------------

class MissingColumnError(FutlinkError):
    """A requested column is absent from the input file."""


class UnparsableDateError(FutlinkError):
    """A date cell does not parse as ISO-8601 YYYY-MM-DD."""


class DuplicateDateError(FutlinkError):
    """The same calendar date appears twice in one series."""


class NonPositivePriceError(FutlinkError):
    """A price cell is zero or negative."""


class EmptyIntersectionError(FutlinkError):
    """Panels share no common dates."""


class KindMismatchError(FutlinkError):
    """Operation received a panel of the wrong kind (price vs log-return)."""


class DegenerateSplitError(FutlinkError):
    """A train/test split would leave one side empty."""


class WindowTooLargeError(FutlinkError):
    """lookback + horizon exceeds the number of panel rows."""


# --- statistics ---------------------------------------------------------------

class TooFewObservationsError(FutlinkError):
    """Sample is shorter than the minimum the estimator needs."""


class NonFiniteValueError(FutlinkError):
    """Input contains NaN or infinity."""


class DegenerateVarianceError(FutlinkError):
    """Sample variance is zero where a positive variance is required."""


class ZeroVarianceError(FutlinkError):
    """A series is constant where variation is required."""


class SingularRegressionError(FutlinkError):
    """Regressor matrix is singular in a test regression."""


# --- regression / VAR ----------------------------------------------------------

class RankDeficientError(FutlinkError):
    """Design matrix does not have full column rank."""


class DimensionMismatchError(FutlinkError):
    """Array shapes are inconsistent."""


class ZeroResidualsError(FutlinkError):
    """All residuals are zero; the statistic is undefined."""


class CholeskyFailureError(FutlinkError):
    """Matrix is not positive definite."""


# --- optimization ---------------------------------------------------------------

class NonFiniteObjectiveError(FutlinkError):
    """Objective evaluated to NaN or infinity where finiteness is required."""


class InfeasibleStartError(FutlinkError):
    """Starting point violates the constraints."""


class OptimizationFailedError(FutlinkError):
    """Optimizer did not converge within its iteration budget."""


# --- volatility / correlation ----------------------------------------------------

class NonFiniteRecursionError(FutlinkError):
    """Log-variance recursion left the numerical guard band."""

    def __init__(self, message: str, t: int | None = None):
        super().__init__(message)
        self.t = t


class SingularCorrelationError(FutlinkError):
    """A dynamic correlation matrix is not invertible."""


class UnknownSeriesError(FutlinkError):
    """Referenced series name is not part of the fit."""


# --- forecasting -------------------------------------------------------------------

class InvalidConfigError(FutlinkError):
    """Model configuration is internally inconsistent."""


class DivergedLossError(FutlinkError):
    """Training loss became non-finite."""


class EmptyTestSetError(FutlinkError):
    """Evaluation dataset contains no samples."""


# --- simulation --------------------------------------------------------------------

class InfeasibleSpecError(FutlinkError):
    """Simulation parameters lie outside the feasible region."""
