"""Exception hierarchy shared across the package."""


class TrendIrrError(Exception):
    """Base class for all errors raised by trendirr."""


class InvalidInputError(TrendIrrError, ValueError):
    pass


class InsufficientDataError(TrendIrrError, ValueError):
    """Raised when a series is too short, or lacks up/down trends, for a statistic."""


class DivergenceUndefinedError(TrendIrrError, ValueError):
    """Unsmoothed KL divergence with p putting mass where q has none."""


class GenerationError(TrendIrrError, RuntimeError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class IngestError(TrendIrrError):
    def __init__(self, message, path=None, row_errors=None):
        super().__init__(message)
        self.path = path
        self.row_errors = list(row_errors or [])


class UndefinedCorrelationError(TrendIrrError, ValueError):
    """Correlation requested for a sequence with zero variance."""
