"""Exception hierarchy shared by every module of the package."""


class GDNLSError(Exception):
    """Base class for all errors raised by :mod:`gdnls`."""


class ConfigurationError(GDNLSError, ValueError):
    """An invalid grid, order, or run setting. ``field`` names the culprit."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ParameterError(GDNLSError, ValueError):
    """Model parameters outside their admissible range."""


class PreconditionError(GDNLSError, ValueError):
    """Input data violates a hypothesis required by the operation."""


class DegenerateInputError(GDNLSError, ValueError):
    """A ratio was requested whose denominator vanishes."""


class SingularModeError(GDNLSError, ValueError):
    """A negative-order Riesz potential met a nonzero mean mode."""


class ShapeError(GDNLSError, ValueError):
    """Fields living on different grids were combined."""


class TruncationError(GDNLSError):
    """The field is not negligible at the edge of the periodic box."""

    def __init__(self, message, boundary_amplitude=None):
        super().__init__(message)
        self.boundary_amplitude = boundary_amplitude


class NumericalOverflowError(GDNLSError, ArithmeticError):
    """A computation produced NaN or Inf."""


class StepFailure(NumericalOverflowError):
    """Time stepping hit a non-finite state.

    ``step`` is the index of the failing step and ``partial`` holds the
    trajectory accumulated up to (not including) it.
    """

    def __init__(self, message, step=None, partial=None):
        super().__init__(message)
        self.step = step
        self.partial = partial


class PicardDivergence(GDNLSError):
    """Successive Picard distances grew for three consecutive iterations."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history
