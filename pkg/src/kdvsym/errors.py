"""Exception types shared across the package."""


class KdvError(Exception):
    """Base class for all package errors."""


class DomainError(KdvError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested at (or within the guard radius of) a singularity."""

    def __init__(self, message, t=None, x=None):
        super().__init__(message)
        self.t = t
        self.x = x


class TanglingError(KdvError):
    """Mesh lost strict node ordering; carries the first offending cell index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BlowupError(KdvError):
    """A time step produced non-finite values; carries the step index."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SolverError(KdvError):
    """A linear system was singular or could not be solved to tolerance."""


class ExtrapolationError(KdvError):
    """Interpolation was requested outside the hull of the sample points."""


class ConfigError(KdvError):
    """A configuration file or preset specification is invalid."""
