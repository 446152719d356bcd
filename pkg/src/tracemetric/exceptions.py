"""Exception hierarchy shared by all modules."""


class TraceMetricError(Exception):
    """Base class for errors raised by tracemetric."""


class DomainError(TraceMetricError, ValueError):
    """Input lies outside the domain of the operation (singular, not SPD, ...)."""


class ArgumentError(TraceMetricError, ValueError):
    """Malformed argument: wrong shape, out-of-range index, degenerate plane."""


class IterationError(TraceMetricError, RuntimeError):
    """An iterative routine did not converge."""


class IntegrationError(TraceMetricError, RuntimeError):
    """A numerical trajectory left the non-singular region."""


class NotAnIsometryError(DomainError):
    """A black-box map failed the isometry verification probe."""
