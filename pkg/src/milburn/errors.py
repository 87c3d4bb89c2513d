"""Exception types raised by the package."""


class MilburnError(Exception):
    """Base class for all errors raised here."""


class NotHermitian(MilburnError, ValueError):
    pass


class NoConvergence(MilburnError, RuntimeError):
    pass


class DimensionMismatch(MilburnError, ValueError):
    pass


class InvalidHubbardParams(MilburnError, ValueError):
    pass


class InvalidP(MilburnError, ValueError):
    pass


class InvalidState(MilburnError, ValueError):
    """A matrix violates one of the density-matrix invariants."""


class NegativeTime(MilburnError, ValueError):
    pass


class TailNotConverged(MilburnError, RuntimeError):
    """The Kraus series would need more than the allowed number of terms."""


class StepTooLarge(MilburnError, ValueError):
    pass


class NoSteadyState(MilburnError, ValueError):
    pass


class ConfigInvalid(MilburnError, ValueError):
    pass
