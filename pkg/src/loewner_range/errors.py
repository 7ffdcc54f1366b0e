"""Exception hierarchy for the package."""


class LoewnerError(ValueError):
    """Base class for every error raised by loewner_range."""


class DomainError(LoewnerError):
    """Parameters outside the supported regime (T, c, p, phi ...)."""


class ScheduleError(LoewnerError):
    """Malformed driving-function schedule."""


class SwallowError(LoewnerError):
    """The trajectory hit the y floor before reaching the horizon."""


class RootFindingError(LoewnerError):
    """A scalar or complex root solve failed."""


class StitchingError(LoewnerError):
    """Adjacent boundary curves do not meet."""
