"""Exception hierarchy.

Every error raised by the package derives from :class:`OmegaLabError` so the
CLI can map the whole family to a single exit code.
"""


class OmegaLabError(Exception):
    pass


class DomainError(OmegaLabError):
    """A point or interval lies outside the phase space."""


class ParameterError(OmegaLabError):
    pass


class BudgetExceeded(OmegaLabError):
    """A rational's denominator grew past the configured bit budget."""


class ResourceError(OmegaLabError):
    """An enumeration would exceed the configured size cap."""


class NotSubsystemError(OmegaLabError):
    pass


class ResolutionError(OmegaLabError):
    """Inner-mode graph requested at a resolution where it is vacuous."""


class ModeError(OmegaLabError):
    pass


class NoPathError(OmegaLabError):
    pass


class SizeError(OmegaLabError):
    pass


class PreconditionError(OmegaLabError):
    pass


class LapError(PreconditionError):
    """A pull-back step cannot stay on one monotone lap."""


class EmptyNestError(OmegaLabError):
    pass


class NotExpandingError(OmegaLabError):
    pass


class OverlapError(OmegaLabError):
    pass


class SoficError(OmegaLabError):
    """h-shadowing splice requested on a strictly sofic presentation."""


class PrecisionError(OmegaLabError):
    pass


class ParseError(OmegaLabError):
    pass
