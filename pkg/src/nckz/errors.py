"""Exception hierarchy shared by all nckz modules.

Exit-code mapping used by the CLI: DomainError -> 2 when raised while
parsing arguments, otherwise a check failure; ResourceError -> 3;
AccuracyError -> 4.
"""


class NckzError(Exception):
    """Base class for all library errors."""


class DomainError(NckzError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ResourceError(NckzError, RuntimeError):
    """A computation would exceed a configured resource cap."""


class AccuracyError(NckzError, RuntimeError):
    """A numeric routine could not reach the requested tolerance."""
