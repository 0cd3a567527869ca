"""Exception hierarchy shared by the library and the command line."""


class WeylLabError(Exception):
    """Base class for all library errors."""


class DomainError(WeylLabError, ValueError):
    """Inputs fall outside the region where an operation is defined."""


class InvalidGridError(DomainError):
    """A grid is too coarse or not a power of two."""


class CapacityError(WeylLabError):
    """A size guard was exceeded."""


class ClaimViolationError(WeylLabError):
    """A caller-supplied claim about a Weyl sum value did not hold."""


class CertificationFailure(WeylLabError):
    """No Diophantine certificate with bounded constants was found."""


class UsageError(WeylLabError):
    """Malformed experiment configuration or command line."""
