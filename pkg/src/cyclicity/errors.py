"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: usage/config problems (UsageError,
DomainError, CapacityError) exit 1, runtime numeric failures (NumericError)
exit 2.
"""


class CyclicityError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CyclicityError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UsageError(CyclicityError, ValueError):
    """An operation was called in a way its contract forbids."""


class NumericError(CyclicityError, ArithmeticError):
    """A numerical procedure failed to converge or overflowed."""


class CapacityError(CyclicityError):
    """A request exceeds an explicit enumeration or precision capacity."""
