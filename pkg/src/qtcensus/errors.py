"""Exception hierarchy shared by every module."""


class CensusError(Exception):
    """Base class for all library errors."""


class MalformedAutomatonError(CensusError, ValueError):
    pass


class BudgetExceededError(CensusError):
    """Raised when an enumeration or window exceeds its configured work cap."""


class OverflowDomainError(CensusError, OverflowError):
    """A computed integer would leave the exactly-testable 63-bit range."""


class OutOfDomainError(CensusError, ValueError):
    """An oracle was queried outside the range where it has a defined answer."""


class CapExceededError(CensusError):
    """Requested order is above the cap where exact verification is possible."""


class SearchExhaustedError(CensusError):
    def __init__(self, message, q_prime=None, z_bound=None):
        super().__init__(message)
        self.q_prime = q_prime
        self.z_bound = z_bound
