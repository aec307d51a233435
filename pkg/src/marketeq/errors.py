class MarketEqError(Exception):
    """Base class for all errors raised by marketeq"""


class InvalidGameError(MarketEqError, ValueError):
    """A game, valuation, partition, outcome or network violates its invariants"""


class GuardExceededError(MarketEqError):
    """An enumeration or state-space guard refused the instance"""

    def __init__(self, guard: str, size, limit):
        self.guard = guard
        self.size = size
        self.limit = limit
        super().__init__(
            f"{guard}: size {size} exceeds limit {limit} (use unsafe_limits to override)"
        )


class PreconditionError(MarketEqError):
    """An operation was called on an instance outside its preconditions"""


class NotApplicableError(MarketEqError):
    """A principled negative verdict (not sparse, not representable, no balanced profile)"""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class VerificationError(MarketEqError, AssertionError):
    """A constructed outcome failed its own stability check"""
