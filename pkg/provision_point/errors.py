"""
Domain errors for provision point mechanisms.

Every error raised by the library derives from MechanismError, which is a
ValueError so callers that only care about bad input can catch that.
"""


class MechanismError(ValueError):
    """Base class for all domain errors."""


class InvalidParameter(MechanismError):
    """A project or scheme parameter is outside its legal range."""


class InvalidProfile(MechanismError):
    """A strategy profile violates the single-shot contribution model."""


class EmptyProfile(MechanismError):
    """A refund was requested from a profile whose total contribution is zero."""


class InvalidSeq(MechanismError):
    """A contribution sequence index is outside 1..m."""


class TimeOutOfRange(MechanismError):
    """A time lies outside [0, T]."""


class InvalidLiquidity(MechanismError):
    """The PPS liquidity parameter b is not positive."""


class OutOfRange(MechanismError):
    """A value lies outside the range of the PPS cost function."""


class NoValidBudget(MechanismError):
    """No refund budget B > 0 supports an equilibrium (total valuation <= H)."""


class UnsupportedScheme(MechanismError):
    """The operation is not defined for this refund scheme."""


class UnsupportedMechanism(MechanismError):
    """The gas model has no operation counts for this mechanism."""


class DomainError(MechanismError):
    """A cost-model argument is outside its domain."""


class ConfigError(MechanismError):
    """The run-config document is malformed or inconsistent."""
