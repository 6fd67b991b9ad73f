"""Exception and warning types shared across the package."""


class DelegationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(DelegationError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateGameError(DelegationError):
    """All relevant utility magnitudes are zero, so a measure is undefined."""


class NoEquilibriumError(DelegationError):
    """The game has no pure Nash equilibrium (or no pure eps-NE)."""


class UnsupportedNormError(DelegationError):
    """The requested operation needs a norm/shift the configuration lacks."""


class InsufficientDataError(DelegationError):
    """An observation dataset is too small for the requested estimate."""


class PreconditionViolationError(DelegationError):
    """Observed payoffs violate the nonnegativity premise of the estimators."""


class GenerationFailureError(DelegationError):
    """The random-game generator exhausted its retry budget."""


class SimulationError(DelegationError):
    """Play simulation cannot proceed (e.g. empty admissible outcome set)."""


class DelegationWarning(UserWarning):
    """Non-fatal conditions: clipped targets, vacuous estimates, linf configs."""
