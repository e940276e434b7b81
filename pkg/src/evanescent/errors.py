"""Exception types.

Every error raised for bad input derives from :class:`ValidationError`
(itself a ``ValueError``), so callers and the CLI can catch one type.
"""


class ValidationError(ValueError):
    """Base class for all input/precondition failures."""


class DomainError(ValidationError):
    """Evaluation point or finite-difference stencil outside the declared domain."""


class ZeroResponse(ValidationError):
    """Spectral response vanishes at the evaluation point; ln S is undefined."""


class OnShell(ValidationError):
    """Evaluation point sits on a mass shell / light cone.

    ``delta_weight`` is the coefficient of the delta distribution carried by
    the delay time at that point.
    """

    def __init__(self, message, delta_weight=None):
        super().__init__(message)
        self.delta_weight = delta_weight


class PoleError(ValidationError):
    """Argument within the configured epsilon of a pole."""


class ZeroDetuning(ValidationError):
    pass


class ZeroEnergy(ValidationError):
    pass


class NonPositive(ValidationError):
    pass


class NegativeTime(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonHermitian(ValidationError):
    pass


class NonUnitState(ValidationError):
    pass


class EmptySlice(ValidationError):
    pass


class Underdetermined(ValidationError):
    """Not enough inputs to fix the free path length."""


class ConfigError(ValidationError):
    pass


class MissingField(ValidationError):
    pass


class TieError(ValidationError):
    """Two species in a mass hierarchy share the same mass/rank."""


class ParseError(ValidationError):
    """Malformed text input.  ``problems`` lists ``(line, column, message)``."""

    def __init__(self, message, problems=()):
        super().__init__(message)
        self.problems = list(problems)
