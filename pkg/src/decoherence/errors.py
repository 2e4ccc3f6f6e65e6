"""Exception hierarchy.

``ConfigurationError`` maps to CLI exit status 2 and ``NumericalDomainError``
to exit status 3; everything else is a subclass of one of the two.
"""


class DecoherenceError(Exception):
    pass


class ConfigurationError(DecoherenceError, ValueError):
    pass


class NumericalDomainError(DecoherenceError, ValueError):
    pass


class InvalidStateError(NumericalDomainError):
    pass


class ShapeError(ConfigurationError):
    pass


class PartitionError(ConfigurationError):
    pass


class DomainError(NumericalDomainError):
    """Input outside the mathematical domain of a formula (nonpositive rate, t < 0...)."""


class DomainEscapeError(NumericalDomainError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class TruncationError(NumericalDomainError):
    pass


class InvalidOperatorError(NumericalDomainError):
    pass


class InvalidBasisError(NumericalDomainError):
    pass


class InvalidEnvironmentError(NumericalDomainError):
    pass
