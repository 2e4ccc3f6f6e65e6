"""Environmental decoherence models: localization, master equations, Zeno dynamics, cats, gravity."""

__version__ = "0.1.0"

from .errors import ConfigurationError, DecoherenceError, NumericalDomainError  # noqa: F401
