"""Exception types shared across the package."""


class SimulatorError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(SimulatorError):
    """Structurally inconsistent input: arity mismatch, bad flag, empty species set."""


class UnknownSpeciesError(SimulatorError):
    """A species id does not resolve in the registry."""


class ShapeError(SimulatorError):
    """Operands with incompatible register counts."""


class DomainError(SimulatorError):
    """Input outside an operation's domain (zero state, unnormalized state, trivial cut, ...)."""


class SuperselectionError(SimulatorError):
    """A single-sector operation received a state spread over several charge sectors."""
