"""Exception types raised by logsphere."""


class LogsphereError(Exception):
    """Base class for all logsphere errors."""


class CoincidentPoints(LogsphereError, ValueError):
    """Two points of a configuration coincide, so the log energy is infinite."""


class NorthPoleNotRepresentable(LogsphereError, ValueError):
    """The north pole has no preimage in the plane."""


class PoleOfMap(LogsphereError, ValueError):
    """A Mobius map was evaluated at (or too close to) its pole."""


class PoleOfPotential(LogsphereError, ValueError):
    """A potential is not finite at one of the configuration points."""


class UnsupportedPotential(LogsphereError, ValueError):
    """No closed-form equilibrium data is available for this potential."""


class DomainError(LogsphereError, ValueError):
    """Argument outside the domain of a special function."""


class DegenerateBasis(LogsphereError, ValueError):
    """Lattice basis vectors are (numerically) linearly dependent."""


class NoProgress(LogsphereError, RuntimeError):
    """The line search stalled on every restart."""


class InsufficientData(LogsphereError, ValueError):
    """Too few distinct sizes to fit the order-n constant."""
