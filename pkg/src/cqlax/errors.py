"""Exception types raised across the package."""


class CqlaxError(ValueError):
    """Base class for all library errors."""


class DomainError(CqlaxError):
    """A function was evaluated outside its declared domain."""


class DegenerateParameters(CqlaxError):
    """A formula divides by a parameter combination that vanishes."""


class TurningPointProximity(CqlaxError):
    """Quadrature requested too close to a classical turning point."""


class SignMismatch(CqlaxError):
    """The radicand of the elliptic quadrature is negative."""


class ZeroCrossing(CqlaxError):
    """A function that is divided by vanishes on the evaluation grid."""


class ZeroDenominator(CqlaxError):
    """A Lax-pair entry used as a divisor vanishes on the evaluation region."""


class TrajectoryBlowup(CqlaxError):
    """The classical integrator left its magnitude bound."""


class DomainExit(CqlaxError):
    """The classical trajectory reached u <= 0 for a centrifugal family."""


class EnergyViolation(CqlaxError):
    """A trajectory does not satisfy the energy convention it claims."""


class WindowError(CqlaxError):
    """An evaluation window exceeds the support of a trajectory."""


class FamilyMismatch(CqlaxError):
    """Objects belonging to different potential families were combined."""


class ConfigError(CqlaxError):
    """Invalid run configuration."""
