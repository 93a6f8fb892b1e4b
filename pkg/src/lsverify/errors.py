"""Exception hierarchy shared by all modules."""


class LSVerifyError(Exception):
    """Base class for library errors."""


class NoCubeFits(LSVerifyError, ValueError):
    """No axis-parallel cube of the requested side fits inside the domain."""


class NotThick(LSVerifyError, ValueError):
    """The measured thickness is zero."""


class GeometryError(LSVerifyError, ValueError):
    """Invalid or unsupported geometric input."""


class WindowRequired(LSVerifyError, ValueError):
    """An unbounded domain needs a finite window for this operation."""


class RhoMismatch(LSVerifyError, ValueError):
    """Coverings combined in a product must share the same rho."""


class EmptySpectrum(LSVerifyError, ValueError):
    """No eigenvalue lies below the requested cap."""


class Divergent(LSVerifyError, ArithmeticError):
    """A series defining a constant does not converge."""


class NotFound(LSVerifyError, LookupError):
    """A search exhausted its refinement budget."""

    def __init__(self, message: str, worst_margin: float = float("nan")):
        super().__init__(message)
        self.worst_margin = worst_margin


class ZeroMass(LSVerifyError, ValueError):
    """A local L2 norm vanished where a positive value was required."""


class PreconditionViolated(LSVerifyError, ValueError):
    """Input violates a stated precondition."""


class ToleranceNotReached(LSVerifyError, RuntimeError):
    """Adaptive quadrature hit its depth limit.

    The best available estimate is attached as ``estimate``.
    """

    def __init__(self, message: str, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class SchemaError(LSVerifyError, ValueError):
    """Configuration failed validation; ``errors`` lists (path, message)."""

    def __init__(self, errors):
        self.errors = list(errors)
        text = "; ".join(f"{p}: {m}" for p, m in self.errors)
        super().__init__(text or "invalid configuration")
