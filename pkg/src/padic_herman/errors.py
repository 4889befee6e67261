"""Exception hierarchy shared across the package."""


class PadicHermanError(Exception):
    """Base class for all errors raised by this package."""


class ContextError(PadicHermanError, ValueError):
    """Invalid or mismatched field context (non-prime p, mixed primes, ...)."""


class ParseError(PadicHermanError, ValueError):
    pass


class PolynomialError(PadicHermanError, ValueError):
    pass


class HenselError(PolynomialError):
    """Residue root is not simple, so Newton iteration cannot be started."""


class CommonFactorError(PadicHermanError, ValueError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class DegreeCapError(PadicHermanError, ValueError):
    pass


class NotPeriodicError(PadicHermanError, ValueError):
    pass


class PoleError(PadicHermanError, ArithmeticError):
    """A sample point landed on a pole where a finite value was required."""


class DiskImageError(PadicHermanError):
    """Ratio consensus failed: the map is not injective with disk image on the region."""

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class EmptyRegionError(PadicHermanError, ValueError):
    pass


class ConstructionError(PadicHermanError, ValueError):
    pass


class ScaledReductionError(PadicHermanError):
    pass
