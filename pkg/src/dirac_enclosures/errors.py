"""Exception hierarchy shared by all modules."""


class DiracError(Exception):
    """Base class for every error raised by this package."""


class SpectralPoint(DiracError, ValueError):
    """Raised when a spectral parameter lies in the essential spectrum."""


class UnitDisk(DiracError, ValueError):
    """Raised when a k-parameter is outside the punctured open unit disk."""


class NoConvergence(DiracError, ArithmeticError):
    pass


class Singular(DiracError, ArithmeticError):
    pass


class BadExponent(DiracError, ValueError):
    pass


class SupportOverflow(DiracError, ValueError):
    """Raised when a potential does not fit into the truncation window."""


class RegimeViolation(DiracError, ValueError):
    pass


class AtThreshold(DiracError, ValueError):
    """Raised when a budget sits on a topology threshold."""


class NonFinite(DiracError, ArithmeticError):
    pass


class NotOnGamma(DiracError, ValueError):
    pass


class NotInD(DiracError, ValueError):
    pass
