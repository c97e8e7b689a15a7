"""Exception hierarchy shared by every knotforge module."""


class KnotforgeError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class MalformedCode(KnotforgeError):
    pass


class NonRealizable(KnotforgeError):
    """A Gauss/DT sequence has no planar realization."""


class InconsistentOrientation(KnotforgeError):
    pass


class DisconnectedDiagram(KnotforgeError):
    pass


class StaleSite(KnotforgeError):
    """A move site does not belong to the diagram it is applied to."""


class RecursionBudgetExceeded(KnotforgeError):
    pass


class HalfPowerUnresolvable(KnotforgeError):
    """A fractional power of a substituted value has no exact representation."""


class NonLaurentResult(KnotforgeError):
    """Substituting into a negative power produced a non-Laurent quotient."""


class NonIntegralExponent(KnotforgeError):
    pass


class ResidualImaginaryPart(KnotforgeError):
    pass


class SameComponent(KnotforgeError):
    pass


class CurvesTooClose(KnotforgeError):
    pass


class CapExceeded(KnotforgeError):
    pass


class FingerprintClash(KnotforgeError):
    pass
