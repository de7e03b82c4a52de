"""Exception types shared across the package."""


class HopfsmithError(Exception):
    """Base class for engine errors."""


class RingMismatch(HopfsmithError, TypeError):
    pass


class DivisionByNonUnit(HopfsmithError, ZeroDivisionError):
    pass


class NotARoot(HopfsmithError, ValueError):
    pass


class UnsupportedPrime(HopfsmithError, ValueError):
    pass


class NonIntegral(HopfsmithError, ArithmeticError):
    pass


class NotInAlgebra(HopfsmithError, ValueError):
    pass


class DegenerateDegree(HopfsmithError, ValueError):
    pass


class TrivialTwist(HopfsmithError, ValueError):
    pass


class UnknownGenerator(HopfsmithError, KeyError):
    pass


class DegreeCapExceeded(HopfsmithError, RuntimeError):
    pass


class ConfigError(HopfsmithError, ValueError):
    pass
