"""Exception types raised across genuslab."""


class GenusLabError(Exception):
    """Base class for every error raised by this package."""


class InputError(GenusLabError, ValueError):
    """Malformed or inconsistent input data (CLI exit code 2)."""


# series
class NotInvertible(GenusLabError, ZeroDivisionError):
    pass


class IncompatibleOffsets(GenusLabError, ValueError):
    pass


class InvalidWeight(GenusLabError, ValueError):
    pass


class NeedMoreOrder(GenusLabError, ValueError):
    def __init__(self, required, available):
        super().__init__(f"need at least {required} known coefficients, have {available}")
        self.required = required
        self.available = available


# roots
class NonPositiveWeight(GenusLabError, ValueError):
    pass


class NotACharacteristicClass(GenusLabError, ValueError):
    pass


class MissingPairing(InputError):
    def __init__(self, monomial):
        super().__init__(f"no characteristic number for {monomial}")
        self.monomial = monomial


# localize / witten
class OddWeightSum(InputError):
    def __init__(self, c1):
        super().__init__(
            f"sum of r*d_r is {c1}, which is odd; q would be branched "
            "(the circle action does not lift to the spin bundle)"
        )
        self.c1 = c1


class NoFixedPoints(InputError):
    pass


class RequiresP1Zero(GenusLabError, ValueError):
    pass


# fock
class CapacityExceeded(GenusLabError, MemoryError):
    pass


class UnknownMode(GenusLabError, KeyError):
    pass


class SpecMismatch(GenusLabError, ValueError):
    pass


class InvalidStructureConstants(GenusLabError, ValueError):
    pass


class SpectralObstruction(GenusLabError, ArithmeticError):
    pass


# cli
class ParseError(InputError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
