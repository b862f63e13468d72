"""Typed numerical failures.

Every public operation converts overflow, non-convergence and domain
violations into one of these instead of letting NaN/Inf leak out.
"""


class NumericalError(Exception):
    """Base class; the CLI maps it to exit code 2."""


class NonFinite(NumericalError):
    def __init__(self, point, message="non-finite value"):
        self.point = point
        super().__init__(f"{message} at {point!r}")


class NonConvergence(NumericalError):
    pass


class DerivativeVanished(NumericalError):
    pass


class NotInBasin(NumericalError):
    pass


class DepthExceeded(NumericalError):
    pass


class NotInRepellingPetal(NumericalError):
    pass


class HeightTooLow(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class PoleAtInteger(NumericalError):
    pass


class BranchCutHit(NumericalError):
    pass


class OutsideStrip(NumericalError):
    pass


class NoSeedFound(NumericalError):
    pass


class NoSignChange(NumericalError):
    def __init__(self, message, table=None):
        self.table = table or []
        super().__init__(message)


class BudgetExceeded(NumericalError):
    pass
