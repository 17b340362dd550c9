"""Exception hierarchy shared by every module of the package."""


class LelekError(Exception):
    """Base class for all errors raised by :mod:`lelek`."""


class NonPositiveInput(LelekError, ValueError):
    pass


class OrderViolation(LelekError, ValueError):
    pass


class NCViolation(LelekError, ValueError):
    """The slopes are multiplicatively dependent: ``r**k == rho**l``."""

    def __init__(self, witness):
        self.witness = witness
        k, l = witness
        super().__init__(f"r^{k} == rho^{l}, so r and rho connect")


class OutOfUnitInterval(LelekError, ValueError):
    pass


class SearchExhausted(LelekError):
    """No monomial was found within the exponent budget.

    ``frontier`` is the largest exponent sum ``m + n`` that was examined.
    """

    def __init__(self, budget, frontier, message=None):
        self.budget = budget
        self.frontier = frontier
        super().__init__(message or f"search exhausted: budget={budget}, frontier m+n={frontier}")


class DepthOverflow(LelekError):
    pass


class HorizonExceeded(LelekError):
    pass


class BoundaryCoordinate(LelekError, ValueError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"coordinate {index} equals {value}; cylinders need values in (0,1)")


class EpsilonTooSmall(LelekError, ValueError):
    pass


class InvalidCylinder(LelekError, ValueError):
    pass


class InvalidEps(LelekError, ValueError):
    pass


class InconsistentConstraints(LelekError, ValueError):
    pass


class BudgetExceeded(LelekError, ValueError):
    pass
