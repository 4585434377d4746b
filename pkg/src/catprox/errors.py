"""Exception types shared across the package."""

from __future__ import annotations


class UsageError(ValueError):
    """A caller violated an operation's precondition."""


class SpaceMismatchError(UsageError):
    """A point does not belong to the space it was used with."""


class UnboundedSpaceError(UsageError):
    """No modulus of total boundedness is available for this space."""


class NotUniformlyConvexError(UsageError):
    """The objective carries no modulus of uniform convexity."""


class PremiseError(UsageError):
    """A declared scenario premise (e.g. the distance bound b) fails."""


class CertificationError(RuntimeError):
    """An iterative solver exhausted its budget before certifying its answer.

    Carries the best point found and the last uncertified optimality gap so
    callers can attach diagnostic context.
    """

    def __init__(self, message, best_point=None, best_value=None, gap=None,
                 iterations=0):
        super().__init__(message)
        self.best_point = best_point
        self.best_value = best_value
        self.gap = gap
        self.iterations = iterations


class BudgetExceededError(RuntimeError):
    """An exact certificate computation would exceed the digit budget.

    ``stage`` records how deep the computation got (e.g. the recursion
    stage reached) before the abort.
    """

    def __init__(self, message, stage=None, digits=None):
        super().__init__(message)
        self.stage = stage
        self.digits = digits


class ScanBudgetError(RuntimeError):
    """An explicit max-scan was requested over a range beyond the scan cap."""
