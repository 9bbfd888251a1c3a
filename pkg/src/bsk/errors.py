"""Exception hierarchy.

Domain problems (bad parameters, points outside the disk, poles) derive from
``ValueError``; numerical failures (non-convergence, non-finite results)
derive from ``ArithmeticError``. The CLI maps the two families to exit codes
2 and 3.
"""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation at (or numerically on top of) a pole."""


class DegenerateTargetError(DomainError):
    """A caller-supplied target map traces a self-intersecting boundary."""


class NumericalError(ArithmeticError):
    """Base class for numerical failures."""


class ConvergenceError(NumericalError):
    """A series or quadrature did not meet its stopping rule."""


class DegenerateDenominatorError(NumericalError):
    """A formula denominator vanished (to working precision)."""
