"""Exception types shared across the package."""


class DescentError(Exception):
    """Base class for mathematical outcomes that stop a computation."""


class Reducible(DescentError):
    """The defining cubic has a rational root, so it does not define a field."""


class Tangent(DescentError):
    """The hyperplane section is singular.

    ``parametrization`` carries a description of the rational parametrization
    when one is available.
    """

    def __init__(self, message, parametrization=None):
        super().__init__(message)
        self.parametrization = parametrization


class HypothesesNotMet(DescentError):
    """The exact Selmer formulas do not apply; only bounds are available."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EffortExceeded(DescentError):
    """A bounded search ran out of budget before it could certify a result."""


class DegeneratePoint(DescentError):
    """A rational map has a vanishing denominator at the requested point."""


class UnhandledCase(DescentError):
    """A local configuration outside the implemented chart."""
