"""Exception types shared across the package."""


class RelfieldError(Exception):
    """Base class for all package-specific errors."""


class SingularPointError(RelfieldError):
    """An operation was requested at (or too close to) a singular point."""


class UnimodularityError(RelfieldError):
    """A matrix expected to lie in SL(2,C) has determinant != 1."""


class PreconditionError(RelfieldError):
    """A statistically checked field precondition failed (e.g. input is not
    a mass-m wave-equation solution)."""


class SamplingBudgetError(RelfieldError):
    """Rejection sampling exhausted its attempt budget."""


class DivergentChargeError(RelfieldError):
    """The requested charge integral diverges."""


class QuadratureConvergenceError(RelfieldError):
    """Numerical integration did not converge within its budget."""


class UnknownSolutionError(RelfieldError):
    """A solution/density identifier is not in the catalog."""
