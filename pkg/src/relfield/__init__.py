"""relfield: construction, transformation and numerical verification of
singular solutions to the coupled first-order spinor system and the scalar
wave equation, exposed as a library, an HTTP service and a CLI."""

from .algebra import (
    Mat2C,
    NullCoords,
    SpacetimePoint,
    coord_matrix,
    lorentz_map,
    lorentz_matrix,
    pauli,
    point_from_matrix,
    sl2c_boost,
    sl2c_rotation,
)
from .fields import (
    BispinorField,
    DiracSolutionChiral,
    EvalOnlyScalarField,
    ScalarField,
    Spinor2Field,
    fd_oracle,
)
from .errors import (
    DivergentChargeError,
    PreconditionError,
    QuadratureConvergenceError,
    RelfieldError,
    SamplingBudgetError,
    SingularPointError,
    UnimodularityError,
    UnknownSolutionError,
)

__version__ = "0.1.0"

__all__ = [
    "BispinorField",
    "DiracSolutionChiral",
    "DivergentChargeError",
    "EvalOnlyScalarField",
    "Mat2C",
    "NullCoords",
    "PreconditionError",
    "QuadratureConvergenceError",
    "RelfieldError",
    "SamplingBudgetError",
    "ScalarField",
    "SingularPointError",
    "SpacetimePoint",
    "Spinor2Field",
    "UnimodularityError",
    "UnknownSolutionError",
    "coord_matrix",
    "fd_oracle",
    "lorentz_map",
    "lorentz_matrix",
    "pauli",
    "point_from_matrix",
    "sl2c_boost",
    "sl2c_rotation",
]
