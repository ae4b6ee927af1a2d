"""Canonical spinor, scalar-transport and general mixed transformation
laws for chiral solutions under SL(2,C), plus the internal component-mix
group.

Conventions.  All three laws carry the field content along the coordinate
map of S (X -> S X S+): the returned fields are built from a(L_S p) where
L_S is the 4x4 matrix of that map.  This realizes a frame change by S on
fixed global coordinates, and is equivalent to an active transformation by
the inverse element.  Consequences, for the catalog solutions:

  * canonical law, rotation sl2c_rotation(z, phi): every component of a
    spherically-norm solution is multiplied by exp(-i phi/2); string-
    singular (axisymmetric) solutions pick up exp(+i phi/2);
  * alternative law, any rotation: spherically-norm solutions do not
    change at all, and a full turn is exactly the identity;
  * boost sl2c_boost(z, theta): the static profile is carried into motion
    with velocity V = tanh(theta), i.e. arguments deform as
    z* = z - V t, r* = sqrt(x^2 + y^2 + z*^2 cosh^2 theta);
  * composition runs right-to-left in the argument map:
    canonical(canonical(sol, S1), S2) = canonical(sol, S1 @ S2).

The canonical spinor factors are a -> S+ a, b -> S^-1 b; the general law
replaces the a-factor by an arbitrary unit-determinant internal mix M and
regenerates b, so M = restoring_mix(S) = S+ recovers the canonical law and
M = identity the alternative one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DET_TOL_CONSUME, Mat2C, det2, lorentz_matrix
from .errors import UnimodularityError
from .fields import DiracSolutionChiral, ScalarField, Spinor2Field
from .operators import WEYL_PRINCIPAL, weyl_field
from .verify import require_kg_solutions


def _inverse2(S: Mat2C) -> Mat2C:
    """Exact 2x2 inverse via the adjugate (det is 1 up to roundoff)."""
    d = det2(S)
    return np.array([[S[1, 1], -S[0, 1]], [-S[1, 0], S[0, 0]]], dtype=complex) / d


def _require_unit_det(S: Mat2C, name: str):
    if abs(det2(S) - 1.0) > DET_TOL_CONSUME:
        raise UnimodularityError(f"{name} must have unit determinant, det = {det2(S)}")


def scalar_transport(f: ScalarField, S: Mat2C) -> ScalarField:
    """Carry a scalar field along the coordinate map of S: the result is
    p -> f(L_S p), with exact derivatives through the chain rule."""
    _require_unit_det(S, "S")
    return f.compose_affine(lorentz_matrix(S))


def _transport_spinor(s: Spinor2Field, S: Mat2C) -> Spinor2Field:
    return s.compose_affine(lorentz_matrix(S))


def transform_canonical(sol: DiracSolutionChiral, S: Mat2C) -> DiracSolutionChiral:
    """Canonical spinor law: a -> S+ (a o L_S), b -> S^-1 (b o L_S).

    Maps solutions to solutions for every unit-determinant S; under a full
    2 pi rotation all components flip sign.
    """
    _require_unit_det(S, "S")
    a = _transport_spinor(sol.a, S).apply_matrix(S.conj().T)
    b = _transport_spinor(sol.b, S).apply_matrix(_inverse2(S))
    return DiracSolutionChiral(a, b, sol.m)


def transform_alternative(sol: DiracSolutionChiral, S: Mat2C) -> DiracSolutionChiral:
    """Scalar-transport law: carry a as a pair of scalars (arguments only)
    and regenerate b = (i/m) W a.

    Equivalent to conjugating the first-order operator by the coordinate
    map, but far less error-prone to evaluate.  Requires the components of
    a to solve the mass-m wave equation (checked statistically).  Yields a
    solution generally distinct from the canonical transform; a full turn
    about any axis is exactly the identity.
    """
    _require_unit_det(S, "S")
    require_kg_solutions([sol.a.c1, sol.a.c2], sol.m, "transform_alternative input")
    a = _transport_spinor(sol.a, S)
    b = (1j / sol.m) * weyl_field(a, WEYL_PRINCIPAL)
    return DiracSolutionChiral(a, b, sol.m)


def transform_general(sol: DiracSolutionChiral, S: Mat2C, M: Mat2C) -> DiracSolutionChiral:
    """Most general law: a -> M (a o L_S) with an internal mix M from an
    independent SL(2,C) copy, b regenerated from the new a.

    M = identity gives transform_alternative; M = restoring_mix(S) gives
    transform_canonical.
    """
    _require_unit_det(S, "S")
    _require_unit_det(M, "M")
    require_kg_solutions([sol.a.c1, sol.a.c2], sol.m, "transform_general input")
    a = _transport_spinor(sol.a, S).apply_matrix(M)
    b = (1j / sol.m) * weyl_field(a, WEYL_PRINCIPAL)
    return DiracSolutionChiral(a, b, sol.m)


def restoring_mix(S: Mat2C) -> Mat2C:
    """The internal mix for which the general law collapses to the
    canonical spinor law: M = S+ (in these conventions)."""
    return np.asarray(S, dtype=complex).conj().T


LAW_TAGS = ("canonical", "alternative", "general")


@dataclass(frozen=True)
class TransformLaw:
    """A named transformation law with its group data."""

    tag: str
    S: Mat2C
    M: Mat2C = None

    def __post_init__(self):
        if self.tag not in LAW_TAGS:
            raise ValueError(f"law tag must be one of {LAW_TAGS}, got {self.tag!r}")
        _require_unit_det(self.S, "S")
        if self.M is not None:
            _require_unit_det(self.M, "M")

    def apply(self, sol: DiracSolutionChiral) -> DiracSolutionChiral:
        if self.tag == "canonical":
            return transform_canonical(sol, self.S)
        if self.tag == "alternative":
            return transform_alternative(sol, self.S)
        M = np.eye(2, dtype=complex) if self.M is None else self.M
        return transform_general(sol, self.S, M)
