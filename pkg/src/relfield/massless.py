"""The massless correspondence: 2-spinor solutions of the conjugate Weyl
equation Wt psi = 0 generated from scalar wave-equation potentials, their
restricted gauge freedom, and the (anti) self-duality predicate for
complexified electromagnetic fields.

Sign convention: psi stacks (alpha, -beta), so that in the null
coordinates u,v = t +- z (with the derivative pairs d/d(x+iy) and
d/d(x-iy)) the equation Wt psi = 0 reads componentwise

    d_u alpha = d_{x+iy} beta,      d_{x-iy} alpha = d_v beta.

Note d_u = (d_t + d_z)/2 etc., so the matrix form of the residual is
exactly twice the null-coordinate pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .algebra import SpacetimePoint
from .fields import (
    NEGATIVE_Z_AXIS,
    R_SYM,
    ScalarField,
    Spinor2Field,
    X_SYM,
    Y_SYM,
    Z_SYM,
    require_regular,
)
from .operators import WEYL_CONJUGATE, WEYL_PRINCIPAL, weyl_field
from .verify import require_kg_solutions


@dataclass(frozen=True)
class WeylSolution:
    """A 2-spinor with Wt psi = 0 off singular sets; psi = (alpha, -beta)."""

    psi: Spinor2Field

    @property
    def alpha(self) -> ScalarField:
        return self.psi.c1

    @property
    def beta(self) -> ScalarField:
        return (-1.0) * self.psi.c2

    @property
    def singular_set(self):
        return self.psi.singular_set

    def eval_many(self, pts) -> np.ndarray:
        return self.psi.eval_many(pts)


@dataclass(frozen=True)
class PotentialRow:
    """Generating row zeta = (nu, mu); both components must solve the
    massless wave equation off their singular sets."""

    zeta: Spinor2Field

    @property
    def nu(self) -> ScalarField:
        return self.zeta.c1

    @property
    def mu(self) -> ScalarField:
        return self.zeta.c2


def _du(f: ScalarField) -> ScalarField:
    return 0.5 * (f.diff("t") + f.diff("z"))


def _dv(f: ScalarField) -> ScalarField:
    return 0.5 * (f.diff("t") + (-1.0) * f.diff("z"))


def _d_xpiy(f: ScalarField) -> ScalarField:
    """Derivative with respect to x+iy: (d_x - i d_y)/2."""
    return 0.5 * (f.diff("x") + (-1j) * f.diff("y"))


def _d_xmiy(f: ScalarField) -> ScalarField:
    """Derivative with respect to x-iy: (d_x + i d_y)/2."""
    return 0.5 * (f.diff("x") + 1j * f.diff("y"))


def weyl_residual(ws: WeylSolution, p: SpacetimePoint) -> np.ndarray:
    """Wt psi at p, evaluated in matrix form and cross-checked against the
    null-coordinate component pair (which must agree to 1e-12 after the
    factor-2 Jacobian of u,v = t +- z)."""
    require_regular(ws.singular_set, p)
    matrix_form = weyl_field(ws.psi, WEYL_CONJUGATE).eval(p)
    alpha, beta = ws.alpha, ws.beta
    null_pair = np.array([
        _du(alpha).eval(p) - _d_xpiy(beta).eval(p),
        _d_xmiy(alpha).eval(p) - _dv(beta).eval(p),
    ])
    scale = max(float(np.max(np.abs(matrix_form))), float(np.max(np.abs(ws.psi.eval(p)))), 1.0)
    if np.max(np.abs(2.0 * null_pair - matrix_form)) > 1e-12 * scale:
        raise AssertionError("null-coordinate and matrix Weyl residuals disagree")
    return matrix_form


def weyl_from_potentials(pr: PotentialRow) -> WeylSolution:
    """psi = W zeta; solves Wt psi = -box zeta = 0 when both potentials
    solve the massless wave equation (checked statistically)."""
    require_kg_solutions([pr.nu, pr.mu], 0.0, "weyl_from_potentials input")
    return WeylSolution(weyl_field(pr.zeta, WEYL_PRINCIPAL))


def potentials_single(mu: ScalarField):
    """Single-potential construction alpha = d_{x+iy} mu, beta = d_u mu;
    the pair solves the Weyl system iff box mu = 0 (checked statistically).
    Returns the pair (alpha, beta)."""
    require_kg_solutions([mu], 0.0, "potentials_single input")
    return _d_xpiy(mu), _du(mu)


def weyl_gauge_shift(pr: PotentialRow, kappa: Spinor2Field) -> PotentialRow:
    """Shift potentials by Wt kappa for wave-valid kappa; preserves the
    generated solution because W Wt kappa = -box kappa = 0."""
    require_kg_solutions([kappa.c1, kappa.c2], 0.0, "weyl_gauge_shift functions")
    return PotentialRow(pr.zeta + weyl_field(kappa, WEYL_CONJUGATE))


@dataclass(frozen=True)
class ComplexEMField:
    """Complex electric/magnetic triples; a thin carrier for the
    self-duality predicate only (no field evolution)."""

    E: tuple
    H: tuple

    def __post_init__(self):
        if len(self.E) != 3 or len(self.H) != 3:
            raise ValueError("E and H must be triples of scalar fields")


def selfduality_residual(em: ComplexEMField, p: SpacetimePoint, sign: int = +1) -> np.ndarray:
    """Componentwise H + sign*i*E at p; zero iff the field is self-dual
    (sign +1) or anti-self-dual (sign -1) there."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    out = np.empty(3, dtype=complex)
    for j in range(3):
        require_regular(em.E[j].singular_set, p)
        require_regular(em.H[j].singular_set, p)
        out[j] = em.H[j].eval(p) + sign * 1j * em.E[j].eval(p)
    return out


def dalembert_stereo() -> ScalarField:
    """Stereographic wave solution mu = (x+iy)/(z+r) = tan(theta/2) e^{i phi};
    string singularity on the half-line x = y = 0, z <= 0."""
    return ScalarField((X_SYM + sp.I * Y_SYM) / (Z_SYM + R_SYM), NEGATIVE_Z_AXIS)


def weyl_coulomb() -> WeylSolution:
    """The long-range solution alpha = 1/(2r), beta = -mu/(2r) with mu the
    stereographic potential; equals the single-potential construction
    applied to dalembert_stereo."""
    mu_expr = (X_SYM + sp.I * Y_SYM) / (Z_SYM + R_SYM)
    alpha = ScalarField(1 / (2 * R_SYM), NEGATIVE_Z_AXIS)
    minus_beta = ScalarField(mu_expr / (2 * R_SYM), NEGATIVE_Z_AXIS)
    return WeylSolution(Spinor2Field(alpha, minus_beta))
