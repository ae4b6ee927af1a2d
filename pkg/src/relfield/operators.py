"""First- and second-order wave operators and residual computation.

The 2x2 Weyl operators W = d_t - sigma.grad and Wt = d_t + sigma.grad
factorize the wave operator: W Wt = Wt W = d_t^2 - laplacian.  The 4x4
first-order operators D = i gamma^mu d_mu - m and D* = D + 2m factorize
the massive wave operator: D D* = D* D = (laplacian - d_t^2) - m^2.

All residuals use exact (symbolic) derivatives; finite differences exist
only as an independent validation oracle in the fields module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import SpacetimePoint
from .fields import (
    DIRECTIONS,
    BispinorField,
    DiracSolutionChiral,
    ScalarField,
    Spinor2Field,
    require_regular,
)

WEYL_PRINCIPAL = "W"
WEYL_CONJUGATE = "Wt"

_VARIANT_SIGN = {WEYL_PRINCIPAL: -1.0, WEYL_CONJUGATE: +1.0}


def weyl_field(s: Spinor2Field, variant: str = WEYL_PRINCIPAL) -> Spinor2Field:
    """Apply W (variant "W") or its conjugate Wt (variant "Wt") to a
    2-spinor field, returning the derivative field.

    Componentwise, with sgn = -1 for W and +1 for Wt:
        out1 = d_t s1 + sgn*(d_z s1 + (d_x - i d_y) s2)
        out2 = d_t s2 + sgn*((d_x + i d_y) s1 - d_z s2)
    """
    try:
        sgn = _VARIANT_SIGN[variant]
    except KeyError:
        raise ValueError(f"variant must be 'W' or 'Wt', got {variant!r}") from None
    c1 = s.c1.diff("t") + sgn * (s.c1.diff("z") + (s.c2.diff("x") + (-1j) * s.c2.diff("y")))
    c2 = s.c2.diff("t") + sgn * ((s.c1.diff("x") + 1j * s.c1.diff("y")) + (-1.0) * s.c2.diff("z"))
    return Spinor2Field(c1, c2)


def apply_weyl(s: Spinor2Field, p: SpacetimePoint, variant: str = WEYL_PRINCIPAL) -> np.ndarray:
    """Pointwise Weyl-operator application; errors on singular points."""
    require_regular(s.singular_set, p)
    return weyl_field(s, variant).eval(p)


def dirac_residual_fields(sol: DiracSolutionChiral):
    """The two residual 2-spinor fields (W a + i m b, Wt b + i m a); both
    vanish exactly where sol solves the first-order system."""
    r1 = weyl_field(sol.a, WEYL_PRINCIPAL) + (1j * sol.m) * sol.b
    r2 = weyl_field(sol.b, WEYL_CONJUGATE) + (1j * sol.m) * sol.a
    return r1, r2


def dirac_residual_chiral(sol: DiracSolutionChiral, p: SpacetimePoint):
    require_regular(sol.singular_set, p)
    r1, r2 = dirac_residual_fields(sol)
    return r1.eval(p), r2.eval(p)


def kg_residual_field(f: ScalarField, m: float) -> ScalarField:
    """(laplacian - d_t^2 - m^2) f as a field."""
    lap = f.diff("x").diff("x") + f.diff("y").diff("y") + f.diff("z").diff("z")
    return lap + (-1.0) * f.diff("t").diff("t") + (-(m * m)) * f


def kg_residual(f: ScalarField, m: float, p: SpacetimePoint) -> complex:
    require_regular(f.singular_set, p)
    return kg_residual_field(f, m).eval(p)


def dalembert_residual(f: ScalarField, p: SpacetimePoint) -> complex:
    """Massless wave residual, evaluated both in Cartesian form and through
    null-coordinate derivative chains; the two routes must agree to 1e-12
    relative.  u,v = t +- z give d_u d_v = (d_t^2 - d_z^2)/4, and the pair
    x +- iy gives 4 d_w d_wbar = d_x^2 + d_y^2.
    """
    require_regular(f.singular_set, p)
    cart = kg_residual_field(f, 0.0).eval(p)

    du = 0.5 * (f.diff("t") + f.diff("z"))
    dvdu = 0.5 * (du.diff("t") + (-1.0) * du.diff("z"))
    dw = 0.5 * (f.diff("x") + (-1j) * f.diff("y"))
    dwbdw = 0.5 * (dw.diff("x") + 1j * dw.diff("y"))
    null_form = 4.0 * (dwbdw.eval(p) - dvdu.eval(p))

    scale = max(abs(cart), abs(f.eval(p)), 1.0)
    if abs(null_form - cart) > 1e-12 * scale:
        raise AssertionError(
            f"null-coordinate and Cartesian wave residuals disagree: {null_form} vs {cart}"
        )
    return cart


# ---------------------------------------------------------------------------
# 4x4 gamma algebra and the 4D Dirac operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaBasis:
    """The four gamma matrices (stored as 2x2 blocks of a 4x4 array) plus
    gamma5 = i g0 g1 g2 g3; satisfies {g^mu, g^nu} = 2 eta^{mu nu}."""

    gamma: tuple
    gamma5: np.ndarray

    def anticommutation_defect(self) -> float:
        """max |{g^mu, g^nu} - 2 eta^{mu nu} I| over all index pairs."""
        eta = np.diag([1.0, -1.0, -1.0, -1.0])
        worst = 0.0
        for mu in range(4):
            for nu in range(4):
                anti = self.gamma[mu] @ self.gamma[nu] + self.gamma[nu] @ self.gamma[mu]
                worst = max(worst, float(np.max(np.abs(anti - 2 * eta[mu, nu] * np.eye(4)))))
        return worst


def _build_gamma_basis() -> GammaBasis:
    I2 = np.eye(2, dtype=complex)
    Z2 = np.zeros((2, 2), dtype=complex)
    from .algebra import pauli

    def block(a, b, c, d):
        return np.block([[a, b], [c, d]])

    g0 = block(I2, Z2, Z2, -I2)
    # Off-diagonal sign chosen so that the half-sum/half-difference map to
    # right/left 2-spinors turns D psi = 0 into {W a = -imb, Wt b = -ima}.
    gs = [block(Z2, -pauli(i), pauli(i), Z2) for i in (1, 2, 3)]
    gammas = (g0, gs[0], gs[1], gs[2])
    g5 = 1j * g0 @ gs[0] @ gs[1] @ gs[2]
    return GammaBasis(gammas, g5)


GAMMA = _build_gamma_basis()


def gamma_basis() -> GammaBasis:
    return GAMMA


_MASS_SIGN = {"D": -1.0, "D*": +1.0}


def _dirac_4d_component_fields(components, m: float, variant: str):
    """i gamma^mu d_mu (+/- m) applied to four stacked scalar fields."""
    try:
        msign = _MASS_SIGN[variant]
    except KeyError:
        raise ValueError(f"variant must be 'D' or 'D*', got {variant!r}") from None
    out = []
    for j in range(4):
        acc = (msign * m) * components[j]
        for mu, direction in enumerate(DIRECTIONS):
            for k in range(4):
                coef = GAMMA.gamma[mu][j, k]
                if coef != 0:
                    acc = acc + (1j * complex(coef)) * components[k].diff(direction)
        out.append(acc)
    return tuple(out)


def dirac_4d_field(psi: BispinorField, variant: str = "D"):
    """Apply D (variant "D") or D* (variant "D*") to a bispinor, returning
    the four component fields of the result."""
    return _dirac_4d_component_fields(psi.psi, psi.m, variant)


def apply_dirac_4d(psi: BispinorField, p: SpacetimePoint, variant: str = "D") -> np.ndarray:
    require_regular(psi.singular_set, p)
    outs = dirac_4d_field(psi, variant)
    return np.array([f.eval(p) for f in outs])


def factorization_check(quad, m: float, p: SpacetimePoint) -> np.ndarray:
    """D(D* Phi) - (box - m^2) Phi at p for a quadruple of smooth fields;
    vanishes identically for any second-differentiable input."""
    quad = tuple(quad)
    if len(quad) != 4:
        raise ValueError("factorization check needs exactly 4 fields")
    for f in quad:
        require_regular(f.singular_set, p)
    star = _dirac_4d_component_fields(quad, m, "D*")
    dd_star = _dirac_4d_component_fields(star, m, "D")
    return np.array([dd_star[j].eval(p) - kg_residual_field(quad[j], m).eval(p)
                     for j in range(4)])


def chiral_from_bispinor(psi: BispinorField) -> DiracSolutionChiral:
    """Half-sum / half-difference splitting (kappa, chi) -> (a, b)."""
    k1, k2, x1, x2 = psi.psi
    a = Spinor2Field(0.5 * (k1 + x1), 0.5 * (k2 + x2))
    b = Spinor2Field(0.5 * (k1 - x1), 0.5 * (k2 - x2))
    return DiracSolutionChiral(a, b, psi.m)


def bispinor_from_chiral(sol: DiracSolutionChiral) -> BispinorField:
    """Inverse of chiral_from_bispinor: kappa = a + b, chi = a - b."""
    kappa = sol.a + sol.b
    chi = sol.a - sol.b
    return BispinorField((kappa.c1, kappa.c2, chi.c1, chi.c2), sol.m)
