"""The two families of conserved densities carried by every solution of
the coupled first-order system, the corresponding Lagrangians, and
quadrature evaluation of the finite field charge.

A solution (a, b) supports two distinct sets of integrals of motion:

  * first-order-system quantities: the positive probability density
    rho_dirac = 2(a+ a + b+ b) and the sign-indefinite energy density
    energy_dirac;
  * wave-equation quantities inherited from the generating scalars: the
    sign-indefinite charge density rho_kg (equal pointwise to
    energy_dirac) and the positive energy density energy_kg.

Normalization of rho_kg is fixed by the stationary identity as twice the
plain scalar-current time component: for fields ~ exp(-i w t) it obeys
rho_kg = w * rho_dirac pointwise.  The scalar 4-current of a field list
(current_kg) keeps the plain i/2 normalization, which is the one entering
the finite field charge Q = (1/4pi) integral of J^0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad as _gk_quad

from .algebra import SpacetimePoint
from .errors import DivergentChargeError, QuadratureConvergenceError
from .fields import DiracSolutionChiral, _as_points_array, require_regular
from .operators import WEYL_CONJUGATE, WEYL_PRINCIPAL, weyl_field

_REAL_TOL = 1e-12


def _assert_real(vals: np.ndarray, what: str) -> np.ndarray:
    vals = np.asarray(vals)
    bound = _REAL_TOL * np.maximum(np.abs(vals), 1e-15)
    if np.any(np.abs(vals.imag) > bound):
        raise AssertionError(f"{what} has a non-negligible imaginary part")
    return vals.real


def _component_values(sol: DiracSolutionChiral, pts: np.ndarray) -> np.ndarray:
    return np.column_stack([c.eval_many(pts) for c in sol.components()])


def _component_dt(sol: DiracSolutionChiral, pts: np.ndarray) -> np.ndarray:
    return np.column_stack([c.d1_many(pts, "t") for c in sol.components()])


# ---------------------------------------------------------------------------
# Densities and Lagrangians (array cores + pointwise wrappers)
# ---------------------------------------------------------------------------

def rho_dirac_many(sol: DiracSolutionChiral, pts) -> np.ndarray:
    """Positive probability density 2(a+ a + b+ b)."""
    v = _component_values(sol, _as_points_array(pts))
    return 2.0 * np.sum(np.abs(v) ** 2, axis=1)


def rho_kg_many(sol: DiracSolutionChiral, pts) -> np.ndarray:
    """Sign-indefinite field-charge density i(a+ da/dt - da+/dt a + ...)."""
    pts = _as_points_array(pts)
    v = _component_values(sol, pts)
    dv = _component_dt(sol, pts)
    s = np.sum(np.conj(v) * dv, axis=1)
    return _assert_real(1j * (s - np.conj(s)), "field-charge density")


def energy_dirac_many(sol: DiracSolutionChiral, pts) -> np.ndarray:
    """Canonical energy density of the first-order system; coincides
    pointwise with rho_kg_many and is sign-indefinite."""
    return rho_kg_many(sol, pts)


def energy_kg_many(sol: DiracSolutionChiral, pts) -> np.ndarray:
    """Positive energy density sum(|grad c|^2 + |dc/dt|^2 + m^2 |c|^2)."""
    pts = _as_points_array(pts)
    total = np.zeros(pts.shape[0])
    for c in sol.components():
        total += np.abs(c.eval_many(pts)) ** 2 * sol.m**2
        for direction in ("t", "x", "y", "z"):
            total += np.abs(c.d1_many(pts, direction)) ** 2
    return total


def lagrangian_dirac_many(sol: DiracSolutionChiral, pts) -> np.ndarray:
    """i{a+(Wa) + b+(Wt b) - (Wa)+ a - (Wt b)+ b} - 2m(a+ b + b+ a);
    vanishes identically on solutions of the first-order system."""
    pts = _as_points_array(pts)
    av = sol.a.eval_many(pts)
    bv = sol.b.eval_many(pts)
    wa = weyl_field(sol.a, WEYL_PRINCIPAL).eval_many(pts)
    wtb = weyl_field(sol.b, WEYL_CONJUGATE).eval_many(pts)
    kinetic = np.sum(np.conj(av) * wa + np.conj(bv) * wtb, axis=1)
    mass = np.sum(np.conj(av) * bv, axis=1)
    out = 1j * (kinetic - np.conj(kinetic)) - 2.0 * sol.m * (mass + np.conj(mass))
    return _assert_real(out, "first-order Lagrangian density")


def lagrangian_kg_many(sol: DiracSolutionChiral, pts) -> np.ndarray:
    """(2/m){(Wa)+(Wt b) + (Wt b)+(Wa) - m^2(a+ b + b+ a)}."""
    pts = _as_points_array(pts)
    av = sol.a.eval_many(pts)
    bv = sol.b.eval_many(pts)
    wa = weyl_field(sol.a, WEYL_PRINCIPAL).eval_many(pts)
    wtb = weyl_field(sol.b, WEYL_CONJUGATE).eval_many(pts)
    cross = np.sum(np.conj(wa) * wtb, axis=1)
    mass = np.sum(np.conj(av) * bv, axis=1)
    out = (2.0 / sol.m) * (cross + np.conj(cross) - sol.m**2 * (mass + np.conj(mass)))
    return _assert_real(out, "second-order Lagrangian density")


def _pointwise(many_fn, sol, p: SpacetimePoint) -> float:
    require_regular(sol.singular_set, p)
    return float(many_fn(sol, p)[0])


def rho_dirac(sol, p: SpacetimePoint) -> float:
    return _pointwise(rho_dirac_many, sol, p)


def rho_kg(sol, p: SpacetimePoint) -> float:
    return _pointwise(rho_kg_many, sol, p)


def energy_dirac(sol, p: SpacetimePoint) -> float:
    return _pointwise(energy_dirac_many, sol, p)


def energy_kg(sol, p: SpacetimePoint) -> float:
    return _pointwise(energy_kg_many, sol, p)


def lagrangian_dirac(sol, p: SpacetimePoint) -> float:
    return _pointwise(lagrangian_dirac_many, sol, p)


def lagrangian_kg(sol, p: SpacetimePoint) -> float:
    return _pointwise(lagrangian_kg_many, sol, p)


def current_kg(fields, p: SpacetimePoint) -> np.ndarray:
    """Scalar 4-current (raised index) summed over the supplied fields:
    J^0 = (i/2) sum(F* dF/dt - c.c.), J^k likewise with -d/dx_k.

    For exp(-i(Et - k.r)) this is the constant 4-vector (E, k); the
    4-divergence vanishes on wave solutions.
    """
    out = np.empty(4)
    signs = (-1.0, 1.0, 1.0, 1.0)  # raised spatial index flips d_k
    for mu, direction in enumerate(("t", "x", "y", "z")):
        s = 0.0 + 0.0j
        for f in fields:
            require_regular(f.singular_set, p)
            s += np.conj(f.eval(p)) * f.d1(p, direction)
        out[mu] = signs[mu] * s.imag
    return out


# ---------------------------------------------------------------------------
# Charge quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChargeResult:
    """A quadrature-evaluated conserved charge with an error estimate."""

    value: float
    abs_error_estimate: float
    truncation_radius: float

    def __post_init__(self):
        if self.abs_error_estimate < 0:
            raise ValueError("error estimate must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error_estimate": self.abs_error_estimate,
            "truncation_radius": self.truncation_radius,
        }


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    r_min: float = 0.0

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")


def field_charge_radial(m: float, psi: float, cfg: QuadratureConfig = None) -> ChargeResult:
    """Field charge of the localized one-parameter family:

        Q = (1/4pi) int J^0 dV = m w int_0^inf e^{-2 m k r} dr = w/(2k),

    with k = cos(psi), w = sin(psi).  The r = 0 endpoint is regular
    because r^2 |F|^2 = e^{-2mkr}; the tail is truncated where the
    integrand falls below rel_tol relative to its peak.  At psi = pi/2
    (k = 0) the integral diverges at spatial infinity.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if m <= 0:
        raise ValueError(f"mass must be positive, got {m}")
    if not 0.0 <= psi:
        raise ValueError(f"psi must be nonnegative, got {psi}")
    k = math.cos(psi)
    w = math.sin(psi)
    if psi >= math.pi / 2 - 1e-12:
        raise DivergentChargeError(
            "the charge integral diverges at spatial infinity for psi >= pi/2"
        )
    r_trunc = 1.5 * math.log(1.0 / cfg.rel_tol) / (2.0 * m * k)
    if w == 0.0:
        return ChargeResult(0.0, 0.0, r_trunc)
    value, abserr = _gk_quad(
        lambda r: m * w * math.exp(-2.0 * m * k * r),
        cfg.r_min, r_trunc, epsabs=0.0, epsrel=cfg.rel_tol, limit=200,
    )
    tail = (w / (2.0 * k)) * math.exp(-2.0 * m * k * r_trunc)
    return ChargeResult(float(value), float(abserr + tail), r_trunc)


@dataclass(frozen=True)
class SphericalShell:
    """Integration region r_min <= r <= r_max (full solid angle)."""

    r_max: float
    r_min: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.r_min < self.r_max:
            raise ValueError(f"need 0 <= r_min < r_max, got [{self.r_min}, {self.r_max}]")


def _shell_quadrature(density, region: SphericalShell, t: float, n: int) -> float:
    """Product rule: Gauss-Legendre in r and cos(theta), uniform midpoints
    in phi (spectrally accurate for the periodic direction)."""
    xr, wr = np.polynomial.legendre.leggauss(n)
    r = 0.5 * (region.r_max - region.r_min) * (xr + 1.0) + region.r_min
    wr = wr * 0.5 * (region.r_max - region.r_min)
    xmu, wmu = np.polynomial.legendre.leggauss(n)
    nphi = max(8, n)
    phi = (np.arange(nphi) + 0.5) * (2.0 * np.pi / nphi)
    wphi = 2.0 * np.pi / nphi

    R, MU, PHI = np.meshgrid(r, xmu, phi, indexing="ij")
    sin_theta = np.sqrt(1.0 - MU**2)
    pts = np.column_stack([
        np.full(R.size, t),
        (R * sin_theta * np.cos(PHI)).ravel(),
        (R * sin_theta * np.sin(PHI)).ravel(),
        (R * MU).ravel(),
    ])
    vals = np.asarray(density(pts), dtype=float).reshape(R.shape)
    weights = wr[:, None, None] * wmu[None, :, None] * wphi * R**2
    return float(np.sum(vals * weights))


def charge_volume(density, region: SphericalShell, cfg: QuadratureConfig = None,
                  t: float = 0.0, base_order: int = 32) -> ChargeResult:
    """Integrate a real density over a spherical shell with an error
    estimate from two successive resolutions.

    density maps an (N,4) point array to (N,) real values.  Raises
    QuadratureConvergenceError if doubling the order twice still moves the
    result by more than rel_tol (relative, floored at rel_tol absolute).
    """
    if cfg is None:
        cfg = QuadratureConfig()
    prev = _shell_quadrature(density, region, t, base_order)
    order = 2 * base_order
    for _ in range(2):
        cur = _shell_quadrature(density, region, t, order)
        err = abs(cur - prev)
        if err <= cfg.rel_tol * max(abs(cur), 1.0):
            return ChargeResult(cur, err, region.r_max)
        prev, order = cur, 2 * order
    raise QuadratureConvergenceError(
        f"volume integral did not settle within rel_tol={cfg.rel_tol}"
    )
