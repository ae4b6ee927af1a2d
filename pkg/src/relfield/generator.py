"""Construction of first-order-system solutions from wave-equation
potentials, recovery of potentials from solutions, the restricted gauge
freedom of the potentials, and iterated solution chains.

Central fact: if both components of a 2-spinor a solve the mass-m wave
equation, then (a, b) with b = (i/m) W a solves the coupled first-order
system W a = -i m b, Wt b = -i m a.  Components of the resulting b solve
the wave equation again, so promoting one of them to a fresh generating
slot yields an unbounded chain of solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    BispinorField,
    DiracSolutionChiral,
    ScalarField,
    Spinor2Field,
)
from .operators import (
    GAMMA,
    WEYL_CONJUGATE,
    WEYL_PRINCIPAL,
    _dirac_4d_component_fields,
    weyl_field,
)
from .verify import require_kg_solutions


@dataclass(frozen=True)
class PotentialPairChiral:
    """Generating pair (alpha, beta) of 2-spinor potentials; every
    component is expected to solve the mass-m wave equation."""

    alpha: Spinor2Field
    beta: Spinor2Field
    m: float


@dataclass(frozen=True)
class PotentialQuad4D:
    """Four scalar potentials generating a bispinor solution."""

    phi: tuple
    m: float

    def __post_init__(self):
        if len(self.phi) != 4:
            raise ValueError("potential quadruple needs exactly 4 fields")


def _check_mass(m: float):
    if not (m > 0):
        raise ValueError(f"mass must be positive, got {m}")


def complete_to_dirac(a: Spinor2Field, m: float) -> DiracSolutionChiral:
    """Complete a generating 2-spinor to a solution via b = (i/m) W a.

    Precondition (checked statistically at 64 seeded points, relative
    tolerance 1e-8): both components of a solve the mass-m wave equation
    off their singular sets.
    """
    _check_mass(m)
    require_kg_solutions([a.c1, a.c2], m, "complete_to_dirac input")
    b = (1j / m) * weyl_field(a, WEYL_PRINCIPAL)
    return DiracSolutionChiral(a, b, m)


def dirac_from_potentials_chiral(pp: PotentialPairChiral) -> DiracSolutionChiral:
    """Generate the solution a = Wt beta - i m alpha, b = W alpha - i m beta."""
    _check_mass(pp.m)
    a = weyl_field(pp.beta, WEYL_CONJUGATE) + (-1j * pp.m) * pp.alpha
    b = weyl_field(pp.alpha, WEYL_PRINCIPAL) + (-1j * pp.m) * pp.beta
    return DiracSolutionChiral(a, b, pp.m)


def potentials_from_chiral(sol: DiracSolutionChiral) -> PotentialPairChiral:
    """Recover potentials in the beta = 0 gauge: alpha = (i/m) a.

    dirac_from_potentials_chiral then reproduces the solution exactly.
    """
    return PotentialPairChiral(alpha=(1j / sol.m) * sol.a, beta=Spinor2Field.zero(), m=sol.m)


def gauge_shift_chiral(pp: PotentialPairChiral, pi: Spinor2Field,
                       rho: Spinor2Field) -> PotentialPairChiral:
    """Shift potentials without changing the generated solution:

        alpha -> alpha - m^2 pi - i m Wt rho
        beta  -> beta  + m^2 rho + i m W pi

    pi and rho must solve the mass-m wave equation componentwise (checked
    statistically; PreconditionError otherwise).
    """
    m = pp.m
    require_kg_solutions([pi.c1, pi.c2, rho.c1, rho.c2], m, "gauge_shift_chiral functions")
    alpha = pp.alpha + (-(m * m)) * pi + (-1j * m) * weyl_field(rho, WEYL_CONJUGATE)
    beta = pp.beta + (m * m) * rho + (1j * m) * weyl_field(pi, WEYL_PRINCIPAL)
    return PotentialPairChiral(alpha=alpha, beta=beta, m=m)


def dirac_from_potentials_4d(pq: PotentialQuad4D) -> BispinorField:
    """Generate a bispinor solution as D* applied to the quadruple."""
    _check_mass(pq.m)
    out = _dirac_4d_component_fields(pq.phi, pq.m, "D*")
    return BispinorField(out, pq.m)


def potentials_from_bispinor(psi: BispinorField, sign: int = +1) -> PotentialQuad4D:
    """Recover potentials by the rank-2 projection (1 +/- gamma5)/(2m).

    Either sign yields a quadruple with D* Phi = psi when psi solves the
    first-order system.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    P = (np.eye(4, dtype=complex) + sign * GAMMA.gamma5) / (2.0 * psi.m)
    phi = []
    for j in range(4):
        acc = ScalarField(0)
        for k in range(4):
            if P[j, k] != 0:
                acc = acc + complex(P[j, k]) * psi.psi[k]
        phi.append(acc)
    return PotentialQuad4D(tuple(phi), psi.m)


def gauge_shift_4d(pq: PotentialQuad4D, xi: PotentialQuad4D) -> PotentialQuad4D:
    """Shift the quadruple by D applied to a wave-valid quadruple Xi; the
    generated bispinor is unchanged because D* D Xi = (box - m^2) Xi = 0."""
    if abs(pq.m - xi.m) > 1e-12:
        raise ValueError("gauge quadruple must carry the same mass")
    require_kg_solutions(list(xi.phi), pq.m, "gauge_shift_4d functions")
    shift = _dirac_4d_component_fields(xi.phi, pq.m, "D")
    return PotentialQuad4D(tuple(pq.phi[j] + shift[j] for j in range(4)), pq.m)


def chain_next(sol: DiracSolutionChiral, comp: int = 1, slot: str = "lower") -> DiracSolutionChiral:
    """Next link of a solution chain: promote one component of b to a fresh
    generating spinor (zero in the other slot) and regenerate.

    The promoted component is used as-is, with no rescaling; comparisons
    against independently normalized closed forms are therefore expected to
    agree only up to one global complex constant.
    """
    if comp not in (1, 2):
        raise ValueError(f"comp must be 1 or 2, got {comp}")
    if slot not in ("upper", "lower"):
        raise ValueError(f"slot must be 'upper' or 'lower', got {slot}")
    f = sol.b.c1 if comp == 1 else sol.b.c2
    a = Spinor2Field.upper(f) if slot == "upper" else Spinor2Field.lower(f)
    b = (1j / sol.m) * weyl_field(a, WEYL_PRINCIPAL)
    return DiracSolutionChiral(a, b, sol.m)
