import math

import numpy as np
import pytest

from conftest import seeded_points

from relfield.algebra import SpacetimePoint
from relfield.errors import PreconditionError
from relfield import fields, operators, verify
from relfield.fields import ScalarField, Spinor2Field
from relfield.fields import T_SYM, X_SYM
from relfield.generator import (
    PotentialPairChiral,
    PotentialQuad4D,
    chain_next,
    complete_to_dirac,
    dirac_from_potentials_4d,
    dirac_from_potentials_chiral,
    gauge_shift_4d,
    gauge_shift_chiral,
    potentials_from_bispinor,
    potentials_from_chiral,
)


def _points_for(*objs, count=100, seed=41):
    return seeded_points([o.singular_set for o in objs], count=count, seed=seed)


def _arr(pts):
    return np.array([p.as_array() for p in pts])


def _plane_wave_doublet(m, k1=(0.2, -0.1, 0.4), k2=(-0.3, 0.5, 0.1)):
    return Spinor2Field(fields.plane_wave_kg(m, k1), fields.plane_wave_kg(m, k2))


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------

def test_complete_rest_frame_plane_wave_reproduces_itself():
    m = 1.0
    a = Spinor2Field.lower(fields.plane_wave_kg(m))
    sol = complete_to_dirac(a, m)
    pts = _points_for(sol)
    d, _ = verify.compare_fields(sol.b, sol.a, pts, mode="absolute")
    assert d <= 1e-14


def test_complete_yukawa_matches_catalog():
    m = 1.0
    sol = complete_to_dirac(Spinor2Field.lower(fields.yukawa(m, 1.0)), m)
    cat = fields.yukawa_spinor(m, 1.0)
    d, _ = verify.compare_fields(sol, cat, _points_for(cat), mode="absolute")
    assert d <= 1e-10


@pytest.mark.parametrize("psi", [0.0, 0.4, 1.2])
def test_complete_broglie_matches_catalog(psi):
    m = 1.0
    sol = complete_to_dirac(Spinor2Field.lower(fields.broglie_kg(m, psi)), m)
    cat = fields.spinor_broglie(m, psi)
    d, _ = verify.compare_fields(sol, cat, _points_for(cat), mode="absolute")
    assert d <= 1e-10


def test_spinor_broglie_zero_angle_is_short_range_spinor():
    a = fields.spinor_broglie(1.0, 0.0)
    b = fields.yukawa_spinor(1.0, -1.0)
    d, _ = verify.compare_fields(a, b, _points_for(a), mode="absolute")
    assert d <= 1e-12


def test_complete_rejects_non_solution():
    bad = Spinor2Field.lower(ScalarField(T_SYM**2))
    with pytest.raises(PreconditionError):
        complete_to_dirac(bad, 1.0)


def test_complete_rejects_wrong_mass():
    # a mass-1 entry fed into a mass-2 completion is not wave-valid
    a = Spinor2Field.lower(fields.yukawa(1.0, 1.0))
    with pytest.raises(PreconditionError):
        complete_to_dirac(a, 2.0)
    with pytest.raises(ValueError):
        complete_to_dirac(a, -1.0)


def test_generation_soundness_sweep():
    m = 1.0
    for name, builder in fields.SCALAR_CATALOG.items():
        f = builder(m) if name not in ("broglie",) else builder(m, 0.5)
        sol = complete_to_dirac(Spinor2Field.lower(f), m)
        rep = verify.sweep_dirac_residual(sol, verify.SampleConfig(seed=5, count=200))
        assert rep.max_rel <= 1e-9, name


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

def test_potentials_identification():
    # beta = 0, alpha = (i/m) a0 reproduces (a0, (i/m) W a0)
    m = 1.0
    a0 = _plane_wave_doublet(m)
    pp = PotentialPairChiral(alpha=(1j / m) * a0, beta=Spinor2Field.zero(), m=m)
    sol = dirac_from_potentials_chiral(pp)
    ref = complete_to_dirac(a0, m)
    d, _ = verify.compare_fields(sol, ref, _points_for(sol), mode="absolute")
    assert d <= 1e-12


def test_potentials_zero():
    pp = PotentialPairChiral(Spinor2Field.zero(), Spinor2Field.zero(), 1.0)
    sol = dirac_from_potentials_chiral(pp)
    assert all(c.is_zero() for c in sol.components())


def test_potentials_generate_solutions():
    m = 1.0
    pp = PotentialPairChiral(_plane_wave_doublet(m), _plane_wave_doublet(m, (0.7, 0, 0), (0, 0.2, 0.6)), m)
    sol = dirac_from_potentials_chiral(pp)
    rep = verify.sweep_dirac_residual(sol, verify.SampleConfig(seed=6, count=100))
    assert rep.max_rel <= 1e-10


def test_potentials_roundtrip():
    for sol in (fields.yukawa_spinor(1.0, 1.0), fields.spinor_broglie(1.0, math.pi / 4)):
        pp = potentials_from_chiral(sol)
        assert pp.beta.c1.is_zero() and pp.beta.c2.is_zero()
        back = dirac_from_potentials_chiral(pp)
        d, _ = verify.compare_fields(back, sol, _points_for(sol), mode="absolute")
        assert d <= 1e-10


def test_potentials_from_chiral_formula():
    sol = fields.yukawa_spinor(1.0, 1.0)
    pp = potentials_from_chiral(sol)
    p = SpacetimePoint(0, 0, 0, 1)
    np.testing.assert_allclose(pp.alpha.eval(p), 1j * sol.a.eval(p))


# ---------------------------------------------------------------------------
# gauge freedom
# ---------------------------------------------------------------------------

def _generated(pp):
    return dirac_from_potentials_chiral(pp)


def test_gauge_shift_identity():
    sol = fields.yukawa_spinor(1.0, 1.0)
    pp = potentials_from_chiral(sol)
    shifted = gauge_shift_chiral(pp, Spinor2Field.zero(), Spinor2Field.zero())
    d, _ = verify.compare_fields(_generated(shifted), _generated(pp), _points_for(sol),
                                 mode="absolute")
    assert d == 0.0


@pytest.mark.parametrize("use_pi", [True, False])
def test_gauge_invariance_chiral(use_pi):
    m = 1.0
    sol = fields.yukawa_spinor(m, 1.0)
    pp = potentials_from_chiral(sol)
    gauge = _plane_wave_doublet(m) if use_pi else Spinor2Field.lower(fields.coulomb_kg(m, +1))
    pi = gauge if use_pi else Spinor2Field.zero()
    rho = Spinor2Field.zero() if use_pi else gauge
    shifted = gauge_shift_chiral(pp, pi, rho)
    out = _generated(shifted)
    pts = seeded_points([sol.singular_set, gauge.singular_set], count=200, seed=43)
    d, _ = verify.compare_fields(out, sol, pts, mode="absolute")
    assert d <= 1e-9


def test_gauge_shift_rejects_invalid_functions():
    pp = potentials_from_chiral(fields.yukawa_spinor(1.0, 1.0))
    bad = Spinor2Field.lower(ScalarField(X_SYM**3))
    with pytest.raises(PreconditionError):
        gauge_shift_chiral(pp, bad, Spinor2Field.zero())


# ---------------------------------------------------------------------------
# 4D route
# ---------------------------------------------------------------------------

def test_4d_generation_from_plane_waves(rng):
    m = 1.0
    quad = tuple(fields.plane_wave_kg(m, tuple(rng.uniform(-1, 1, 3))) for _ in range(4))
    psi = dirac_from_potentials_4d(PotentialQuad4D(quad, m))
    pts = _arr(seeded_points([], count=100, seed=47))
    outs = operators.dirac_4d_field(psi, "D")
    worst = max(np.max(np.abs(f.eval_many(pts))) for f in outs)
    assert worst <= 1e-10


def test_4d_zero_potentials():
    psi = dirac_from_potentials_4d(PotentialQuad4D((ScalarField(0),) * 4, 1.0))
    assert all(c.is_zero() for c in psi.psi)


def test_4d_solution_seeds_its_own_potentials():
    # Phi = psi/(2m) gives D* Phi = psi back
    m = 1.0
    psi0 = operators.bispinor_from_chiral(fields.yukawa_spinor(m, 1.0))
    quad = PotentialQuad4D(tuple((1.0 / (2 * m)) * c for c in psi0.psi), m)
    psi = dirac_from_potentials_4d(quad)
    pts = _points_for(psi0, count=60)
    d, _ = verify.compare_fields(psi, psi0, pts, mode="absolute")
    assert d <= 1e-10


@pytest.mark.parametrize("sign", [+1, -1])
def test_projected_potentials_regenerate(sign):
    m = 1.0
    psi = operators.bispinor_from_chiral(fields.yukawa_spinor(m, 1.0))
    quad = potentials_from_bispinor(psi, sign)
    back = dirac_from_potentials_4d(quad)
    d, _ = verify.compare_fields(back, psi, _points_for(psi, count=80), mode="absolute")
    assert d <= 1e-9


def test_projected_potentials_have_rank_two_support():
    m = 1.0
    psi = operators.bispinor_from_chiral(fields.yukawa_spinor(m, 1.0))
    quad = potentials_from_bispinor(psi, +1)
    pts = _arr(_points_for(psi, count=30))
    vals = np.column_stack([c.eval_many(pts) for c in quad.phi])
    # projector rank 2: upper pair equals minus the lower pair
    np.testing.assert_allclose(vals[:, 0], -vals[:, 2], atol=1e-13)
    np.testing.assert_allclose(vals[:, 1], -vals[:, 3], atol=1e-13)


def test_projection_of_zero_is_zero():
    psi = fields.BispinorField((ScalarField(0),) * 4, 1.0)
    quad = potentials_from_bispinor(psi, +1)
    assert all(c.is_zero() for c in quad.phi)


def test_gauge_invariance_4d(rng):
    m = 1.0
    psi0 = operators.bispinor_from_chiral(fields.yukawa_spinor(m, 1.0))
    quad = potentials_from_bispinor(psi0, -1)
    xi = PotentialQuad4D(
        tuple(fields.plane_wave_kg(m, tuple(rng.uniform(-1, 1, 3))) for _ in range(4)), m)
    shifted = gauge_shift_4d(quad, xi)
    regen = dirac_from_potentials_4d(shifted)
    d, _ = verify.compare_fields(regen, psi0, _points_for(psi0, count=200), mode="absolute")
    assert d <= 1e-9


def test_gauge_shift_4d_piece_is_annihilated(rng):
    # D*(D Xi) = (box - m^2) Xi = 0 directly at sample points
    m = 1.0
    xi = tuple(fields.plane_wave_kg(m, tuple(rng.uniform(-1, 1, 3))) for _ in range(4))
    step = operators._dirac_4d_component_fields(xi, m, "D")
    annihilate = operators._dirac_4d_component_fields(step, m, "D*")
    pts = _arr(seeded_points([], count=50, seed=53))
    assert max(np.max(np.abs(f.eval_many(pts))) for f in annihilate) <= 1e-10


def test_4d_chiral_pipelines_agree():
    # the 4D generation with Phi = (P, Q) matches the 2-spinor pipeline with
    # alpha = (i/2)(P+Q), beta = (i/2)(P-Q)
    m = 1.0
    P = _plane_wave_doublet(m)
    Q = _plane_wave_doublet(m, (0.1, 0.1, 0.1), (0.4, -0.2, 0.3))
    quad = PotentialQuad4D((P.c1, P.c2, Q.c1, Q.c2), m)
    via_4d = operators.chiral_from_bispinor(dirac_from_potentials_4d(quad))
    pp = PotentialPairChiral(alpha=0.5j * (P + Q), beta=0.5j * (P - Q), m=m)
    via_chiral = dirac_from_potentials_chiral(pp)
    pts = seeded_points([], count=80, seed=59)
    d, _ = verify.compare_fields(via_4d, via_chiral, pts, mode="absolute")
    assert d <= 1e-10


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

def test_chain_promotes_z_component():
    nxt = chain_next(fields.yukawa_spinor(1.0, 1.0), comp=2, slot="lower")
    # promoted entry ~ z(1+r)e^{-r}/r^3 up to a constant
    p = SpacetimePoint(0, 0, 0, 1.5)
    r = 1.5
    expected = r * (1 + r) * math.exp(-r) / r**3  # z = r on the axis
    ratio = nxt.a.c2.eval(p) / expected
    p2 = SpacetimePoint(0, 1.0, 0.5, -0.7)
    expected2 = -0.7 * (1 + p2.r) * math.exp(-p2.r) / p2.r**3
    ratio2 = nxt.a.c2.eval(p2) / expected2
    assert ratio == pytest.approx(ratio2, rel=1e-12)
    rep = verify.sweep_dirac_residual(nxt, verify.SampleConfig(seed=61, count=100))
    assert rep.max_rel <= 1e-10
    assert nxt.a.c1.is_zero()


def test_chain_matches_catalog_level2():
    nxt = chain_next(fields.yukawa_spinor(1.0, -1.0), comp=1, slot="lower")
    cat = fields.chain_yukawa_2(1.0)
    pts = _points_for(cat, count=80)
    d, const = verify.compare_fields(nxt, cat, pts, mode="up_to_global_constant")
    assert d <= 1e-9
    # promoted component carried its generation constant i/m along
    assert const == pytest.approx(1j, abs=1e-12)


def test_chain_fixed_point():
    m = 1.0
    sol = complete_to_dirac(Spinor2Field.lower(fields.plane_wave_kg(m)), m)
    for _ in range(3):
        sol = chain_next(sol, comp=2, slot="lower")
        pts = seeded_points([], count=30, seed=67)
        d, _ = verify.compare_fields(sol.b, sol.a, pts, mode="absolute")
        assert d <= 1e-13


def test_chain_closure_components_stay_wave_valid():
    sol = fields.yukawa_spinor(1.0, 1.0)
    for level in range(3):
        sol = chain_next(sol, comp=1, slot="lower")
        pts = _arr(_points_for(sol, count=100, seed=71))
        for c in sol.components():
            if c.is_zero():
                continue
            res = operators.kg_residual_field(c, sol.m)
            scale = np.maximum(np.abs(c.eval_many(pts)), 1e-30)
            assert np.max(np.abs(res.eval_many(pts)) / scale) <= 1e-9, level


def test_chain_argument_validation():
    sol = fields.yukawa_spinor(1.0, 1.0)
    with pytest.raises(ValueError):
        chain_next(sol, comp=3)
    with pytest.raises(ValueError):
        chain_next(sol, slot="middle")
