import math

import numpy as np
import pytest

from conftest import seeded_points

from relfield.algebra import SpacetimePoint, sl2c_boost, sl2c_rotation
from relfield.errors import PreconditionError, UnimodularityError
from relfield import fields, generator, verify
from relfield.fields import Spinor2Field
from relfield.reports import boosted_yukawa_closed_form
from relfield.transforms import (
    TransformLaw,
    restoring_mix,
    scalar_transport,
    transform_alternative,
    transform_canonical,
    transform_general,
)

M_ = 1.0
Z = (0.0, 0.0, 1.0)
X_AX = (1.0, 0.0, 0.0)
IDENTITY = np.eye(2, dtype=complex)


@pytest.fixture(scope="module")
def ys():
    return fields.yukawa_spinor(M_, 1.0)


@pytest.fixture(scope="module")
def stereo_sol():
    return generator.complete_to_dirac(
        Spinor2Field.lower(fields.stereo_kg(M_, +1)), M_)


def _pts(*objs, count=80, seed=101):
    return seeded_points([o.singular_set for o in objs], count=count, seed=seed)


# ---------------------------------------------------------------------------
# scalar transport
# ---------------------------------------------------------------------------

def test_scalar_transport_identity():
    f = fields.yukawa(M_, 1.0)
    g = scalar_transport(f, IDENTITY)
    for p in _pts(f, count=20):
        assert g.eval(p) == f.eval(p)


def test_scalar_transport_rotation_fixes_radial_field():
    f = fields.yukawa(M_, 1.0)
    g = scalar_transport(f, sl2c_rotation(Z, 1.23))
    for p in _pts(f, count=30):
        assert g.eval(p) == pytest.approx(f.eval(p), rel=1e-13)


def test_scalar_transport_boost_deforms_argument():
    th = 0.8
    V = math.tanh(th)
    f = fields.yukawa(M_, 1.0)
    g = scalar_transport(f, sl2c_boost(Z, th))
    for p in _pts(f, count=30, seed=103):
        zs = p.z - V * p.t
        rs = math.sqrt(p.x**2 + p.y**2 + zs**2 * math.cosh(th) ** 2)
        assert g.eval(p) == pytest.approx(-math.exp(-M_ * rs) / rs, rel=1e-12)


def test_scalar_transport_rejects_bad_matrix():
    with pytest.raises(UnimodularityError):
        scalar_transport(fields.yukawa(M_, 1.0), 2 * IDENTITY)


# ---------------------------------------------------------------------------
# canonical law
# ---------------------------------------------------------------------------

def test_canonical_identity(ys):
    out = transform_canonical(ys, IDENTITY)
    d, _ = verify.compare_fields(out, ys, _pts(ys), mode="absolute")
    assert d <= 1e-15


def test_canonical_rotation_phase(ys):
    phi = 0.9
    out = transform_canonical(ys, sl2c_rotation(Z, phi))
    d, c = verify.compare_fields(out, ys, _pts(ys), mode="up_to_global_constant")
    assert d <= 1e-10
    assert c == pytest.approx(np.exp(-1j * phi / 2), abs=1e-12)


def test_canonical_full_turn_flips_sign(ys):
    out = transform_canonical(ys, sl2c_rotation((0.6, 0.8, 0.0), 2 * math.pi))
    d, c = verify.compare_fields(out, ys, _pts(ys), mode="up_to_global_constant")
    assert d <= 1e-12
    assert c == pytest.approx(-1.0, abs=1e-12)


def test_canonical_boost_matches_closed_form(ys):
    for th in (0.3, 1.0):
        out = transform_canonical(ys, sl2c_boost(Z, th))
        ref = boosted_yukawa_closed_form(M_, 1.0, th, "canonical")
        d, _ = verify.compare_fields(out, ref, _pts(out, ref), mode="absolute")
        assert d <= 1e-9


def test_canonical_preserves_solutions(rng, ys):
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    axis2 = rng.normal(size=3)
    axis2 /= np.linalg.norm(axis2)
    S = sl2c_rotation(axis, rng.uniform(0, 6)) @ sl2c_boost(axis2, rng.uniform(-1, 1))
    out = transform_canonical(ys, S)
    rep = verify.sweep_dirac_residual(out, verify.SampleConfig(seed=3, count=200))
    assert rep.max_rel <= 1e-9


def test_canonical_composition(rng, ys):
    S1 = sl2c_rotation((0, 1, 0), 0.7)
    S2 = sl2c_boost(X_AX, 0.5)
    twice = transform_canonical(transform_canonical(ys, S1), S2)
    once = transform_canonical(ys, S1 @ S2)
    d, _ = verify.compare_fields(twice, once, _pts(twice, once), mode="absolute")
    assert d <= 1e-9


# ---------------------------------------------------------------------------
# alternative law
# ---------------------------------------------------------------------------

def test_alternative_rotation_invariance_any_axis(ys):
    for axis, angle in [(Z, 0.8), (X_AX, 1.7), ((0.6, 0.0, 0.8), 2.9)]:
        out = transform_alternative(ys, sl2c_rotation(axis, angle))
        d, _ = verify.compare_fields(out, ys, _pts(ys), mode="absolute")
        assert d <= 1e-10


def test_alternative_full_turn_is_identity(ys):
    out = transform_alternative(ys, sl2c_rotation((0.6, 0.8, 0.0), 2 * math.pi))
    d, _ = verify.compare_fields(out, ys, _pts(ys), mode="absolute")
    assert d <= 1e-12


def test_alternative_stereo_rotation_phase(stereo_sol):
    phi = 1.1
    out = transform_alternative(stereo_sol, sl2c_rotation(Z, phi))
    d, c = verify.compare_fields(out, stereo_sol, _pts(stereo_sol, out, seed=107),
                                 mode="up_to_global_constant")
    assert d <= 1e-9
    assert c == pytest.approx(np.exp(1j * phi), abs=1e-9)


def test_alternative_boost_matches_closed_form(ys):
    for th in (0.3, 1.0):
        out = transform_alternative(ys, sl2c_boost(Z, th))
        ref = boosted_yukawa_closed_form(M_, 1.0, th, "alternative")
        d, _ = verify.compare_fields(out, ref, _pts(out, ref), mode="absolute")
        assert d <= 1e-9


def test_alternative_vs_canonical_boost_factor(ys):
    for th in (0.3, 1.0):
        S = sl2c_boost(Z, th)
        alt = transform_alternative(ys, S)
        can = transform_canonical(ys, S)
        d, c = verify.compare_fields(alt, can, _pts(alt, can), mode="up_to_global_constant")
        assert d <= 1e-9
        assert c == pytest.approx(math.exp(-th / 2), abs=1e-10)


def test_alternative_requires_wave_valid_components(ys):
    broken = fields.DiracSolutionChiral(
        Spinor2Field.lower(fields.ScalarField(fields.T_SYM**2)), ys.b, M_)
    with pytest.raises(PreconditionError):
        transform_alternative(broken, sl2c_rotation(Z, 0.4))


def test_canonical_and_alternative_differ_essentially(stereo_sol):
    # rotation about an axis off the symmetry axis: no single global factor
    S = sl2c_rotation(X_AX, 0.8)
    can = transform_canonical(stereo_sol, S)
    alt = transform_alternative(stereo_sol, S)
    d, _ = verify.compare_fields(alt, can, _pts(can, alt, seed=109),
                                 mode="up_to_global_constant")
    assert d > 1e-3


def test_transformed_solutions_stay_solutions(stereo_sol):
    S = sl2c_rotation(X_AX, 0.8)
    for law in (transform_canonical, transform_alternative):
        out = law(stereo_sol, S)
        rep = verify.sweep_dirac_residual(out, verify.SampleConfig(seed=11, count=150))
        assert rep.max_rel <= 1e-9


# ---------------------------------------------------------------------------
# general law
# ---------------------------------------------------------------------------

def test_general_with_identity_mix_is_alternative(ys):
    S = sl2c_boost(Z, 0.6)
    gen = transform_general(ys, S, IDENTITY)
    alt = transform_alternative(ys, S)
    d, _ = verify.compare_fields(gen, alt, _pts(gen, alt), mode="absolute")
    assert d == 0.0


def test_general_with_restoring_mix_is_canonical(ys):
    for S in (sl2c_rotation(Z, 0.9), sl2c_boost(Z, 0.7),
              sl2c_rotation((0, 1, 0), 0.4) @ sl2c_boost(X_AX, 0.3)):
        gen = transform_general(ys, S, restoring_mix(S))
        can = transform_canonical(ys, S)
        d, _ = verify.compare_fields(gen, can, _pts(gen, can), mode="absolute")
        assert d <= 1e-10


def test_general_pure_internal_mix(ys):
    # M acts algebraically at fixed coordinates
    M = sl2c_rotation(Z, math.pi)  # diag(-i, i)
    gen = transform_general(ys, IDENTITY, M)
    p = SpacetimePoint(0.2, 0.4, -0.3, 1.1)
    np.testing.assert_allclose(gen.a.eval(p), M @ ys.a.eval(p), atol=1e-14)
    rep = verify.sweep_dirac_residual(gen, verify.SampleConfig(seed=13, count=100))
    assert rep.max_rel <= 1e-10


def test_general_rejects_non_unimodular_mix(ys):
    with pytest.raises(UnimodularityError):
        transform_general(ys, IDENTITY, 3.0 * IDENTITY)


def test_transform_law_dispatch(ys):
    S = sl2c_rotation(Z, 0.5)
    law = TransformLaw("canonical", S)
    out = law.apply(ys)
    ref = transform_canonical(ys, S)
    d, _ = verify.compare_fields(out, ref, _pts(ys), mode="absolute")
    assert d == 0.0
    with pytest.raises(ValueError):
        TransformLaw("sideways", S)
