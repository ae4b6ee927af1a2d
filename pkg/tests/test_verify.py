import numpy as np
import pytest

from relfield.errors import PreconditionError, SamplingBudgetError
from relfield import fields
from relfield.fields import (
    NEGATIVE_Z_AXIS,
    ORIGIN_WORLDLINE,
    CustomSingularSet,
    ScalarField,
    T_SYM,
)
from relfield.verify import (
    SampleConfig,
    compare_fields,
    require_kg_solutions,
    residual_stats,
    sample_array,
    sample_points,
)


def test_sample_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(seed=1, count=0)
    with pytest.raises(ValueError):
        SampleConfig(seed=1, count=10, exclusion_radius=0.0)


def test_sampling_is_deterministic():
    cfg = SampleConfig(seed=99, count=50)
    a = sample_points(cfg, [ORIGIN_WORLDLINE])
    b = sample_points(cfg, [ORIGIN_WORLDLINE])
    assert a == b
    c = sample_points(SampleConfig(seed=100, count=50), [ORIGIN_WORLDLINE])
    assert a != c


def test_sampling_respects_exclusion():
    cfg = SampleConfig(seed=3, count=200, exclusion_radius=0.5)
    pts, rejected = sample_array(cfg, [ORIGIN_WORLDLINE, NEGATIVE_Z_AXIS])
    assert pts.shape == (200, 4)
    assert np.all(ORIGIN_WORLDLINE.distance(pts) > 0.5)
    assert np.all(NEGATIVE_Z_AXIS.distance(pts) > 0.5)
    assert rejected >= 0


def test_sampling_budget_exhaustion():
    everywhere = CustomSingularSet(lambda pts: np.zeros(pts.shape[0]), "everywhere")
    with pytest.raises(SamplingBudgetError):
        sample_points(SampleConfig(seed=1, count=10), [everywhere])


def test_sampling_within_box():
    cfg = SampleConfig(seed=7, count=100, box_half_width=1.5, time_window=0.5)
    pts, _ = sample_array(cfg, [])
    assert np.all(np.abs(pts[:, 0]) <= 0.5)
    assert np.all(np.abs(pts[:, 1:]) <= 1.5)


def test_residual_stats_zero():
    pts = np.zeros((10, 4))
    rep = residual_stats(lambda p: np.zeros(p.shape[0]), pts)
    assert rep.max_abs == rep.mean_abs == rep.p99_abs == 0.0
    assert rep.points_used == 10


def test_residual_stats_constant():
    pts = np.zeros((10, 4))
    rep = residual_stats(lambda p: np.ones(p.shape[0], dtype=complex), pts)
    assert rep.max_abs == rep.mean_abs == 1.0


def test_residual_stats_vector_reduction_and_scales():
    pts = np.zeros((4, 4))
    resid = np.array([[1.0, 2.0], [0.5, 0.1], [3.0, 0.0], [0.0, 0.0]], dtype=complex)
    rep = residual_stats(lambda p: resid, pts, scales=np.array([2.0, 1.0, 3.0, 1.0]))
    assert rep.max_abs == 3.0
    assert rep.max_rel == 1.0
    assert rep.mean_abs == pytest.approx(np.mean([2.0, 0.5, 3.0, 0.0]))


def test_residual_stats_report_ordering():
    rng = np.random.default_rng(0)
    vals = np.abs(rng.lognormal(size=500)).astype(complex)
    rep = residual_stats(lambda p: vals, np.zeros((500, 4)))
    assert rep.max_abs >= rep.p99_abs >= 0.0
    assert rep.max_abs >= rep.mean_abs >= 0.0


def test_residual_stats_empty_points():
    with pytest.raises(ValueError):
        residual_stats(lambda p: np.zeros(0), np.zeros((0, 4)))


def test_compare_fields_identity_and_scaling():
    f = fields.coulomb_kg(1.0, +1)
    pts = sample_points(SampleConfig(seed=5, count=30), [f.singular_set])
    d, c = compare_fields(f, f, pts, mode="absolute")
    assert d == 0.0 and c is None
    g = 2j * f
    d, c = compare_fields(g, f, pts, mode="up_to_global_constant")
    assert d <= 1e-12
    assert c == pytest.approx(2j)


def test_compare_fields_rejects_zero_reference():
    f = fields.coulomb_kg(1.0, +1)
    zero = ScalarField(0)
    pts = sample_points(SampleConfig(seed=5, count=10), [f.singular_set])
    with pytest.raises(ValueError):
        compare_fields(f, zero, pts, mode="up_to_global_constant")
    with pytest.raises(ValueError):
        compare_fields(f, f, [], mode="absolute")
    with pytest.raises(ValueError):
        compare_fields(f, f, pts, mode="sideways")


def test_exclusion_shrink_monotonicity_informational():
    # shrinking the tube only adds near-singular points: max_abs cannot drop
    sol = fields.yukawa_spinor(1.0, 1.0)
    from relfield.verify import sweep_dirac_residual

    wide = sweep_dirac_residual(sol, SampleConfig(seed=13, count=200, exclusion_radius=0.5))
    narrow = sweep_dirac_residual(sol, SampleConfig(seed=13, count=200, exclusion_radius=0.05))
    assert narrow.max_abs >= wide.max_abs * 0.5  # conditioning, not correctness


def test_require_kg_solutions():
    require_kg_solutions([fields.coulomb_kg(1.0, +1)], 1.0, "test")
    require_kg_solutions([ScalarField(0)], 1.0, "test")
    with pytest.raises(PreconditionError):
        require_kg_solutions([ScalarField(T_SYM**2)], 1.0, "test")
    # wrong mass is rejected too
    with pytest.raises(PreconditionError):
        require_kg_solutions([fields.yukawa(2.0, 1.0)], 1.0, "test")


def test_thread_cap_does_not_change_results(monkeypatch):
    sol = fields.yukawa_spinor(1.0, 1.0)
    from relfield.verify import sweep_dirac_residual

    base = sweep_dirac_residual(sol, SampleConfig(seed=17, count=100))
    monkeypatch.setenv("RELFIELD_THREADS", "4")
    threaded = sweep_dirac_residual(sol, SampleConfig(seed=17, count=100))
    assert base == threaded
