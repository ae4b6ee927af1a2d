import numpy as np
import pytest

from relfield.algebra import SpacetimePoint
from relfield.verify import SampleConfig, sample_points


def seeded_points(singular_sets, count=100, seed=1234, **kw):
    return sample_points(SampleConfig(seed=seed, count=count, **kw), singular_sets)


def fd_second(f, p: SpacetimePoint, direction: str, h: float = 1e-3) -> complex:
    """Order-4 central second-difference; independent of the exact path."""
    idx = {"t": 0, "x": 1, "y": 2, "z": 3}[direction]

    def at(k):
        arr = p.as_array()
        arr[idx] += k * h
        return f.eval(SpacetimePoint.from_array(arr))

    return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h)


def fd_kg_residual(f, m: float, p: SpacetimePoint, h: float = 1e-3) -> complex:
    """Finite-difference wave residual (laplacian - d_t^2 - m^2) f."""
    return (fd_second(f, p, "x", h) + fd_second(f, p, "y", h) + fd_second(f, p, "z", h)
            - fd_second(f, p, "t", h) - m * m * f.eval(p))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
