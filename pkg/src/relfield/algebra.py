"""Spacetime points, Pauli/SL(2,C) matrix algebra and the Hermitian
coordinate-matrix correspondence.

Conventions: metric diag(+1,-1,-1,-1), natural units c = hbar = 1.  A point
p = (t,x,y,z) is represented by the Hermitian matrix X = t*I + x*s1 + y*s2
+ z*s3 whose determinant is the Minkowski interval t^2 - x^2 - y^2 - z^2.
Unit-determinant 2x2 matrices act on X by X -> S X S+, which double-covers
the proper Lorentz group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnimodularityError

# Determinant tolerances: tight on construction (closed-form matrices),
# looser on consumption (products of several group elements).
DET_TOL_CONSTRUCT = 1e-12
DET_TOL_CONSUME = 1e-10

Mat2C = np.ndarray  # shape (2, 2), complex128, dense row-major


@dataclass(frozen=True)
class SpacetimePoint:
    """A point of Minkowski space; all components must be finite."""

    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {name}={v!r}")
            object.__setattr__(self, name, v)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_array(arr) -> "SpacetimePoint":
        t, x, y, z = (float(v) for v in arr)
        return SpacetimePoint(t, x, y, z)

    @property
    def r(self) -> float:
        """Spatial radius sqrt(x^2+y^2+z^2)."""
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)


@dataclass(frozen=True)
class NullCoords:
    """Null coordinates u = t+z, v = t-z, w = x+iy (wbar = conj(w))."""

    u: float
    v: float
    w: complex

    @property
    def wbar(self) -> complex:
        return self.w.conjugate()

    @staticmethod
    def from_point(p: SpacetimePoint) -> "NullCoords":
        return NullCoords(p.t + p.z, p.t - p.z, complex(p.x, p.y))

    def to_point(self) -> SpacetimePoint:
        return SpacetimePoint(
            (self.u + self.v) / 2.0,
            self.w.real,
            self.w.imag,
            (self.u - self.v) / 2.0,
        )


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

IDENTITY2 = np.eye(2, dtype=complex)


def pauli(i: int) -> Mat2C:
    """Pauli matrix sigma_i for i in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {i}")
    return _PAULI[i - 1].copy()


def det2(m: Mat2C) -> complex:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _require_unimodular(m: Mat2C, tol: float) -> None:
    if abs(det2(m) - 1.0) > tol:
        raise UnimodularityError(f"matrix determinant {det2(m)} is not 1 within {tol}")


def coord_matrix(p: SpacetimePoint) -> Mat2C:
    """Hermitian coordinate matrix X = t + sigma.r with det = interval."""
    return np.array(
        [
            [p.t + p.z, p.x - 1j * p.y],
            [p.x + 1j * p.y, p.t - p.z],
        ],
        dtype=complex,
    )


def point_from_matrix(X: Mat2C, tol: float = 1e-10) -> SpacetimePoint:
    """Inverse of coord_matrix; X must be Hermitian within tol."""
    X = np.asarray(X, dtype=complex)
    if np.max(np.abs(X - X.conj().T)) > tol:
        raise ValueError("coordinate matrix is not Hermitian")
    t = (X[0, 0] + X[1, 1]).real / 2.0
    z = (X[0, 0] - X[1, 1]).real / 2.0
    x = X[1, 0].real
    y = X[1, 0].imag
    return SpacetimePoint(t, x, y, z)


def _unit_axis(axis) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,):
        raise ValueError("axis must be a 3-vector")
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ValueError(f"axis must be a unit vector, |axis| = {np.linalg.norm(n)}")
    return n


def _sigma_dot(n: np.ndarray) -> Mat2C:
    return n[0] * _PAULI[0] + n[1] * _PAULI[1] + n[2] * _PAULI[2]


def sl2c_rotation(axis, angle: float) -> Mat2C:
    """Spinor rotation exp(-i*angle/2 * sigma.axis); unitary, det 1.

    Rotation about z by angle phi is diag(e^{-i phi/2}, e^{+i phi/2}).
    """
    n = _unit_axis(axis)
    half = angle / 2.0
    S = math.cos(half) * IDENTITY2 - 1j * math.sin(half) * _sigma_dot(n)
    _require_unimodular(S, DET_TOL_CONSTRUCT)
    return S


def sl2c_boost(axis, rapidity: float) -> Mat2C:
    """Spinor boost exp(-rapidity/2 * sigma.axis); Hermitian, det 1.

    Boost along z with rapidity theta is diag(e^{-theta/2}, e^{+theta/2});
    it carries velocity V = tanh(theta).
    """
    n = _unit_axis(axis)
    half = rapidity / 2.0
    S = math.cosh(half) * IDENTITY2 - math.sinh(half) * _sigma_dot(n)
    _require_unimodular(S, DET_TOL_CONSTRUCT)
    return S


def lorentz_map(S: Mat2C, p: SpacetimePoint) -> SpacetimePoint:
    """Apply the Lorentz transformation of S: X -> S X S+.

    Preserves the Minkowski interval det(coord_matrix).
    """
    _require_unimodular(S, DET_TOL_CONSUME)
    X = coord_matrix(p)
    Y = S @ X @ S.conj().T
    return point_from_matrix(Y)


def lorentz_matrix(S: Mat2C) -> np.ndarray:
    """The real 4x4 matrix of the map X -> S X S+ on (t,x,y,z)."""
    _require_unimodular(S, DET_TOL_CONSUME)
    cols = []
    for mu in range(4):
        e = [0.0] * 4
        e[mu] = 1.0
        q = lorentz_map(S, SpacetimePoint(*e))
        cols.append(q.as_array())
    return np.column_stack(cols)
