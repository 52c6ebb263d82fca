"""Qubit effects in Bloch form and fiducial vector-set POVMs.

A two-dimensional effect is ``r*1 + s*(n . sigma)``; its eigenvalues ``r +- s``
lie in [0, 1] exactly on the double cone ``0 <= s <= min(r, 1 - r)``.
A set of N unit vectors summing to zero gives the POVM ``(1/N)(1 + n_j . sigma)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IncompleteVectorSet,
    NotRotation,
    NotUnitVector,
    OutsideCone,
)
from .operators import Effect, Povm, as_effect, validate_povm

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = np.array([SIGMA_X, SIGMA_Y, SIGMA_Z])
for _m in (SIGMA_X, SIGMA_Y, SIGMA_Z, PAULI):
    _m.setflags(write=False)

E_X = np.array([1.0, 0.0, 0.0])
E_Y = np.array([0.0, 1.0, 0.0])
E_Z = np.array([0.0, 0.0, 1.0])

TOL_UNIT = 1e-12
TOL_CONE = 1e-12
AXIS_EPS = 1e-14


def tol_sum(n: int) -> float:
    return 1e-9 * n


tol_iso = tol_sum


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def pauli_dot(v) -> np.ndarray:
    """``v . sigma`` for a real 3-vector."""
    return np.tensordot(np.asarray(v, dtype=float), PAULI, axes=1)


@dataclass(frozen=True, eq=False)
class BlochEffect:
    """Bloch coordinates ``(r, s, axis)`` of a qubit effect.

    ``axis_arbitrary`` is set when ``s`` is too small to determine the axis,
    in which case ``axis`` is ``e_z``.
    """

    r: float
    s: float
    axis: np.ndarray
    axis_arbitrary: bool = False

    def __post_init__(self):
        axis = _readonly(self.axis)
        if axis.shape != (3,) or not abs(np.linalg.norm(axis) - 1) <= TOL_UNIT:
            raise NotUnitVector(f"axis must be a unit 3-vector, got {axis}")
        object.__setattr__(self, "axis", axis)
        r, s = float(self.r), float(self.s)
        if not (-TOL_CONE <= r <= 1 + TOL_CONE and -TOL_CONE <= s <= min(r, 1 - r) + TOL_CONE):
            raise OutsideCone(f"(r={r:.6g}, s={s:.6g}) is outside the double cone 0 <= s <= min(r, 1-r)")

    @property
    def vector(self) -> np.ndarray:
        return self.s * self.axis


def effect_from_bloch(b: BlochEffect) -> Effect:
    return Effect(b.r * np.eye(2) + b.s * pauli_dot(b.axis))


def bloch_from_effect(e) -> BlochEffect:
    e = as_effect(e)
    if e.dim != 2:
        raise DimensionMismatch(f"Bloch form needs a 2-dimensional effect, got d={e.dim}")
    m = e.matrix
    r = float(np.trace(m).real) / 2
    vec = np.array([np.sum(m * p.T).real / 2 for p in PAULI])
    s = float(np.linalg.norm(vec))
    if s < AXIS_EPS:
        return BlochEffect(r, 0.0, E_Z, axis_arbitrary=True)
    return BlochEffect(r, s, vec / s)


@dataclass(frozen=True, eq=False)
class UnitVectorSet:
    """N >= 2 unit 3-vectors summing to zero (a fiducial qubit POVM)."""

    vectors: np.ndarray

    def __post_init__(self):
        v = _readonly(self.vectors)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 2:
            raise DimensionMismatch(f"need an (N, 3) array with N >= 2, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NotUnitVector("vectors contain non-finite entries")
        norms = np.linalg.norm(v, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > TOL_UNIT)
        if bad.size:
            j = int(bad[0])
            raise NotUnitVector(f"vectors[{j}] has length {norms[j]:.15g}")
        total = v.sum(axis=0)
        resid = float(np.max(np.abs(total)))
        if resid > tol_sum(len(v)):
            raise IncompleteVectorSet(
                f"completeness violated: vectors sum to {np.array2string(total, precision=6)}, not 0"
            )
        object.__setattr__(self, "vectors", v)

    @classmethod
    def normalized(cls, vectors) -> "UnitVectorSet":
        v = np.asarray(vectors, dtype=float)
        return cls(v / np.linalg.norm(v, axis=1, keepdims=True))

    def __len__(self):
        return self.vectors.shape[0]

    def __iter__(self):
        return iter(self.vectors)


@dataclass(frozen=True, eq=False)
class Rotation3:
    """Proper rotation of R^3, acting actively on column vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.shape != (3, 3):
            raise NotRotation(f"expected 3x3, got {m.shape}")
        if np.max(np.abs(m @ m.T - np.eye(3))) > 1e-12 or abs(np.linalg.det(m) - 1) > 1e-12:
            raise NotRotation("matrix is not in SO(3)")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def about(cls, axis, angle: float) -> "Rotation3":
        """Right-handed rotation by ``angle`` radians about ``axis`` (Rodrigues)."""
        k = np.asarray(axis, dtype=float)
        k = k / np.linalg.norm(k)
        kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
        return cls(np.eye(3) + np.sin(angle) * kx + (1 - np.cos(angle)) * (kx @ kx))

    @classmethod
    def identity(cls) -> "Rotation3":
        return cls(np.eye(3))

    @classmethod
    def random(cls, rng) -> "Rotation3":
        from .sampling import random_rotation_matrix

        return cls(random_rotation_matrix(rng))

    def apply(self, v) -> np.ndarray:
        return np.asarray(v, dtype=float) @ self.matrix.T


def effects_from_vector_set(vs: UnitVectorSet) -> Povm:
    n = len(vs)
    return validate_povm([(np.eye(2) + pauli_dot(v)) / n for v in vs.vectors])


def rotate_set(vs: UnitVectorSet, rot: Rotation3) -> UnitVectorSet:
    return UnitVectorSet.normalized(rot.apply(vs.vectors))


def second_moment(vs: UnitVectorSet) -> tuple[np.ndarray, bool]:
    """``M_kl = sum_j n_jk n_jl`` and whether it equals ``(N/3) I``.

    Isotropy is the same statement as the vanishing of every l = 2 harmonic sum.
    """
    v = vs.vectors
    m = v.T @ v
    n = len(v)
    iso = bool(np.max(np.abs(m - n / 3 * np.eye(3))) <= tol_iso(n))
    return m, iso
