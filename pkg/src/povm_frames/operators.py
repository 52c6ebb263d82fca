"""Finite-dimensional Hermitian operator algebra.

Effects, projectors, POVMs and density operators are thin frozen wrappers
around read-only ``complex128`` arrays. Constructors validate their invariants,
so holding an :class:`Effect` means the spectrum was checked once.

Complex entries are stored as numpy ``complex128``, i.e. a pair of IEEE
doubles per entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    Incomplete,
    NotDensity,
    NotEffect,
    NotHermitian,
    NotProjector,
)

TOL_HERM = 1e-10
TOL_IDEM = 1e-10
TOL_CONV = 1e-10
TOL_EIG = 1e-9
TOL_COMPLETE = 1e-9
TOL_TRACE = 1e-10


def _frozen_matrix(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=np.complex128, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NotHermitian("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A d x d complex Hermitian matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = _frozen_matrix(self.matrix)
        dev = float(np.max(np.abs(arr - arr.conj().T)))
        if dev > TOL_HERM:
            raise NotHermitian(f"matrix is not Hermitian (max |A - A^H| = {dev:.3e})")
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


@dataclass(frozen=True, eq=False, repr=False)
class Effect(HermitianOperator):
    """Hermitian operator with spectrum inside the unit interval."""

    def __post_init__(self):
        super().__post_init__()
        lo, hi = _spectral_range(self.matrix)
        if lo < -TOL_EIG or hi > 1 + TOL_EIG:
            raise NotEffect(f"eigenvalues [{lo:.6g}, {hi:.6g}] leave the unit interval")


@dataclass(frozen=True, eq=False, repr=False)
class Projector(HermitianOperator):
    """Orthogonal projector; ``rank`` is derived from the trace when omitted."""

    rank: int | None = None

    def __post_init__(self):
        super().__post_init__()
        m = self.matrix
        if float(np.max(np.abs(m @ m - m))) > TOL_IDEM:
            raise NotProjector("matrix is not idempotent")
        tr = float(np.trace(m).real)
        rank = int(round(tr)) if self.rank is None else self.rank
        if abs(tr - rank) > TOL_IDEM or not 0 <= rank <= self.dim:
            raise NotProjector(f"trace {tr:.12g} does not match rank {rank}")
        object.__setattr__(self, "rank", rank)


@dataclass(frozen=True, eq=False, repr=False)
class DensityOperator(HermitianOperator):
    """Positive unit-trace operator."""

    def __post_init__(self):
        super().__post_init__()
        lo, _ = _spectral_range(self.matrix)
        tr = float(np.trace(self.matrix).real)
        if lo < -TOL_EIG or abs(tr - 1) > TOL_TRACE:
            raise NotDensity(
                f"not a density operator (trace {tr:.12g}, min eigenvalue {lo:.3e})",
                trace=tr,
                min_eigenvalue=lo,
                matrix=np.array(self.matrix),
            )


@dataclass(frozen=True, eq=False)
class Povm:
    """Effects resolving the identity. Build through :func:`validate_povm`."""

    effects: tuple[Effect, ...]
    residue: float = 0.0

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    def __len__(self):
        return len(self.effects)

    def __iter__(self):
        return iter(self.effects)

    def __getitem__(self, j):
        return self.effects[j]


@dataclass(frozen=True)
class ConvexDecomposition:
    """``sum(w * P for w, P in terms)`` reproduces the source effect."""

    terms: tuple[tuple[float, Projector], ...] = field(default_factory=tuple)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def reconstruct(self) -> np.ndarray:
        d = self.terms[0][1].dim
        out = np.zeros((d, d), dtype=np.complex128)
        for w, p in self.terms:
            out += w * p.matrix
        return out


def as_hermitian(op) -> HermitianOperator:
    """Coerce an array-like (or any operator wrapper) to :class:`HermitianOperator`."""
    if isinstance(op, HermitianOperator):
        return op
    return HermitianOperator(op)


def as_effect(op) -> Effect:
    if isinstance(op, Effect):
        return op
    return Effect(np.asarray(op))


def as_density(op) -> DensityOperator:
    if isinstance(op, DensityOperator):
        return op
    return DensityOperator(np.asarray(op))


def _spectral_range(m: np.ndarray) -> tuple[float, float]:
    ev = np.linalg.eigvalsh(m)
    return float(ev[0]), float(ev[-1])


def _check_dims(a: HermitianOperator, b: HermitianOperator):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")


def spectrum(h) -> tuple[np.ndarray, list[Projector]]:
    """Eigenvalues in ascending order and matching rank-one eigenprojectors.

    Parameters
    ----------
    h : HermitianOperator or array_like

    Returns
    -------
    eigenvalues : ndarray, shape (d,)
    projectors : list of Projector
        Mutually orthogonal, summing to the identity.
    """
    h = as_hermitian(h)
    vals, vecs = np.linalg.eigh(h.matrix)
    projs = [Projector(np.outer(vecs[:, j], vecs[:, j].conj()), rank=1) for j in range(h.dim)]
    return vals, projs


def is_effect(h) -> bool:
    lo, hi = _spectral_range(as_hermitian(h).matrix)
    return -TOL_EIG <= lo and hi <= 1 + TOL_EIG


def _snap_unit_interval(vals: np.ndarray) -> np.ndarray:
    vals = np.array(vals, dtype=float)
    vals[np.abs(vals) <= TOL_EIG] = 0.0
    vals[np.abs(vals - 1) <= TOL_EIG] = 1.0
    return np.clip(vals, 0.0, 1.0)


def convex_decompose(e) -> ConvexDecomposition:
    """Write an effect as a convex combination of nested projectors.

    With eigenvalues l_1 <= ... <= l_d and ``P_m`` the projector onto the
    eigenvectors m..d, the terms are ``(l_1, 1)``, ``(l_m - l_{m-1}, P_m)`` and
    ``(1 - l_d, 0)``. Eigenvalues within ``TOL_CONV`` of each other are merged
    into one level and zero-weight terms are dropped.
    """
    e = as_effect(e)
    d = e.dim
    vals, vecs = np.linalg.eigh(e.matrix)
    vals = _snap_unit_interval(vals)

    # clusters of (numerically) equal eigenvalues; each cluster is one level
    starts = [0]
    for j in range(1, d):
        if vals[j] - vals[j - 1] > TOL_CONV:
            starts.append(j)
    bounds = starts + [d]
    levels = [float(np.mean(vals[a:b])) for a, b in zip(bounds[:-1], bounds[1:])]

    terms = []
    prev = 0.0
    for k, start in enumerate(starts):
        weight = levels[k] - prev
        prev = levels[k]
        if weight <= 0.0:
            continue
        v = vecs[:, start:]
        terms.append((weight, Projector(v @ v.conj().T, rank=d - start)))
    if 1.0 - prev > 0.0:
        terms.append((1.0 - prev, Projector(np.zeros((d, d)), rank=0)))
    return ConvexDecomposition(tuple(terms))


def is_extreme(e) -> bool:
    """True iff the effect is a projector (the extreme points of the effect set)."""
    m = as_effect(e).matrix
    return float(np.max(np.abs(m @ m - m))) <= TOL_IDEM


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt inner product ``tr(A B)`` of two Hermitian operators."""
    a, b = as_hermitian(a), as_hermitian(b)
    _check_dims(a, b)
    # tr(AB) = sum_jk A_jk B_kj
    return float(np.sum(a.matrix * b.matrix.T).real)


def validate_povm(effects: Sequence) -> Povm:
    """Validate a sequence of effects as a complete measurement.

    Raises
    ------
    NotEffect, DimensionMismatch, Incomplete
    """
    effects = list(effects)
    if not effects:
        raise Incomplete("a POVM needs at least one effect", residue=float("inf"))
    checked = []
    for j, e in enumerate(effects):
        try:
            checked.append(as_effect(e))
        except NotEffect as exc:
            raise NotEffect(f"effects[{j}]: {exc}") from None
        except NotHermitian as exc:
            raise NotHermitian(f"effects[{j}]: {exc}") from None
    d = checked[0].dim
    for j, e in enumerate(checked):
        if e.dim != d:
            raise DimensionMismatch(f"effects[{j}] has dim {e.dim}, expected {d}")
    total = np.sum([e.matrix for e in checked], axis=0)
    residue = float(np.max(np.abs(total - np.eye(d))))
    if residue > TOL_COMPLETE:
        raise Incomplete(f"effects do not sum to the identity (max residue {residue:.3e})", residue=residue)
    return Povm(tuple(checked), residue)


def born_probability(w, e) -> float:
    w, e = as_density(w), as_effect(e)
    _check_dims(w, e)
    return min(1.0, max(0.0, hs_inner(w, e)))


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)
