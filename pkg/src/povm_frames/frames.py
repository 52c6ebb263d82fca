"""Frame functions on effects and reconstruction of the generating state.

A frame function assigns a number in [0, 1] to every effect so that the
values over any POVM add up to one. Additivity forces linearity, so a frame
function extends to all Hermitian operators and is then an inner product with
a unique density operator. This module evaluates that chain numerically.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, MissingSamples, NotDensity
from .operators import (
    TOL_EIG,
    TOL_TRACE,
    DensityOperator,
    as_density,
    as_hermitian,
    hs_inner,
)
from .sampling import make_rng, random_effect, random_orthogonal

TOL_FRAME = 1e-10


@dataclass(frozen=True, eq=False)
class FrameOracle:
    """A deterministic map from d x d effects to real numbers.

    ``eval`` receives a plain ``complex128`` array. Nothing is checked at
    construction time; :func:`check_frame_laws` is how a candidate is tested.
    """

    dim: int
    eval: Callable[[np.ndarray], float]
    name: str = "frame"

    def __call__(self, effect) -> float:
        m = np.asarray(effect, dtype=np.complex128)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"oracle is {self.dim}-dimensional, got shape {m.shape}")
        return float(self.eval(m))


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """Hilbert-Schmidt orthonormal basis of d x d Hermitian operators."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        els = []
        for t in self.elements:
            a = np.array(as_hermitian(t).matrix)
            a.setflags(write=False)
            els.append(a)
        d = els[0].shape[0]
        if len(els) != d * d or any(e.shape != (d, d) for e in els):
            raise DimensionMismatch(f"need {d * d} elements of shape ({d}, {d})")
        gram = np.array([[hs_inner(a, b) for b in els] for a in els])
        dev = float(np.max(np.abs(gram - np.eye(d * d))))
        if dev > 1e-10:
            raise ValueError(f"basis is not orthonormal (max Gram deviation {dev:.3e})")
        object.__setattr__(self, "elements", tuple(els))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def coordinates(self, h) -> np.ndarray:
        """Real coordinates ``(tau_j, H)`` of a Hermitian operator."""
        m = as_hermitian(h).matrix
        return np.array([hs_inner(t, m) for t in self.elements])


@dataclass(frozen=True)
class FrameLawReport:
    additivity_max_dev: float
    homogeneity_max_dev: float
    order_violations: int
    trials: int
    seed: int


def gell_mann_basis(d: int) -> OperatorBasis:
    """Identity over sqrt(d) followed by generalized Gell-Mann matrices, all of unit HS norm.

    Ordering: identity, then for each pair j < k the symmetric and the
    antisymmetric element, then the d - 1 diagonal elements.
    """
    els = [np.eye(d, dtype=np.complex128) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1 / np.sqrt(2)
            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k] = -1j / np.sqrt(2)
            a[k, j] = 1j / np.sqrt(2)
            els += [s, a]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        els.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(np.complex128))
    return OperatorBasis(tuple(els))


default_basis = gell_mann_basis


def random_basis(d: int, rng) -> OperatorBasis:
    """Rotate the default basis by a Haar-random real orthogonal d^2 x d^2 matrix."""
    o = random_orthogonal(d * d, make_rng(rng))
    base = np.array(gell_mann_basis(d).elements)
    return OperatorBasis(tuple(np.tensordot(o, base, axes=1)))


def born_frame(w) -> FrameOracle:
    """The frame function ``E -> tr(W E)`` generated by a density operator."""
    w = as_density(w)
    wt = np.array(w.matrix.T)

    def _eval(e):
        return min(1.0, max(0.0, float(np.sum(wt * e).real)))

    return FrameOracle(w.dim, _eval, name="born")


def positive_split(h) -> tuple[tuple[float, np.ndarray], tuple[float, np.ndarray]]:
    """Write ``H = a1 E1 - a2 E2`` with effects E1, E2 from the eigen-split.

    Each positive part ``G`` is scaled by ``alpha = max(largest eigenvalue, 1)``
    so ``G / alpha`` is an effect.
    """
    h = as_hermitian(h)
    vals, vecs = np.linalg.eigh(h.matrix)
    parts = []
    for sel in (vals > 0, vals < 0):
        lam = np.abs(vals[sel])
        v = vecs[:, sel]
        alpha = max(float(lam.max()) if lam.size else 0.0, 1.0)
        parts.append((alpha, (v * (lam / alpha)) @ v.conj().T))
    return parts[0], parts[1]


def extend_to_hermitian(f: FrameOracle, h) -> float:
    """Linear extension of a frame function to an arbitrary Hermitian operator."""
    h = as_hermitian(h)
    if h.dim != f.dim:
        raise DimensionMismatch(f"oracle is {f.dim}-dimensional, operator is {h.dim}")
    (a1, e1), (a2, e2) = positive_split(h)
    return a1 * f(e1) - a2 * f(e2)


def extension_spread(f: FrameOracle, h, shifts: Sequence[float] = (0.25, 0.5, 1.0)) -> float:
    """Largest disagreement between alternative unravellings of ``H``.

    ``H = (G1 + sK) - (G2 + sK)`` with ``K = 1`` gives another valid split for
    each shift ``s``. For an additive ``f`` all of them agree; for an empirical
    oracle the spread measures how far ``f`` is from additive.
    """
    h = as_hermitian(h)
    base = extend_to_hermitian(f, h)
    (a1, e1), (a2, e2) = positive_split(h)
    eye = np.eye(h.dim)
    spread = 0.0
    for s in shifts:
        g1, g2 = a1 * e1 + s * eye, a2 * e2 + s * eye
        b1, b2 = np.linalg.eigvalsh(g1)[-1], np.linalg.eigvalsh(g2)[-1]
        b1, b2 = max(b1, 1.0), max(b2, 1.0)
        alt = b1 * f(g1 / b1) - b2 * f(g2 / b2)
        spread = max(spread, abs(alt - base))
    return spread


def _assemble(coords: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    w = np.tensordot(coords, np.array(basis.elements), axes=1)
    return (w + w.conj().T) / 2


def _as_density_or_raise(w: np.ndarray) -> DensityOperator:
    vals = np.linalg.eigvalsh(w)
    tr = float(np.trace(w).real)
    lo = float(vals[0])
    if lo < -TOL_EIG or abs(tr - 1) > TOL_TRACE:
        problems = []
        if abs(tr - 1) > TOL_TRACE:
            problems.append(f"trace {tr:.12g} != 1")
        if lo < -TOL_EIG:
            problems.append(f"min eigenvalue {lo:.6e} < 0")
        raise NotDensity(
            "reconstructed operator is not a density operator: " + "; ".join(problems),
            trace=tr,
            min_eigenvalue=lo,
            matrix=w,
        )
    return DensityOperator(w)


def reconstruct_density(f: FrameOracle, basis: OperatorBasis | None = None) -> DensityOperator:
    """Recover ``W`` with ``f(E) = tr(W E)`` as ``sum_j f(tau_j) tau_j``.

    Raises
    ------
    NotDensity
        If the result is not positive with unit trace, meaning ``f`` was not a
        frame function.
    """
    basis = gell_mann_basis(f.dim) if basis is None else basis
    if basis.dim != f.dim:
        raise DimensionMismatch(f"basis is {basis.dim}-dimensional, oracle is {f.dim}")
    coords = np.array([extend_to_hermitian(f, t) for t in basis.elements])
    return _as_density_or_raise(_assemble(coords, basis))


def basis_sample_effects(d: int) -> list[np.ndarray]:
    """The d^2 effects sampled for offline reconstruction.

    Element 0 is the identity. Every other default-basis element ``tau`` maps
    to ``(tau - lo) / (hi - lo)`` with ``lo, hi`` its extreme eigenvalues. The
    values of a frame function on these effects fix ``f(tau)`` by linearity.
    """
    out = []
    for j, t in enumerate(gell_mann_basis(d).elements):
        if j == 0:
            out.append(np.eye(d, dtype=np.complex128))
            continue
        vals = np.linalg.eigvalsh(t)
        lo, hi = vals[0], vals[-1]
        out.append((t - lo * np.eye(d)) / (hi - lo))
    return out


def reconstruct_from_samples(effects: Sequence, values: Sequence[float]) -> tuple[DensityOperator, float]:
    """Linear inversion of ``tr(W E_k) = v_k`` over sampled effects.

    The effects must span the d^2-dimensional operator space; the set from
    :func:`basis_sample_effects` is the minimal choice. Returns the density
    operator and the least-squares residual.

    Raises
    ------
    MissingSamples
        If the effects do not determine ``W``.
    NotDensity
        If the samples are inconsistent with every density operator.
    """
    effects = [as_hermitian(e) for e in effects]
    if not effects:
        raise MissingSamples("no samples given")
    d = effects[0].dim
    if any(e.dim != d for e in effects):
        raise DimensionMismatch("sample effects have different dimensions")
    basis = gell_mann_basis(d)
    a = np.array([basis.coordinates(e) for e in effects])
    v = np.asarray(values, dtype=float)
    rank = np.linalg.matrix_rank(a, tol=1e-9)
    if rank < d * d:
        raise MissingSamples(
            f"samples span {rank} of {d * d} operator directions; "
            f"supply the {d * d} basis-derived effects"
        )
    coords, *_ = np.linalg.lstsq(a, v, rcond=None)
    residual = float(np.max(np.abs(a @ coords - v)))
    w = _assemble(coords, basis)
    if residual > 1e-9:
        vals = np.linalg.eigvalsh(w)
        raise NotDensity(
            f"samples are mutually inconsistent (residual {residual:.3e})",
            trace=float(np.trace(w).real),
            min_eigenvalue=float(vals[0]),
            matrix=w,
        )
    return _as_density_or_raise(w), residual


def _sandwich(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(outer)
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    m = root @ inner @ root
    return (m + m.conj().T) / 2


def _law_instances(d: int, trials: int, seed: int):
    rng = make_rng(seed)
    for _ in range(trials):
        # E1 = S^1/2 A S^1/2 <= S, so E1, E2 = S - E1 and E1 + E2 = S are effects
        s = random_effect(d, rng)
        e1 = _sandwich(s, random_effect(d, rng))
        e2 = s - e1
        m = int(rng.integers(1, 9))
        n = int(rng.integers(1, m + 1))
        h = random_effect(d, rng)
        big = random_effect(d, rng)
        small = _sandwich(big, random_effect(d, rng))
        yield e1, e2, s, n / m, h, small, big


def check_frame_laws(f: FrameOracle, trials: int = 1000, seed: int = 0, workers: int = 1) -> FrameLawReport:
    """Probe additivity, rational homogeneity and order preservation on random effects.

    Instances are drawn up front from ``seed``; oracle calls may run on
    ``workers`` threads and the maxima are reduced in instance order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    instances = list(_law_instances(f.dim, trials, seed))

    def _one(inst):
        e1, e2, s, q, h, small, big = inst
        add = abs(f(e1) + f(e2) - f(s))
        hom = abs(f(q * h) - q * f(h))
        bad = f(small) > f(big) + TOL_FRAME
        return add, hom, bad

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_one, instances))
    else:
        rows = [_one(i) for i in instances]
    return FrameLawReport(
        additivity_max_dev=max(r[0] for r in rows),
        homogeneity_max_dev=max(r[1] for r in rows),
        order_violations=sum(bool(r[2]) for r in rows),
        trials=trials,
        seed=seed,
    )


def constant_oracle(d: int, value: float = 0.5) -> FrameOracle:
    return FrameOracle(d, lambda e: value, name=f"constant({value})")
