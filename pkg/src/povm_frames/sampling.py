"""Seeded random operators, states and rotations.

All generators draw from a Philox counter-based bit generator, so a given
64-bit seed reproduces the same stream on every platform.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int | np.random.Generator = 0) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def random_hermitian(d: int, rng) -> np.ndarray:
    rng = make_rng(rng)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def random_effect(d: int, rng) -> np.ndarray:
    """Random effect with spectrum rescaled into a random subinterval of [0, 1].

    Mapping onto all of [0, 1] would pin one eigenvalue at each end and make
    every sample a boundary point.
    """
    rng = make_rng(rng)
    vals, vecs = np.linalg.eigh(random_hermitian(d, rng))
    lo, hi = np.sort(rng.uniform(0.0, 1.0, size=2))
    span = vals[-1] - vals[0]
    scaled = lo + (hi - lo) * (vals - vals[0]) / span if span > 0 else np.full(d, lo)
    return (vecs * scaled) @ vecs.conj().T


def random_density(d: int, rng) -> np.ndarray:
    """Random full-rank density operator ``G G^H / tr(G G^H)`` (Ginibre)."""
    rng = make_rng(rng)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = g @ g.conj().T
    w = (w + w.conj().T) / 2
    return w / np.trace(w).real


def random_pure_density(d: int, rng) -> np.ndarray:
    rng = make_rng(rng)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_povm(d: int, n: int, rng) -> list[np.ndarray]:
    """Random ``n``-outcome POVM from normalized random positive operators.

    With ``S = sum_j G_j`` the effects are ``S^{-1/2} G_j S^{-1/2}``.
    """
    rng = make_rng(rng)
    gs = []
    for _ in range(n):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        gs.append(g @ g.conj().T)
    vals, vecs = np.linalg.eigh(sum(gs))
    s_inv_half = (vecs / np.sqrt(vals)) @ vecs.conj().T
    out = []
    for g in gs:
        e = s_inv_half @ g @ s_inv_half
        out.append((e + e.conj().T) / 2)
    return out


def random_unit_vector(rng, size=None) -> np.ndarray:
    rng = make_rng(rng)
    shape = (3,) if size is None else (size, 3)
    v = rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_rotation_matrix(rng) -> np.ndarray:
    """Haar-random element of SO(3) from a normalized Gaussian quaternion."""
    rng = make_rng(rng)
    q = rng.standard_normal(4)
    w, x, y, z = q / np.linalg.norm(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_orthogonal(n: int, rng) -> np.ndarray:
    """Haar-random orthogonal matrix via QR with sign correction."""
    rng = make_rng(rng)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
