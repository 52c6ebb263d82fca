"""Spherical harmonics and the harmonic sum conditions for fiducial vector sets.

A frame function on the family ``{(1/N)(1 + (R n) . sigma)}`` is a function
``F`` on the sphere, ``F = sum c_lm Y_lm``. Requiring ``sum_j F(R n_j) = 1``
for every rotation ``R`` leaves harmonic ``l >= 1`` free only when
``sum_j Y_lr(n_j) = 0`` for all ``r``; otherwise every ``c_lm`` must vanish.

Harmonics are evaluated as ``h_lm(n_z) * (n_x + i n_y)**m``, where ``h_lm``
is the fully normalized associated Legendre function (Condon-Shortley phase)
with the ``sin(theta)**m`` factor taken out. That form needs no angles and is
regular at the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import IndexOutOfRange, InvalidBlochVector, NotUnitVector, RealityViolated
from .qubit import Rotation3, UnitVectorSet

FOUR_PI = 4.0 * math.pi
L_MAX_ANALYSIS = 20
L_MAX_TABLE = 17
MARGINAL_BAND = 100.0
FEASIBILITY_SLACK = 1e-12


def default_tol(n: int) -> float:
    return 1e-8 * math.sqrt(n)


def _reduced_legendre(l_max: int, x) -> np.ndarray:
    """``h[l, m](x)`` for 0 <= m <= l <= l_max, zero above the diagonal.

    ``h_lm(x) * (1 - x^2)^(m/2)`` is the fully normalized associated Legendre
    function ``sqrt((2l+1)/4pi (l-m)!/(l+m)!) P_l^m(x)``. Upward recurrence in
    ``l`` at fixed ``m``; the seed ``h_mm`` is a decreasing product, so nothing
    overflows.
    """
    x = np.asarray(x, dtype=float)
    h = np.zeros((l_max + 1, l_max + 1) + x.shape)
    seed = 1.0 / FOUR_PI
    for m in range(l_max + 1):
        if m > 0:
            seed *= (2 * m - 1) / (2 * m)
        h[m, m] = (-1) ** m * math.sqrt((2 * m + 1) * seed)
        if m + 1 <= l_max:
            h[m + 1, m] = math.sqrt(2 * m + 3) * x * h[m, m]
        for l in range(m + 2, l_max + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            h[l, m] = a * (x * h[l - 1, m] - b * h[l - 2, m])
    return h


def _norm_factor(l: int, m: int) -> float:
    return math.exp(
        0.5 * (math.log((2 * l + 1) / FOUR_PI) + math.lgamma(l - m + 1) - math.lgamma(l + m + 1))
    )


def assoc_legendre(l: int, m: int, x: float) -> float:
    """Associated Legendre function ``P_l^m(x)`` with the Condon-Shortley phase.

    >>> round(assoc_legendre(5, 0, -1/3), 12)
    -0.333333333333
    """
    if not (0 <= m <= l):
        raise IndexOutOfRange(f"need 0 <= m <= l, got l={l}, m={m}")
    if not -1.0 <= x <= 1.0:  # also rejects NaN
        raise IndexOutOfRange(f"x={x} outside [-1, 1]")
    h = _reduced_legendre(l, x)[l, m]
    return float(h * (1.0 - x * x) ** (0.5 * m) / _norm_factor(l, m))


def _unit_rows(n) -> np.ndarray:
    v = np.asarray(n, dtype=float)
    rows = v.reshape(-1, 3)
    bad = ~(np.abs(np.linalg.norm(rows, axis=1) - 1) <= 1e-10)
    if bad.any():
        raise NotUnitVector(f"not a unit vector: {rows[np.flatnonzero(bad)[0]]}")
    return rows


def harmonic_table(l_max: int, vectors) -> np.ndarray:
    """All ``Y_lm`` up to ``l_max`` at each vector.

    Returns
    -------
    ndarray, complex, shape (l_max + 1, 2 * l_max + 1, N)
        ``out[l, l_max + m, j] = Y_lm(n_j)``; entries with ``|m| > l`` are 0.
    """
    v = _unit_rows(vectors)
    h = _reduced_legendre(l_max, v[:, 2])
    w = v[:, 0] + 1j * v[:, 1]
    out = np.zeros((l_max + 1, 2 * l_max + 1, len(v)), dtype=np.complex128)
    wm = np.ones(len(v), dtype=np.complex128)
    for m in range(l_max + 1):
        sign = -1.0 if m % 2 else 1.0
        for l in range(m, l_max + 1):
            y = h[l, m] * wm
            out[l, l_max + m] = y
            if m:
                out[l, l_max - m] = sign * y.conj()
        wm = wm * w
    return out


def ylm(l: int, m: int, n) -> complex:
    """Normalized spherical harmonic ``Y_lm`` at a unit vector."""
    if l < 0 or abs(m) > l:
        raise IndexOutOfRange(f"need |m| <= l, got l={l}, m={m}")
    return complex(harmonic_table(l, n)[l, l + m, 0])


def _fsum_complex(z: np.ndarray) -> complex:
    # correctly rounded, so independent of summation order
    return complex(math.fsum(z.real), math.fsum(z.imag))


@dataclass(frozen=True)
class SumConditionReport:
    """``values[r + l] = sum_j Y_lr(n_j)`` for r = -l..l."""

    l: int
    values: tuple[complex, ...]
    max_abs: float


def _report(l: int, row: np.ndarray, l_max: int) -> SumConditionReport:
    vals = tuple(_fsum_complex(row[l_max + r]) for r in range(-l, l + 1))
    return SumConditionReport(l, vals, max(abs(z) for z in vals))


def sum_condition(vs: UnitVectorSet, l: int) -> SumConditionReport:
    if l < 0:
        raise IndexOutOfRange(f"l must be >= 0, got {l}")
    table = harmonic_table(l, vs.vectors)
    return _report(l, table[l], l)


def sum_conditions(vs: UnitVectorSet, l_max: int) -> list[SumConditionReport]:
    table = harmonic_table(l_max, vs.vectors)
    return [_report(l, table[l], l_max) for l in range(l_max + 1)]


@dataclass(frozen=True)
class AdmissibilitySet:
    """Which harmonics a frame function on a vector-set family may contain.

    ``evidence[l]`` is the largest ``|sum_j Y_lr(n_j)|``. ``marginal`` lists
    the ``l`` whose evidence lies within a factor 100 of ``tol`` on either
    side, where the classification should not be trusted blindly.
    """

    l_max: int
    allowed: frozenset[int]
    evidence: Mapping[int, float]
    tol: float
    marginal: frozenset[int] = field(default_factory=frozenset)

    def rows(self) -> list[dict]:
        return [
            {
                "l": l,
                "max_abs": float(self.evidence[l]),
                "allowed": l in self.allowed,
                "marginal": l in self.marginal,
            }
            for l in range(self.l_max + 1)
        ]


def admissible_harmonics(vs: UnitVectorSet, l_max: int = L_MAX_ANALYSIS, tol_zero: float | None = None) -> AdmissibilitySet:
    """Classify each ``l <= l_max`` by the sum condition.

    ``l = 0`` (normalization) and ``l = 1`` (implied by completeness) are
    always allowed. Default ``tol_zero`` is ``1e-8 * sqrt(N)``.
    """
    if l_max < 1:
        raise IndexOutOfRange(f"l_max must be >= 1, got {l_max}")
    tol = default_tol(len(vs)) if tol_zero is None else float(tol_zero)
    allowed, evidence, marginal = {0, 1}, {}, set()
    for rep in sum_conditions(vs, l_max):
        evidence[rep.l] = rep.max_abs
        if rep.l < 2:
            continue
        if rep.max_abs <= tol:
            allowed.add(rep.l)
        if tol / MARGINAL_BAND < rep.max_abs < tol * MARGINAL_BAND:
            marginal.add(rep.l)
    return AdmissibilitySet(l_max, frozenset(allowed), evidence, tol, frozenset(marginal))


class FrameCoefficients:
    """Spherical-harmonic coefficients ``c_lm`` of a function on the sphere.

    Stored densely: ``array[l, l_max + m]``. A real function needs
    ``c_{l,-m} = (-1)^m conj(c_lm)``; :meth:`set` keeps that automatically.
    """

    def __init__(self, l_max: int, array=None):
        self.l_max = int(l_max)
        shape = (self.l_max + 1, 2 * self.l_max + 1)
        if array is None:
            self.array = np.zeros(shape, dtype=np.complex128)
        else:
            self.array = np.array(array, dtype=np.complex128)
            if self.array.shape != shape:
                raise IndexOutOfRange(f"coefficient array must have shape {shape}")

    @classmethod
    def from_dict(cls, terms: Mapping[tuple[int, int], complex], l_max: int | None = None) -> "FrameCoefficients":
        """Raw coefficients, taken verbatim (no conjugate filling)."""
        top = max((l for l, _ in terms), default=0)
        out = cls(top if l_max is None else l_max)
        for (l, m), c in terms.items():
            out._check_index(l, m)
            out.array[l, out.l_max + m] = c
        return out

    def _check_index(self, l, m):
        if not (0 <= l <= self.l_max and abs(m) <= l):
            raise IndexOutOfRange(f"(l={l}, m={m}) outside l_max={self.l_max}")

    def __getitem__(self, lm) -> complex:
        l, m = lm
        self._check_index(l, m)
        return complex(self.array[l, self.l_max + m])

    def set(self, l: int, m: int, value: complex) -> "FrameCoefficients":
        """Set ``c_lm`` and its reality partner ``c_{l,-m}``; returns self."""
        self._check_index(l, m)
        self.array[l, self.l_max + m] = value
        if m:
            self.array[l, self.l_max - m] = (-1) ** m * np.conj(value)
        return self

    def copy(self) -> "FrameCoefficients":
        return FrameCoefficients(self.l_max, self.array)

    def reality_deviation(self) -> float:
        dev = 0.0
        for l in range(self.l_max + 1):
            for m in range(0, l + 1):
                partner = (-1) ** m * np.conj(self.array[l, self.l_max + m])
                dev = max(dev, abs(self.array[l, self.l_max - m] - partner))
        return float(dev)

    def scaled(self, gamma: float) -> "FrameCoefficients":
        """Copy with every ``l >= 1`` coefficient multiplied by ``gamma``."""
        out = self.copy()
        out.array[1:] *= gamma
        return out

    def support(self, tol: float = 0.0) -> set[int]:
        return {l for l in range(self.l_max + 1) if np.max(np.abs(self.array[l])) > tol}

    def __repr__(self):
        nz = {(l, m): self[l, m] for l in range(self.l_max + 1) for m in range(-l, l + 1) if self[l, m] != 0}
        return f"FrameCoefficients(l_max={self.l_max}, {nz})"


def born_coefficients(n: int, p) -> FrameCoefficients:
    """Coefficients of the quantum rule ``F(n) = (1 + n . P) / N``."""
    p = np.asarray(p, dtype=float)
    if n < 2:
        raise IndexOutOfRange(f"N must be >= 2, got {n}")
    if np.linalg.norm(p) > 1 + 1e-12:
        raise InvalidBlochVector(f"|P| = {np.linalg.norm(p):.6g} > 1")
    return _born_like(n, p)


def _born_like(n: int, p) -> FrameCoefficients:
    px, py, pz = (float(t) for t in p)
    c = FrameCoefficients(1)
    c.set(0, 0, math.sqrt(FOUR_PI) / n)
    c.set(1, 0, math.sqrt(FOUR_PI / 3) * pz / n)
    c.set(1, 1, math.sqrt(2 * math.pi / 3) * complex(-px, py) / n)
    return c


def _check_reality(coeffs: FrameCoefficients):
    dev = coeffs.reality_deviation()
    if dev > 1e-12:
        raise RealityViolated(f"c_(l,-m) != (-1)^m conj(c_lm) (max deviation {dev:.3e})")


def _evaluate(coeffs: FrameCoefficients, vectors) -> np.ndarray:
    table = harmonic_table(coeffs.l_max, vectors)
    vals = np.einsum("lm,lmj->j", coeffs.array, table)
    if vals.size and np.max(np.abs(vals.imag)) > 1e-10:
        raise RealityViolated(f"imaginary part {np.max(np.abs(vals.imag)):.3e} in F")
    return vals.real


def evaluate_frame_many(coeffs: FrameCoefficients, vectors) -> np.ndarray:
    _check_reality(coeffs)
    return _evaluate(coeffs, vectors)


def evaluate_frame(coeffs: FrameCoefficients, n) -> float:
    """``F(n) = sum_lm c_lm Y_lm(n)`` at one unit vector."""
    _check_reality(coeffs)
    return float(_evaluate(coeffs, n)[0])


def check_povm_normalization(coeffs: FrameCoefficients, vs: UnitVectorSet, rotations: Iterable[Rotation3]) -> float:
    """``max_R |sum_j F(R n_j) - 1|`` over the supplied rotations."""
    _check_reality(coeffs)
    worst = 0.0
    for rot in rotations:
        vals = _evaluate(coeffs, rot.apply(vs.vectors))
        worst = max(worst, abs(math.fsum(vals) - 1.0))
    return worst


def fibonacci_sphere(count: int) -> np.ndarray:
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * np.arange(count)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _tangent_frame(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(p[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(p, helper)
    u /= np.linalg.norm(u)
    return u, np.cross(p, u)


def _newton_refine(fn, p: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """One Newton step on ``fn`` in a tangent-plane chart around ``p``.

    Finite-difference gradient and Hessian; the step is kept only if it lowers
    ``fn``. The chart avoids the coordinate singularity of (theta, phi) at the
    poles.
    """
    u, v = _tangent_frame(p)

    def chart(a, b):
        q = p + a * u + b * v
        return q / np.linalg.norm(q)

    offsets = [(0, 0), (h, 0), (-h, 0), (0, h), (0, -h), (h, h), (h, -h), (-h, h), (-h, -h)]
    pts = np.array([chart(a, b) for a, b in offsets])
    f0, fpa, fma, fpb, fmb, fpp, fpm, fmp, fmm = fn(pts)
    grad = np.array([fpa - fma, fpb - fmb]) / (2 * h)
    hab = (fpp - fpm - fmp + fmm) / (4 * h * h)
    hess = np.array([[(fpa - 2 * f0 + fma) / h**2, hab], [hab, (fpb - 2 * f0 + fmb) / h**2]])
    if np.any(np.linalg.eigvalsh(hess) <= 0):
        return p
    step = np.linalg.solve(hess, -grad)
    cand = chart(*step)
    return cand if fn(cand[None])[0] < f0 else p


def shrink_to_nonnegative(coeffs: FrameCoefficients, grid_resolution: int = 4096, iterations: int = 40) -> tuple[FrameCoefficients, float]:
    """Scale the ``l >= 1`` part until ``F >= 0`` on a sampling grid.

    Samples are a Fibonacci-sphere grid plus one Newton-refined point near the
    grid minimum. The factor is found by bisection on ``[0, 1]`` and is the
    lower (feasible) end of the final bracket; ``c_00`` is untouched.
    """
    _check_reality(coeffs)
    c00 = coeffs[0, 0].real
    if c00 <= 0:
        raise ValueError("c_00 must be positive")
    const = c00 / math.sqrt(FOUR_PI)
    rest = coeffs.copy()
    rest.array[0] = 0

    def varying(pts):
        return _evaluate(rest, pts)

    grid = fibonacci_sphere(grid_resolution)
    g = varying(grid)
    best = grid[int(np.argmin(g))]
    refined = _newton_refine(varying, best)
    samples = np.concatenate([g, varying(refined[None])])

    def feasible(gamma):
        # slack absorbs roundoff at exact zeros, e.g. a pure-state Born rule
        return np.min(const + gamma * samples) >= -FEASIBILITY_SLACK

    if feasible(1.0):
        return coeffs.copy(), 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return coeffs.scaled(lo), lo


def format_admissibility_text(adm: AdmissibilitySet, title: str | None = None) -> str:
    lines = []
    if title:
        lines.append(title)
    lines.append(f"l_max = {adm.l_max}   tol = {adm.tol:.5e}")
    lines.append(f"{'l':>4}  {'max_abs':>12}  {'allowed':>7}  {'marginal':>8}")
    for row in adm.rows():
        lines.append(
            f"{row['l']:>4}  {row['max_abs']:>12.5e}  {('yes' if row['allowed'] else 'no'):>7}  "
            f"{('yes' if row['marginal'] else ''):>8}"
        )
    lines.append("allowed: " + format_lset(adm.allowed))
    return "\n".join(lines) + "\n"


def format_lset(ls: Iterable[int]) -> str:
    return "{" + ", ".join(str(l) for l in sorted(ls)) + "}"


def admissibility_to_json(adm: AdmissibilitySet) -> dict:
    return {"kind": "admissibility", "l_max": adm.l_max, "tol": adm.tol, "rows": adm.rows()}
