"""Built-in fiducial vector sets and their known harmonic structure."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadParameter, UnknownName
from .harmonics import AdmissibilitySet, admissible_harmonics
from .qubit import UnitVectorSet

GOLDEN = (1 + math.sqrt(5)) / 2

PUBLISHED_LMAX = 15
PLATONIC_SOLIDS = ("tetrahedron", "octahedron", "cube", "dodecahedron", "icosahedron")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    vectors: UnitVectorSet
    parameters: int | None = None
    notes: str = ""


def _trine():
    h = math.sqrt(3) / 2
    return [[1, 0, 0], [-0.5, 0, h], [-0.5, 0, -h]]


def _tet1():
    a, b, c = 2 * math.sqrt(2) / 3, math.sqrt(2) / 3, math.sqrt(2 / 3)
    return [[1, 0, 0], [-1 / 3, 0, -a], [-1 / 3, c, b], [-1 / 3, -c, b]]


def _tet2():
    a, b, c = 2 * math.sqrt(2) / 3, math.sqrt(2) / 3, math.sqrt(2 / 3)
    return [[0, 0, 1], [a, 0, -1 / 3], [-b, c, -1 / 3], [-b, -c, -1 / 3]]


def _octahedron():
    return [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]


def _cube():
    t = _tet1()
    return t + [[-x for x in v] for v in t]


def _cyclic(v):
    x, y, z = v
    return [[x, y, z], [y, z, x], [z, x, y]]


def _icosahedron():
    out = []
    for a in (1, -1):
        for b in (GOLDEN, -GOLDEN):
            out += _cyclic([0, a, b])
    return out


def _dodecahedron():
    out = [[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    for a in (1, -1):
        for b in (1, -1):
            out += _cyclic([0, a / GOLDEN, b * GOLDEN])
    return out


def _polygon(n: int):
    return [[math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n), 0.0] for j in range(n)]


_BUILDERS = {
    "trine": (_trine, "three coplanar vectors at 120 degrees in the x-z plane"),
    "tet1": (_tet1, "tetrahedron with a vertex on e_x"),
    "tet2": (_tet2, "tet1 rotated by -90 degrees about y; a vertex on e_z"),
    "octahedron": (_octahedron, "+-e_x, +-e_y, +-e_z"),
    "cube": (_cube, "tet1 together with its antipodal points"),
    "dodecahedron": (_dodecahedron, "20 vertices: (+-1,+-1,+-1) and cyclic (0,+-1/phi,+-phi), scaled by 1/sqrt(3)"),
    "icosahedron": (_icosahedron, "12 vertices: cyclic (0,+-1,+-phi) / sqrt(1+phi^2)"),
    "antipodal": (lambda: [[0, 0, 1], [0, 0, -1]], "projective pair +-e_z"),
}

CATALOG_NAMES = tuple(_BUILDERS) + ("polygon",)

_SOLID_SETS = {
    "tetrahedron": "tet1",
    "octahedron": "octahedron",
    "cube": "cube",
    "dodecahedron": "dodecahedron",
    "icosahedron": "icosahedron",
}


def builtin_set(name: str, param: int | None = None) -> CatalogEntry:
    """Look up a named fiducial set; ``param`` is the vertex count for ``polygon``."""
    if name == "polygon":
        if param is None or int(param) < 2:
            raise BadParameter(f"polygon needs N >= 2, got {param}")
        n = int(param)
        return CatalogEntry("polygon", UnitVectorSet.normalized(_polygon(n)), n, f"regular {n}-gon in the x-y plane")
    if name not in _BUILDERS:
        raise UnknownName(f"unknown catalog set {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    if param is not None:
        raise BadParameter(f"{name} takes no parameter")
    build, notes = _BUILDERS[name]
    return CatalogEntry(name, UnitVectorSet.normalized(build()), None, notes)


def all_entries(polygons=range(2, 10)) -> list[CatalogEntry]:
    out = [builtin_set(n) for n in _BUILDERS]
    out += [builtin_set("polygon", n) for n in polygons]
    return out


def _odds(l_max: int) -> set[int]:
    return set(range(1, l_max + 1, 2))


def published_platonic_harmonics(solid: str, l_max: int) -> frozenset[int]:
    """The published allowed-harmonic list for a platonic solid, cut at ``l_max``."""
    if solid == "tetrahedron":
        base = {0, 1, 2, 5}
    elif solid in ("octahedron", "cube"):
        base = {0, 2} | _odds(l_max)
    elif solid in ("dodecahedron", "icosahedron"):
        base = {0, 2, 4, 8, 14} | _odds(l_max)
    else:
        raise UnknownName(f"not a platonic solid: {solid!r}")
    return frozenset(l for l in base if l <= l_max)


@dataclass(frozen=True)
class PlatonicRow:
    solid: str
    admissibility: AdmissibilitySet
    expected: frozenset[int]
    matches_published: bool
    beyond_published: frozenset[int]

    @property
    def allowed(self) -> frozenset[int]:
        return self.admissibility.allowed


def platonic_table(l_max: int = 17, tol_zero: float | None = None) -> list[PlatonicRow]:
    """Admissible harmonics of the five platonic solids.

    Each row is compared with the published list for ``l <= 15``; allowed
    ``l`` above 15 are reported separately as ``beyond_published``.
    """
    if l_max < 5:
        raise BadParameter(f"l_max must be >= 5, got {l_max}")
    rows = []
    cut = min(l_max, PUBLISHED_LMAX)
    for solid in PLATONIC_SOLIDS:
        adm = admissible_harmonics(builtin_set(_SOLID_SETS[solid]).vectors, l_max, tol_zero)
        expected = published_platonic_harmonics(solid, cut)
        found = frozenset(l for l in adm.allowed if l <= cut)
        beyond = frozenset(l for l in adm.allowed if l > PUBLISHED_LMAX)
        rows.append(PlatonicRow(solid, adm, expected, found == expected, beyond))
    return rows


def polygon_rule(n: int, l_max: int) -> frozenset[int]:
    """Closed-form allowed harmonics for a regular N-gon.

    Even N: 0 and every odd l. Odd N: 0 and the odd l up to N - 2.
    """
    if n < 2:
        raise BadParameter(f"polygon needs N >= 2, got {n}")
    top = l_max if n % 2 == 0 else min(n - 2, l_max)
    return frozenset({0} | set(range(1, top + 1, 2)))


def uniform_povm_admissibility(l_max: int) -> AdmissibilitySet:
    """The POVM containing every direction: only ``c_00`` is constrained.

    Analytic; no sums are evaluated and all evidence is zero.
    """
    if l_max < 0:
        raise BadParameter(f"l_max must be >= 0, got {l_max}")
    ls = range(l_max + 1)
    return AdmissibilitySet(l_max, frozenset(ls), {l: 0.0 for l in ls}, 0.0)


def format_platonic_text(rows: list[PlatonicRow]) -> str:
    l_max = rows[0].admissibility.l_max
    width = max(len(r.solid) for r in rows)
    lines = [f"platonic solids, l <= {l_max} (published list compared for l <= {PUBLISHED_LMAX})"]
    lines.append(f"{'solid':<{width}}  {'check':<5}  allowed harmonics")
    for r in rows:
        evens = sorted(l for l in r.allowed if l % 2 == 0)
        odds = sorted(l for l in r.allowed if l % 2 == 1)
        if odds == sorted(_odds(l_max)):
            desc = ", ".join(map(str, evens)) + ", & odds"
        else:
            desc = ", ".join(map(str, sorted(r.allowed)))
        mark = "match" if r.matches_published else "DIFF"
        line = f"{r.solid:<{width}}  {mark:<5}  {desc}"
        if r.beyond_published:
            line += "   [beyond published range: " + ", ".join(map(str, sorted(r.beyond_published))) + "]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def platonic_to_json(rows: list[PlatonicRow]) -> dict:
    return {
        "kind": "platonic_table",
        "l_max": rows[0].admissibility.l_max,
        "published_l_max": PUBLISHED_LMAX,
        "rows": [
            {
                "solid": r.solid,
                "allowed": sorted(r.allowed),
                "matches_published": r.matches_published,
                "beyond_published": sorted(r.beyond_published),
                "evidence": [float(r.admissibility.evidence[l]) for l in range(r.admissibility.l_max + 1)],
            }
            for r in rows
        ],
    }
