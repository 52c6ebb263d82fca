"""JSON file formats.

Matrices are ``{"dim": d, "re": [[...]], "im": [[...]]}`` (row-major). Every
reader raises :class:`FormatError` whose ``path`` names the offending field,
e.g. ``effects[2].re[1][0]``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import FormatError, IncompleteVectorSet, NotUnitVector
from .operators import ConvexDecomposition
from .qubit import UnitVectorSet

VECTOR_NORM_SLACK = 1e-6


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", str(path)) from None


def _field(obj, key, path):
    if not isinstance(obj, dict):
        raise FormatError("expected an object", path)
    if key not in obj:
        raise FormatError("missing field", f"{path}.{key}" if path else key)
    return obj[key]


def _number(x, path) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise FormatError(f"expected a finite number, got {x!r}", path)
    return float(x)


def _real_rows(rows, d, path) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != d:
        raise FormatError(f"expected {d} rows", path)
    out = np.empty((d, d))
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise FormatError(f"expected {d} entries", f"{path}[{j}]")
        for k, x in enumerate(row):
            out[j, k] = _number(x, f"{path}[{j}][{k}]")
    return out


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj, path: str = "") -> np.ndarray:
    d = _field(obj, "dim", path)
    dpath = f"{path}.dim" if path else "dim"
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise FormatError(f"expected a positive integer, got {d!r}", dpath)
    pre = f"{path}." if path else ""
    re = _real_rows(_field(obj, "re", path), d, pre + "re")
    im_raw = obj.get("im")
    im = np.zeros((d, d)) if im_raw is None else _real_rows(im_raw, d, pre + "im")
    return re + 1j * im


def _expect_kind(obj, kind, path=""):
    got = _field(obj, "kind", path)
    if got != kind:
        raise FormatError(f"expected kind {kind!r}, got {got!r}", f"{path}.kind" if path else "kind")


def povm_to_json(effects) -> dict:
    return {"kind": "povm", "effects": [matrix_to_json(e) for e in effects]}


def povm_from_json(obj) -> list[np.ndarray]:
    _expect_kind(obj, "povm")
    effects = _field(obj, "effects", "")
    if not isinstance(effects, list) or not effects:
        raise FormatError("expected a nonempty list", "effects")
    return [matrix_from_json(e, f"effects[{j}]") for j, e in enumerate(effects)]


def vector_set_to_json(vs: UnitVectorSet) -> dict:
    return {"kind": "vector_set", "vectors": np.asarray(vs.vectors).tolist()}


def vector_set_from_json(obj) -> UnitVectorSet:
    """Read a vector set; vectors within 1e-6 of unit length are normalized.

    Raises
    ------
    FormatError
        Malformed data or a vector too far from unit length.
    IncompleteVectorSet
        The (normalized) vectors do not sum to zero.
    """
    _expect_kind(obj, "vector_set")
    raw = _field(obj, "vectors", "")
    if not isinstance(raw, list) or len(raw) < 2:
        raise FormatError("expected a list of at least two 3-vectors", "vectors")
    vecs = []
    for j, v in enumerate(raw):
        if not isinstance(v, list) or len(v) != 3:
            raise FormatError("expected [x, y, z]", f"vectors[{j}]")
        arr = np.array([_number(x, f"vectors[{j}][{k}]") for k, x in enumerate(v)])
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1) > VECTOR_NORM_SLACK:
            raise FormatError(f"length {norm:.9g} is not within {VECTOR_NORM_SLACK:g} of 1", f"vectors[{j}]")
        vecs.append(arr / norm)
    try:
        return UnitVectorSet(np.array(vecs))
    except NotUnitVector as exc:
        raise FormatError(str(exc), "vectors") from None
    except IncompleteVectorSet as exc:
        raise IncompleteVectorSet(f"vectors: {exc}") from None


def frame_samples_to_json(effects, values) -> dict:
    d = int(np.asarray(effects[0]).shape[0])
    return {
        "kind": "frame_samples",
        "dim": d,
        "samples": [{"effect": matrix_to_json(e), "value": v} for e, v in zip(effects, values)],
    }


def frame_samples_from_json(obj) -> tuple[list[np.ndarray], list[float]]:
    _expect_kind(obj, "frame_samples")
    d = _field(obj, "dim", "")
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise FormatError(f"expected a positive integer, got {d!r}", "dim")
    raw = _field(obj, "samples", "")
    if not isinstance(raw, list):
        raise FormatError("expected a list", "samples")
    effects, values = [], []
    for j, s in enumerate(raw):
        p = f"samples[{j}]"
        e = matrix_from_json(_field(s, "effect", p), f"{p}.effect")
        if e.shape[0] != d:
            raise FormatError(f"effect has dim {e.shape[0]}, file declares {d}", f"{p}.effect.dim")
        effects.append(e)
        values.append(_number(_field(s, "value", p), f"{p}.value"))
    return effects, values


def decomposition_to_json(dec: ConvexDecomposition) -> dict:
    return {
        "kind": "convex_decomposition",
        "terms": [{"weight": w, "rank": p.rank, "projector": matrix_to_json(p.matrix)} for w, p in dec.terms],
    }
