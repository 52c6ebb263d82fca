"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 semantic failure
(samples that no density operator reproduces).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .catalog import (
    CATALOG_NAMES,
    builtin_set,
    format_platonic_text,
    platonic_table,
    platonic_to_json,
)
from .errors import FrameError, NotDensity
from .frames import basis_sample_effects, reconstruct_from_samples
from .harmonics import (
    L_MAX_ANALYSIS,
    L_MAX_TABLE,
    admissibility_to_json,
    admissible_harmonics,
    format_admissibility_text,
)
from .operators import DensityOperator, Effect, convex_decompose, is_effect, validate_povm
from .qubit import effects_from_vector_set

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_SEMANTIC = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input_path: Path | None = None
    output_path: Path | None = None
    l_max: int = L_MAX_ANALYSIS
    tol: float | None = None
    seed: int = 0
    format: str = "text"
    name: str | None = None
    n: int | None = None
    list_required: bool = False
    dim: int | None = None

    def __post_init__(self):
        if self.l_max < 1:
            raise FrameError(f"--lmax must be >= 1, got {self.l_max}")
        if self.tol is not None and not self.tol > 0:
            raise FrameError(f"--tol must be > 0, got {self.tol}")


def _emit(cfg: RunConfig, text: str):
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text, encoding="utf-8")


def _fmt(x: float) -> str:
    return f"{x:.5e}"


def _require_input(cfg: RunConfig) -> Path:
    if cfg.input_path is None:
        raise FrameError("--input is required")
    return cfg.input_path


def run_analyze(cfg: RunConfig) -> int:
    if cfg.input_path is not None:
        vs = io.vector_set_from_json(io.load_json(cfg.input_path))
        title = f"admissible harmonics for {cfg.input_path.name} (N = {len(vs)})"
    elif cfg.name is not None:
        entry = builtin_set(cfg.name, cfg.n)
        vs = entry.vectors
        label = entry.name if entry.parameters is None else f"{entry.name}({entry.parameters})"
        title = f"admissible harmonics for {label} (N = {len(vs)})"
    else:
        raise FrameError("analyze needs --input FILE or --name NAME")
    adm = admissible_harmonics(vs, cfg.l_max, cfg.tol)
    if cfg.format == "json":
        _emit(cfg, io.dumps(admissibility_to_json(adm)))
    else:
        _emit(cfg, format_admissibility_text(adm, title))
    return EXIT_OK


def run_table(cfg: RunConfig) -> int:
    rows = platonic_table(cfg.l_max, cfg.tol)
    if cfg.format == "json":
        _emit(cfg, io.dumps(platonic_to_json(rows)))
    else:
        _emit(cfg, format_platonic_text(rows))
    return EXIT_OK


def _diagnostics(w: np.ndarray) -> dict:
    vals = np.linalg.eigvalsh(w)
    return {"trace": float(np.trace(w).real), "min_eigenvalue": float(vals[0]), "max_eigenvalue": float(vals[-1])}


def run_reconstruct(cfg: RunConfig) -> int:
    if cfg.list_required:
        if cfg.dim is None or cfg.dim < 1:
            raise FrameError("--list-required needs --dim D >= 1")
        effects = basis_sample_effects(cfg.dim)
        _emit(cfg, io.dumps(io.frame_samples_to_json(effects, [None] * len(effects))))
        return EXIT_OK
    effects, values = io.frame_samples_from_json(io.load_json(_require_input(cfg)))
    try:
        w, residual = reconstruct_from_samples(effects, values)
    except NotDensity as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.matrix is not None:
            diag = _diagnostics(exc.matrix)
            print(
                f"  trace = {_fmt(diag['trace'])}, min eigenvalue = {_fmt(diag['min_eigenvalue'])}",
                file=sys.stderr,
            )
        return EXIT_SEMANTIC
    diag = _diagnostics(w.matrix)
    print(
        f"reconstructed d={w.dim}: trace = {_fmt(diag['trace'])}, "
        f"min eigenvalue = {_fmt(diag['min_eigenvalue'])}, residual = {_fmt(residual)}",
        file=sys.stderr,
    )
    if cfg.format == "json" or cfg.output_path is not None:
        _emit(cfg, io.dumps(io.matrix_to_json(w.matrix)))
    else:
        _emit(cfg, _matrix_text(w.matrix))
    return EXIT_OK


def _matrix_text(m: np.ndarray) -> str:
    lines = []
    for row in m:
        lines.append("  ".join(f"{z.real:>13.5e}{z.imag:>+13.5e}j" for z in row))
    return "\n".join(lines) + "\n"


def run_decompose(cfg: RunConfig) -> int:
    m = io.matrix_from_json(io.load_json(_require_input(cfg)))
    dec = convex_decompose(Effect(m))
    if cfg.format == "json":
        _emit(cfg, io.dumps(io.decomposition_to_json(dec)))
        return EXIT_OK
    lines = [f"convex decomposition of a d={m.shape[0]} effect into nested projectors"]
    lines.append(f"{'weight':>12}  {'rank':>4}")
    for w, p in dec.terms:
        lines.append(f"{_fmt(w):>12}  {p.rank:>4}")
    err = float(np.linalg.norm(dec.reconstruct() - m))
    lines.append(f"weight sum = {_fmt(float(sum(dec.weights)))}, reconstruction error = {_fmt(err)}")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def run_validate(cfg: RunConfig) -> int:
    obj = io.load_json(_require_input(cfg))
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "vector_set":
        vs = io.vector_set_from_json(obj)
        povm = effects_from_vector_set(vs)
        report = {"kind": "validation", "input_kind": kind, "valid": True, "outcomes": len(povm), "residue": povm.residue}
    elif kind == "povm":
        povm = validate_povm(io.povm_from_json(obj))
        report = {"kind": "validation", "input_kind": kind, "valid": True, "outcomes": len(povm), "residue": povm.residue}
    elif isinstance(obj, dict) and "dim" in obj:
        m = io.matrix_from_json(obj)
        eff = is_effect(m)
        try:
            DensityOperator(m)
            dens = True
        except NotDensity:
            dens = False
        report = {"kind": "validation", "input_kind": "matrix", "valid": True, "effect": eff, "density": dens}
    else:
        raise FrameError("kind: expected 'povm', 'vector_set' or a matrix object")
    if cfg.format == "json":
        _emit(cfg, io.dumps(report))
    else:
        parts = []
        for k, v in report.items():
            if k == "kind":
                continue
            parts.append(f"{k:<11} {_fmt(v) if isinstance(v, float) else v}")
        _emit(cfg, "\n".join(parts) + "\n")
    return EXIT_OK


def run_catalog(cfg: RunConfig) -> int:
    if cfg.name is None:
        raise FrameError(f"catalog needs --name; choose from {', '.join(CATALOG_NAMES)}")
    entry = builtin_set(cfg.name, cfg.n)
    if cfg.format == "json" or cfg.output_path is not None:
        _emit(cfg, io.dumps(io.vector_set_to_json(entry.vectors)))
    else:
        lines = [f"{entry.name}: {entry.notes}"]
        lines += [f"{x:>14.6e} {y:>14.6e} {z:>14.6e}" for x, y, z in entry.vectors.vectors]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "analyze": run_analyze,
    "table": run_table,
    "reconstruct": run_reconstruct,
    "decompose": run_decompose,
    "validate": run_validate,
    "catalog": run_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="input JSON file")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("--tol", type=float, help="zero threshold on |sum_j Y_lr(n_j)| (default 1e-8*sqrt(N))")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for randomized steps (default 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--name", help="catalog set: " + ", ".join(CATALOG_NAMES))
    common.add_argument("--n", type=int, help="vertex count for --name polygon")

    parser = argparse.ArgumentParser(
        prog="povm-frames",
        description="Analyze probability assignments on qubit POVM families and reconstruct density operators.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "analyze": "admissible harmonics of a vector set (--input FILE or --name NAME)",
        "table": "admissible harmonics of the five platonic solids",
        "reconstruct": "density operator from frame-function samples",
        "decompose": "convex decomposition of an effect into nested projectors",
        "validate": "validate a POVM, vector set or matrix file",
        "catalog": "print a built-in vector set (JSON with --format json or --output)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        default = L_MAX_TABLE if name == "table" else L_MAX_ANALYSIS
        p.add_argument("--lmax", type=int, default=default, help=f"largest l examined (default {default})")
        if name == "reconstruct":
            p.description = (
                "Reconstruct W from a frame_samples file by linear inversion of tr(W E_k) = v_k. "
                "The sample effects must span the d^2-dimensional operator space. The minimal "
                "required set is printed by --list-required --dim D: the identity, then "
                "(tau - lo)/(hi - lo) for each generalized Gell-Mann matrix tau with extreme "
                "eigenvalues lo, hi. Fill in the values and pass the file back with --input."
            )
            p.add_argument("--list-required", action="store_true", help="print the required sample effects")
            p.add_argument("--dim", type=int, help="dimension for --list-required")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            subcommand=args.subcommand,
            input_path=args.input,
            output_path=args.output,
            l_max=args.lmax,
            tol=args.tol,
            seed=args.seed,
            format=args.format,
            name=args.name,
            n=args.n,
            list_required=getattr(args, "list_required", False),
            dim=getattr(args, "dim", None),
        )
        return COMMANDS[cfg.subcommand](cfg)
    except NotDensity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except FrameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
