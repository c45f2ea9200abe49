"""Command-line front end: reduce, solve, filter-check, build, verify, export.

Exit codes: 0 success, 1 usage error, 2 reduction failure, 3 solver or
residual failure, 4 I/O or format failure.  Reruns with identical inputs and
seeds produce byte-identical output files.  The environment variable
FRAMELET_THREADS caps FFT worker parallelism.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
import scipy.fft

from .errors import (DegenerateInput, FrameletError, GridTooCoarse,
                     InvalidN0, MismatchedFilter, NoConvergence, NotReducible)
from .fields import SampledField, csv_text, from_csv, to_csv
from .lattice import (CANONICAL_FORMS, Reduction, as_int_matrix,
                      reduce_to_canonical, special_vectors)
from .lawton import (SolverOptions, filter_from_json_dict,
                     filter_to_json_dict, residuals, solve)
from .scaling import SynthesisParams
from .verify import make_report, standard_suite
from .wavelet import WaveletSystem, build_system

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REDUCE = 2
EXIT_SOLVE = 3
EXIT_IO = 4

_FIELD_FILES = {"phi": "phi.csv", "psi_c": "psi_c.csv", "psi": "psi.csv"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_matrix(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated integers, got {text!r}")
    try:
        entries = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"matrix entries must be integers, got {text!r}") from None
    return as_int_matrix([entries[:2], entries[2:]])


def _parse_levels(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"expected LO:HI, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f"empty level range {text!r}")
    return lo, hi


def _dump_json(obj, path: Path | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _load_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MismatchedFilter(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise MismatchedFilter(f"{path}: expected a JSON object")
    return obj


def _threads() -> int | None:
    raw = os.environ.get("FRAMELET_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"FRAMELET_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"FRAMELET_THREADS must be >= 1, got {n}")
    return n


def _worker_context():
    n = _threads()
    return scipy.fft.set_workers(n) if n else contextlib.nullcontext()


# ---------------------------------------------------------------------------
# persistence helpers


def system_to_json_dict(system: WaveletSystem) -> dict:
    p = system.params
    return {
        "matrix_a0": system.a0.tolist(),
        "canonical_index": system.index,
        "canonical": system.canonical.tolist(),
        "s": system.reduction.s.tolist(),
        "ell": list(system.ld.ell),
        "q": list(system.ld.q),
        "atq": list(system.ld.atq),
        "coset_generators": [list(g) for g in system.ld.coset_generators],
        "filter": filter_to_json_dict(system.h, system.canonical),
        "synthesis": {"depth": p.j, "grid_n": p.grid_n,
                      "extent_pi": p.grid_extent / math.pi},
    }


def save_system(system: WaveletSystem, out_dir: Path,
                report: dict | None = None) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    _dump_json(system_to_json_dict(system), out_dir / "system.json")
    for name, fname in _FIELD_FILES.items():
        to_csv(getattr(system, name), out_dir / fname)
    if report is not None:
        _dump_json(report, out_dir / "report.json")


def load_system(in_dir: Path) -> WaveletSystem:
    doc = _load_json(in_dir / "system.json")
    try:
        a0 = as_int_matrix(doc["matrix_a0"])
        index = int(doc["canonical_index"])
        s = as_int_matrix(doc["s"])
        h, fmat = filter_from_json_dict(doc["filter"])
        syn = doc["synthesis"]
        params = SynthesisParams(j=int(syn["depth"]), grid_n=int(syn["grid_n"]),
                                 grid_extent=float(syn["extent_pi"]) * math.pi)
    except (KeyError, TypeError, ValueError) as exc:
        raise MismatchedFilter(f"system.json: {exc}") from exc
    if index not in CANONICAL_FORMS:
        raise MismatchedFilter(f"system.json: unknown canonical index {index}")
    red = Reduction(s=s, index=index)
    if not np.array_equal(s @ a0, red.canonical @ s):
        raise MismatchedFilter("system.json: S does not conjugate A0 to its "
                               "canonical form")
    if not np.array_equal(fmat, red.canonical):
        raise MismatchedFilter("system.json: filter block carries a different "
                               "matrix than the canonical form")
    fields = {}
    for name, fname in _FIELD_FILES.items():
        path = in_dir / fname
        try:
            fields[name] = from_csv(path)
        except OSError as exc:
            raise MismatchedFilter(f"cannot read {path}: {exc}") from exc
    phi = fields["phi"]
    fields["phi"] = SampledField(
        origin=phi.origin, step=phi.step, values=phi.values, label=phi.label,
        support_box=phi.support_box,
        meta={"n0": h.n0, "j": params.j})
    return WaveletSystem(a0=a0, reduction=red, ld=special_vectors(index),
                         h=h, phi=fields["phi"], psi_c=fields["psi_c"],
                         psi=fields["psi"], params=params)


# ---------------------------------------------------------------------------
# commands


def _cmd_reduce(args) -> int:
    red = reduce_to_canonical(args.matrix, max_bound=args.max_bound)
    _dump_json({"index": red.index, "canonical": red.canonical.tolist(),
                "s": red.s.tolist()}, args.out)
    return EXIT_OK


def _solver_options(args) -> SolverOptions:
    return SolverOptions(seed=args.seed, starts=args.starts,
                         max_iter=args.max_iter, tol=args.tol,
                         complex_coeffs=args.complex_coeffs)


def _cmd_solve(args) -> int:
    red = reduce_to_canonical(args.matrix)
    h = solve(red.canonical, args.n0, _solver_options(args))
    _dump_json(filter_to_json_dict(h, red.canonical), args.out)
    return EXIT_OK


def _cmd_filter_check(args) -> int:
    doc = _load_json(args.filter)
    h, c = filter_from_json_dict(doc)
    r = residuals(h, c)
    _dump_json({"max_abs": r.max_abs, "sum_residual": abs(r.sum),
                "tol": args.tol, "ok": r.max_abs <= args.tol}, args.out)
    return EXIT_OK if r.max_abs <= args.tol else EXIT_SOLVE


def _cmd_build(args) -> int:
    params = SynthesisParams(j=args.depth, grid_n=args.grid_n,
                             grid_extent=args.extent_pi * math.pi)
    h = None
    if args.filter is not None:
        doc = _load_json(args.filter)
        h, stored = filter_from_json_dict(doc)
        red = reduce_to_canonical(args.matrix)
        if not np.array_equal(stored, red.canonical):
            raise MismatchedFilter(
                "filter file was solved for a different canonical form")
        if h.n0 != args.n0:
            raise MismatchedFilter(
                f"filter file has N0={h.n0}, command asked for {args.n0}")
    system = build_system(args.matrix, args.n0,
                          solver_opts=_solver_options(args),
                          synth_params=params, h=h)
    report = None
    if args.report:
        rep = make_report(system, standard_suite(step=5.0 / args.grid),
                          levels=args.levels)
        report = rep.to_json_dict()
    save_system(system, args.out, report)
    if report is not None and not report["passed"]:
        failing = sorted(k for k, v in report["checks"].items() if not v["pass"])
        print("report: FAILING checks: " + ", ".join(failing), file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    system = load_system(args.system_dir)
    rep = make_report(system, standard_suite(step=5.0 / args.grid),
                      levels=args.levels)
    doc = rep.to_json_dict()
    _dump_json(doc, args.system_dir / "report.json")
    if args.out is not None:
        _dump_json(doc, args.out)
    return EXIT_OK if rep.passed else EXIT_SOLVE


def _cmd_export(args) -> int:
    if args.what in _FIELD_FILES:
        path = args.system_dir / _FIELD_FILES[args.what]
        text = csv_text(from_csv(path))  # round-trip through the reader
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        return EXIT_OK
    if args.what == "report":
        _dump_json(_load_json(args.system_dir / "report.json"), args.out)
        return EXIT_OK
    doc = _load_json(args.system_dir / "system.json")
    if args.what == "filter":
        doc = doc.get("filter")
        if not isinstance(doc, dict):
            raise MismatchedFilter("system.json has no filter block")
        filter_from_json_dict(doc)  # validate before re-emitting
    _dump_json(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def _add_matrix(p):
    p.add_argument("--matrix", required=True, type=_parse_matrix,
                   metavar="a,b,c,d", help="row-major 2x2 integer matrix")


def _add_solver(p):
    p.add_argument("--n0", type=int, default=1, help="filter support half-width")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for restarts")
    p.add_argument("--starts", type=int, default=16,
                   help="number of random restarts after the closed-form start")
    p.add_argument("--max-iter", type=int, default=200, dest="max_iter")
    p.add_argument("--tol", type=float, default=1e-12,
                   help="residual tolerance, in (0, 1e-6]")
    p.add_argument("--complex", action="store_true", dest="complex_coeffs",
                   help="solve for complex-valued taps")


def _add_synthesis(p):
    p.add_argument("--depth", type=int, default=20,
                   help="partial-product depth J")
    p.add_argument("--grid-n", type=int, default=1024, dest="grid_n",
                   help="frequency grid nodes per axis (power of two)")
    p.add_argument("--extent-pi", type=float, default=32.0, dest="extent_pi",
                   help="frequency half-width in units of pi")


def _add_verify_opts(p):
    p.add_argument("--levels", type=_parse_levels, default=(-6, 6),
                   metavar="LO:HI", help="wavelet level window")
    p.add_argument("--grid", type=int, default=160,
                   help="test-function grid nodes per axis over [-2.5, 2.5)")


def _add_out(p, *, required=False, kind="file"):
    p.add_argument("--out", type=Path, required=required, default=None,
                   help=f"output {kind} (default: stdout)" if not required
                   else f"output {kind}")


def _build_parser() -> _Parser:
    top = _Parser(prog="framelet2d",
                  description="Construct and certify compactly supported "
                              "normalized tight frame wavelets for 2x2 "
                              "determinant-two dilations.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[], help="conjugate a matrix to its "
                       "canonical form")
    _add_matrix(p)
    p.add_argument("--max-bound", type=int, default=8, dest="max_bound",
                   help="largest conjugator entry searched")
    _add_out(p)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("solve", help="solve the quadratic tap system")
    _add_matrix(p)
    _add_solver(p)
    _add_out(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("filter-check", help="recompute residuals of a stored "
                       "filter")
    p.add_argument("--filter", type=Path, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_out(p)
    p.set_defaults(fn=_cmd_filter_check)

    p = sub.add_parser("build", help="run the full pipeline into a system "
                       "directory")
    _add_matrix(p)
    _add_solver(p)
    _add_synthesis(p)
    _add_verify_opts(p)
    p.add_argument("--filter", type=Path, default=None,
                   help="reuse a previously solved filter file")
    p.add_argument("--no-report", action="store_false", dest="report",
                   help="skip the certification report")
    _add_out(p, required=True, kind="directory")
    p.set_defaults(fn=_cmd_build)

    p = sub.add_parser("verify", help="re-certify a persisted system")
    p.add_argument("--system", type=Path, required=True, dest="system_dir",
                   help="system directory written by build")
    _add_verify_opts(p)
    _add_out(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("export", help="re-emit one artifact of a system "
                       "directory")
    p.add_argument("--system", type=Path, required=True, dest="system_dir")
    p.add_argument("--what", required=True,
                   choices=sorted(_FIELD_FILES) + ["filter", "report", "system"])
    _add_out(p)
    p.set_defaults(fn=_cmd_export)
    return top


def _validate_common(args) -> None:
    for name in ("n0", "seed", "starts", "max_iter", "depth", "grid_n",
                 "grid", "max_bound"):
        value = getattr(args, name, None)
        if value is not None and name != "seed" and value <= 0:
            raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if name == "seed" and value is not None and value < 0:
            raise ValueError("--seed must be nonnegative")
    tol = getattr(args, "tol", None)
    if tol is not None and not 0 < tol <= 1e-6:
        raise ValueError("--tol must lie in (0, 1e-6]")
    extent = getattr(args, "extent_pi", None)
    if extent is not None and extent <= 0:
        raise ValueError("--extent-pi must be positive")


def _glue_level_values(argv: list[str]) -> list[str]:
    """Join "--levels -6:6" into one token.

    argparse reads a bare "-6:6" as an option flag (it is not a plain
    negative number), so the documented space-separated form needs the
    value glued on with "=".
    """
    merged: list[str] = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--levels" and i + 1 < len(argv):
            merged.append(tok + "=" + argv[i + 1])
            skip = True
        else:
            merged.append(tok)
    return merged


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(_glue_level_values([str(a) for a in argv]))
    try:
        _validate_common(args)
        _threads()
    except ValueError as exc:
        print(f"framelet2d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with _worker_context():
            return args.fn(args)
    except BrokenPipeError:
        # stdout consumer (head, less, ...) closed early: not a failure.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except NotReducible as exc:
        print(f"framelet2d: reduction failed: {exc}", file=sys.stderr)
        return EXIT_REDUCE
    except NoConvergence as exc:
        print(f"framelet2d: solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    except (MismatchedFilter, OSError) as exc:
        print(f"framelet2d: i/o or format failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidN0, GridTooCoarse, DegenerateInput, ValueError) as exc:
        print(f"framelet2d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FrameletError as exc:  # pragma: no cover - safety net
        print(f"framelet2d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
