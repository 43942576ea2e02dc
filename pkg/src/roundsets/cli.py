"""Command line front end.

Exit codes: 0 success / member, 1 negative answer (non-member or provably
empty result), 2 validation or parse failure, 3 I/O failure, 4 the solver
could not decide at the working tolerances, 5 unsupported combination.

Reports are printed to stdout as a single JSON object with deterministic
content (digests, verdicts, residuals, seeds, tolerances); timing goes to
stderr so byte-identical reruns stay byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import ccg_ops, rcg_ops
from .errors import (
    DimensionError,
    NormError,
    ParseError,
    PartitionError,
    RadiusError,
    RoundsetsError,
    ShapeError,
    UnsupportedOperation,
)
from .feasibility import SolverConfig, Status, ccg_member, rcg_member
from .oracle import raster_membership
from .render import RenderStyle, export_csv, render_svg
from .serialize import emit_set_json, parse_set_json
from .sets import Ccg, Halfspace, Rcg

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INDETERMINATE = 4
EXIT_UNSUPPORTED = 5

_VALIDATION_ERRORS = (
    ParseError,
    ShapeError,
    PartitionError,
    NormError,
    RadiusError,
    DimensionError,
)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _read_bytes(path: str) -> bytes:
    return Path(path).read_bytes()


def _load(path: str):
    data = _read_bytes(path)
    return parse_set_json(data), {"path": path, "sha256": _sha256(data)}


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, float)):
        f = float(v)
        if math.isfinite(f):
            return f
        return "inf" if f > 0 else ("-inf" if f < 0 else "nan")
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _print_report(report: dict) -> None:
    print(json.dumps(_jsonable(report), indent=2))


def _config(args) -> SolverConfig:
    return SolverConfig(
        tol_feas=args.tol_feas,
        tol_infeas=args.tol_infeas,
        max_iter=args.max_iter,
        force_general=getattr(args, "force_general", False),
    )


def _config_report(args) -> dict:
    return {
        "tol_feas": args.tol_feas,
        "tol_infeas": args.tol_infeas,
        "max_iter": args.max_iter,
        "seed": args.seed,
        "force_general": getattr(args, "force_general", False),
    }


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-feas", type=float, default=1e-7, dest="tol_feas")
    p.add_argument("--tol-infeas", type=float, default=1e-6, dest="tol_infeas")
    p.add_argument("--max-iter", type=int, default=5000, dest="max_iter")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--force-general", action="store_true", dest="force_general")


def _kind(value) -> str:
    return {Ccg: "ccg", Rcg: "rcg", Halfspace: "halfspace"}[type(value)]


def _write_set(path: str, value) -> dict:
    data = emit_set_json(value) + b"\n"
    Path(path).write_bytes(data)
    return {"path": path, "sha256": _sha256(data)}


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    value, digest = _load(args.set)
    info = {"kind": _kind(value)}
    if isinstance(value, Ccg):
        info.update(dim=value.dim, generators=value.n_generators, equalities=value.n_constraints)
    elif isinstance(value, Rcg):
        info.update(
            dim=value.dim,
            outer_generators=value.outer.n_generators,
            inner_generators=value.inner.n_generators,
        )
    else:
        info.update(dim=value.dim)
    _print_report({"command": "validate", "inputs": {"set": digest}, "result": info})
    return EXIT_OK


def cmd_member(args) -> int:
    value, digest = _load(args.set)
    point = [float(t) for t in args.point.split(",")]
    cfg = _config(args)
    if isinstance(value, Halfspace):
        raise ShapeError("membership queries need a set, got a halfspace")
    if isinstance(value, Rcg):
        verdict = rcg_member(point, value, cfg)
    else:
        verdict = ccg_member(point, value, cfg)
    _print_report(
        {
            "command": "member",
            "inputs": {"set": digest},
            "point": point,
            "config": _config_report(args),
            "result": {
                "verdict": verdict.status.value,
                "residual": verdict.residual,
                "iterations": verdict.iterations,
                "witness": verdict.witness,
            },
        }
    )
    if verdict.status is Status.FEASIBLE:
        return EXIT_OK
    if verdict.status is Status.INFEASIBLE:
        return EXIT_NEGATIVE
    return EXIT_INDETERMINATE


def _op_map(args, report):
    value, digest = _load(args.set)
    report["inputs"]["set"] = digest
    try:
        T = json.loads(args.matrix)
    except json.JSONDecodeError as err:
        raise ParseError(f"--matrix is not valid JSON: {err}") from err
    report["matrix"] = T
    if isinstance(value, Rcg):
        return rcg_ops.linear_map(T, value)
    if isinstance(value, Ccg):
        return ccg_ops.linear_map(T, value)
    raise ShapeError("map needs a set, got a halfspace")


def _op_pairwise(args, report, ccg_fn, rcg_fn):
    a, da = _load(args.a)
    b, db = _load(args.b)
    report["inputs"]["a"] = da
    report["inputs"]["b"] = db
    if isinstance(a, Halfspace) or isinstance(b, Halfspace):
        raise ShapeError("this operation combines sets, not halfspaces")
    if isinstance(a, Rcg):
        return rcg_fn(a, b)
    if isinstance(b, Rcg):
        return rcg_fn(b, a)
    return ccg_fn(a, b)


def cmd_op(args) -> int:
    report = {"command": "op", "op": args.op_name, "inputs": {}}
    if args.op_name == "map":
        result = _op_map(args, report)
    elif args.op_name == "minksum":
        result = _op_pairwise(args, report, ccg_ops.minkowski, rcg_ops.minkowski_with_ccg)
    elif args.op_name == "intersect":
        result = _op_pairwise(args, report, ccg_ops.intersect, rcg_ops.intersect_with_ccg)
    elif args.op_name == "halfspace":
        return _op_halfspace(args, report)
    elif args.op_name == "annulus":
        return _op_annulus(args, report)
    else:
        return _op_rz_intersect(args, report)
    report["result"] = {"kind": _kind(result), "output": _write_set(args.out, result)}
    _print_report(report)
    return EXIT_OK


def _op_halfspace(args, report) -> int:
    value, digest = _load(args.set)
    hs, hdigest = _load(args.halfspace)
    report["inputs"]["set"] = digest
    report["inputs"]["halfspace"] = hdigest
    if isinstance(value, Rcg):
        raise UnsupportedOperation("halfspace cuts of ring sets are not defined here")
    if not isinstance(value, Ccg) or not isinstance(hs, Halfspace):
        raise ShapeError("halfspace op needs a ccg and a halfspace")
    cut = ccg_ops.halfspace_cut(value, hs)
    report["result"] = {"d_max": cut.d_max, "empty": cut.is_empty}
    if cut.is_empty:
        _print_report(report)
        return EXIT_NEGATIVE
    report["result"]["output"] = _write_set(args.out, cut.result)
    _print_report(report)
    return EXIT_OK


def _op_annulus(args, report) -> int:
    value, digest = _load(args.set)
    report["inputs"]["set"] = digest
    if not isinstance(value, Rcg):
        raise ShapeError("annulus probes ring sets only")
    form = rcg_ops.try_annulus_form(value)
    if form is None:
        report["result"] = {"applicable": False}
    else:
        report["result"] = {
            "applicable": True,
            "lower": form.lower,
            "upper": form.upper,
            "p_outer": form.p_outer,
            "p_inner": form.p_inner,
            "c": form.c,
            "G": form.G,
        }
    _print_report(report)
    return EXIT_OK


def _op_rz_intersect(args, report) -> int:
    s, ds = _load(args.a)
    y, dy = _load(args.b)
    report["inputs"]["a"] = ds
    report["inputs"]["b"] = dy
    if not isinstance(s, Rcg) or not isinstance(y, Ccg):
        raise ShapeError("rz-intersect needs a ring zonotope and a zonotope")
    rz = rcg_ops.rz_intersect_zonotope(s, y)
    report["result"] = {
        "kind": "rcg",
        "output": _write_set(args.out, rz.result),
        "param_region": None
        if rz.param_region is None
        else {"lower": rz.param_region.lower, "upper": rz.param_region.upper},
    }
    _print_report(report)
    return EXIT_OK


def _parse_bbox(text: str) -> tuple:
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 4:
        raise ShapeError("--bbox needs xmin,xmax,ymin,ymax")
    return tuple(parts)


def _parse_res(text: str) -> tuple:
    parts = [int(t) for t in text.split(",")]
    if len(parts) != 2:
        raise ShapeError("--res needs nx,ny")
    return tuple(parts)


def _raster_one(value, bbox, res, cfg, fill, csv_path, svg_path):
    grid = raster_membership(value, bbox, res[0], res[1], cfg)
    outputs = {}
    if csv_path:
        data = export_csv(grid)
        Path(csv_path).write_bytes(data)
        outputs["csv"] = {"path": str(csv_path), "sha256": _sha256(data)}
    if svg_path:
        data = render_svg([(grid, RenderStyle(fill=fill))])
        Path(svg_path).write_bytes(data)
        outputs["svg"] = {"path": str(svg_path), "sha256": _sha256(data)}
    return grid, outputs


def cmd_raster(args) -> int:
    value, digest = _load(args.set)
    if isinstance(value, Halfspace):
        raise ShapeError("raster needs a set, got a halfspace")
    bbox = _parse_bbox(args.bbox)
    res = _parse_res(args.res)
    grid, outputs = _raster_one(
        value, bbox, res, _config(args), args.fill, args.csv, args.svg
    )
    _print_report(
        {
            "command": "raster",
            "inputs": {"set": digest},
            "bbox": list(bbox),
            "res": list(res),
            "config": _config_report(args),
            "result": {
                "filled_fraction": grid.filled_fraction,
                "filled_cells": int(grid.bits.sum()),
                "band_cells": int(grid.band.sum()),
                "outputs": outputs,
            },
        }
    )
    return EXIT_OK


def cmd_batch(args) -> int:
    manifest_path = Path(args.manifest)
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as err:
        raise ParseError(f"manifest is not valid JSON: {err}") from err
    if not isinstance(manifest, dict) or not isinstance(manifest.get("jobs"), list):
        raise ParseError("manifest must be an object with a 'jobs' list")
    out_dir = Path(args.out_dir) if args.out_dir else manifest_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = _config(args)
    jobs = []
    for k, job in enumerate(manifest["jobs"]):
        if not isinstance(job, dict) or "set" not in job:
            raise ParseError(f"job {k} needs a 'set' path")
        set_path = manifest_path.parent / job["set"]
        value, digest = _load(str(set_path))
        bbox = tuple(float(v) for v in job.get("bbox", (-1, 1, -1, 1)))
        res = tuple(int(v) for v in job.get("res", (100, 100)))
        csv_path = out_dir / job["csv"] if "csv" in job else None
        svg_path = out_dir / job["svg"] if "svg" in job else None
        grid, outputs = _raster_one(
            value, bbox, res, cfg, job.get("fill", "#1f77b4"), csv_path, svg_path
        )
        jobs.append(
            {
                "set": digest,
                "bbox": list(bbox),
                "res": list(res),
                "filled_fraction": grid.filled_fraction,
                "outputs": outputs,
            }
        )
    _print_report({"command": "batch", "manifest": str(manifest_path), "jobs": jobs})
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roundsets",
        description="Set calculus for convex generator sets with one exclusion hole.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a set file")
    p.add_argument("set")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("member", help="decide point membership")
    p.add_argument("set")
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_member)

    op = sub.add_parser("op", help="closed-form set operations")
    op_sub = op.add_subparsers(dest="op_name", required=True)

    q = op_sub.add_parser("map", help="linear image of a set")
    q.add_argument("set")
    q.add_argument("--matrix", required=True, help="row-major JSON matrix")
    q.add_argument("-o", "--out", required=True)

    for name, help_text in (
        ("minksum", "Minkowski sum of two sets"),
        ("intersect", "intersection of two sets"),
    ):
        q = op_sub.add_parser(name, help=help_text)
        q.add_argument("a")
        q.add_argument("b")
        q.add_argument("-o", "--out", required=True)

    q = op_sub.add_parser("halfspace", help="cut a ccg with a halfspace")
    q.add_argument("set")
    q.add_argument("halfspace")
    q.add_argument("-o", "--out", required=True)

    q = op_sub.add_parser("annulus", help="closed-form ring layout, if any")
    q.add_argument("set")

    q = op_sub.add_parser("rz-intersect", help="ring zonotope cut by a zonotope")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("-o", "--out", required=True)

    for q in op_sub.choices.values():
        _add_solver_flags(q)
    op.set_defaults(func=cmd_op)

    p = sub.add_parser("raster", help="rasterize membership over a bounding box")
    p.add_argument("set")
    p.add_argument("--bbox", required=True, help="xmin,xmax,ymin,ymax")
    p.add_argument("--res", required=True, help="nx,ny")
    p.add_argument("--csv", help="write the cell grid here")
    p.add_argument("--svg", help="render filled cells here")
    p.add_argument("--fill", default="#1f77b4")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("batch", help="run a manifest of raster jobs")
    p.add_argument("manifest")
    p.add_argument("--out-dir", dest="out_dir")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code = args.func(args)
    except UnsupportedOperation as err:
        print(f"unsupported: {err}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (*_VALIDATION_ERRORS, ValueError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"i/o failure: {err}", file=sys.stderr)
        return EXIT_IO
    except RoundsetsError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"wall_time_s={time.perf_counter() - started:.3f}", file=sys.stderr)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
