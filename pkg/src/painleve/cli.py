"""Command-line front end.

Subcommands:

* ``trajectory`` - integrate one initial-value problem and write a CSV of
  real-axis samples, pole markers and the branch curves.
* ``eigen``      - compute an eigenvalue table and write it as JSON.
* ``constants``  - print the closed-form growth constants; given a table
  produced by ``eigen``, also report the Richardson estimates and their
  deviations from the closed forms.

Every artifact embeds a manifest (command echo, config snapshot, version,
wall time, input hash). Exit codes: 0 success, 2 partial table, 1 failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .asymptotics import closed_form_constants, extract_constant
from .classify import count_toy_maxima
from .equations import EquationKind, InitialData, branch_curve, equation_from_name
from .eigensolver import (
    ModeKind,
    PartialTableError,
    SearchMode,
    eigen_table,
    toy_eigen_table,
)
from .integrator import Direction, IntegrationConfig, IntegrationError, integrate

_EXTRACTION = {
    # (equation, mode): (exponent p, richardson order, split even/odd, constant name)
    ("p1", "slope"): (3.0 / 5.0, 5, False, "p1_slope"),
    ("p1", "value"): (2.0 / 5.0, 4, False, "p1_value"),
    ("p2", "slope"): (2.0 / 3.0, 4, True, "p2_slope"),
    ("p2", "value"): (1.0 / 3.0, 4, False, "p2_value"),
}


def _manifest(args: argparse.Namespace, parser_name: str, extra: dict | None = None) -> dict:
    echo = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    blob = json.dumps(echo, sort_keys=True, default=str)
    manifest = {
        "command": parser_name,
        "arguments": echo,
        "input_sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "tool_version": __version__,
        "wall_time_s": None,  # filled just before writing
    }
    if extra:
        manifest.update(extra)
    return manifest


def _config_from_args(args) -> IntegrationConfig:
    kw = {}
    if getattr(args, "horizon", None) is not None:
        kw["t_horizon"] = args.horizon
    if getattr(args, "rel_tol", None) is not None:
        kw["rel_tol"] = args.rel_tol
    return IntegrationConfig(**kw)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _resolve_direction(eq, flag: str | None) -> Direction:
    if flag is None:
        return Direction.POSITIVE_T if eq.kind is EquationKind.TOY_MODEL else Direction.NEGATIVE_T
    return Direction.NEGATIVE_T if flag == "neg" else Direction.POSITIVE_T


def cmd_trajectory(args) -> int:
    eq = equation_from_name(args.eq)
    direction = _resolve_direction(eq, args.direction)
    cfg = _config_from_args(args)
    init = InitialData(args.y0, args.slope)
    started = time.time()
    try:
        traj = integrate(eq, init, direction, cfg)
    except (IntegrationError, ValueError) as exc:
        print(f"trajectory failed: {exc}", file=sys.stderr)
        return 1
    manifest = _manifest(args, "trajectory", {"stopped_by": traj.stopped_by})

    rt, ry = traj.real_t(), traj.real_y()
    rows = [(float(t), float(y), 0.0) for t, y in zip(rt, ry)]
    rows += [(p.location, float("nan"), 1.0) for p in traj.poles]
    rows.sort(key=lambda r: r[0], reverse=direction is Direction.NEGATIVE_T)

    if eq.kind is EquationKind.TOY_MODEL:
        manifest["maxima_count"] = count_toy_maxima(traj)
    manifest["pole_count"] = len(traj.poles)
    manifest["wall_time_s"] = round(time.time() - started, 6)
    has_branches = eq.kind is not EquationKind.TOY_MODEL

    def branches(t):
        if has_branches and t < 0.0:
            b = float(branch_curve(eq, np.asarray([t]))[0])
            return b, -b
        return None, None

    if args.format == "json":
        payload = {
            "manifest": manifest,
            "columns": ["t", "y", "branch_plus", "branch_minus", "pole_marker"],
            "rows": [[t, None if not np.isfinite(y) else y, *branches(t), int(marker)]
                     for t, y, marker in rows],
        }
        _write(args.out, json.dumps(payload, indent=1, sort_keys=True) + "\n")
        return 0
    lines = ["# manifest: " + json.dumps(manifest, sort_keys=True)]
    lines.append("t,y,branch_plus,branch_minus,pole_marker")
    for t, y, marker in rows:
        bp, bm = branches(t)
        bps = "" if bp is None else f"{bp:.12g}"
        bms = "" if bm is None else f"{bm:.12g}"
        ystr = "" if not np.isfinite(y) else f"{y:.12g}"
        lines.append(f"{t:.12g},{ystr},{bps},{bms},{int(marker)}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _records_payload(records, eq, mode_name, fixed):
    return [
        {
            "index": r.index,
            "value": r.value,
            "bracket_width": r.bracket_width,
            "pole_count": r.pole_count,
            "mode": mode_name,
            "fixed_value": fixed,
        }
        for r in records
    ]


def cmd_eigen(args) -> int:
    eq = equation_from_name(args.eq)
    cfg = _config_from_args(args)
    started = time.time()
    status = 0
    if eq.kind is EquationKind.TOY_MODEL:
        mode_name = "toy"
        try:
            records = toy_eigen_table(args.n, tol=max(args.tol, 1e-8), cfg=cfg)
        except PartialTableError as exc:
            records, status = exc.records, 2
    else:
        mode_name = args.mode
        try:
            records = eigen_table(eq, SearchMode(ModeKind(args.mode)), args.n, tol=args.tol, cfg=cfg)
        except PartialTableError as exc:
            records, status = exc.records, 2
    manifest = _manifest(args, "eigen", {"equation": args.eq, "mode": mode_name})
    manifest["wall_time_s"] = round(time.time() - started, 6)
    if args.format == "csv":
        lines = ["# manifest: " + json.dumps(manifest, sort_keys=True),
                 "index,value,bracket_width,pole_count,mode"]
        lines += [f"{r.index},{r.value:.12g},{r.bracket_width:.6g},{r.pole_count},{mode_name}"
                  for r in records]
        _write(args.out, "\n".join(lines) + "\n")
    else:
        payload = {
            "manifest": manifest,
            "equation": args.eq,
            "mode": mode_name,
            "complete": status == 0,
            "records": _records_payload(records, eq, mode_name, 0.0),
        }
        _write(args.out, json.dumps(payload, indent=1, sort_keys=True) + "\n")
    if status:
        print(f"partial table: {len(records)} of {args.n} records", file=sys.stderr)
    return status


def cmd_constants(args) -> int:
    started = time.time()
    consts = closed_form_constants()
    result = {"closed_forms": consts.as_dict()}
    if args.table:
        try:
            with open(args.table) as fh:
                payload = json.load(fh)
            records = payload["records"]
            eq_name, mode_name = payload["equation"], payload["mode"]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            print(f"cannot read table: {exc}", file=sys.stderr)
            return 1
        if not records:
            print("table holds no records", file=sys.stderr)
            return 1
        if any("value" not in r or "index" not in r for r in records):
            print("table records need 'index' and 'value' fields", file=sys.stderr)
            return 1
        key = (eq_name, mode_name)
        if key not in _EXTRACTION:
            print(f"no extraction rule for equation/mode {key}", file=sys.stderr)
            return 1
        p, order, split, const_name = _EXTRACTION[key]
        values = [r["value"] for r in sorted(records, key=lambda r: r["index"])]
        if split:
            max_order = min(len(values) // 2, (len(values) - 1) // 2) - 1
        else:
            max_order = len(values) - 1
        order = min(order, max_order)
        if order < 1:
            print(f"table too short to extrapolate ({len(values)} records)", file=sys.stderr)
            return 1
        target = consts.as_dict()[const_name]
        if split:
            even, odd = extract_constant(values, p, order, split_even_odd=True)
            result["extrapolation"] = {
                "exponent": p,
                "order": order,
                "even": {"estimate": even.estimate, "stability": even.stability,
                         "deviation": even.estimate - target},
                "odd": {"estimate": odd.estimate, "stability": odd.stability,
                        "deviation": odd.estimate - target},
                "closed_form": target,
            }
        else:
            res = extract_constant(values, p, order)
            result["extrapolation"] = {
                "exponent": p,
                "order": order,
                "estimate": res.estimate,
                "stability": res.stability,
                "closed_form": target,
                "deviation": res.estimate - target,
            }
    manifest = _manifest(args, "constants")
    manifest["wall_time_s"] = round(time.time() - started, 6)
    result["manifest"] = manifest
    _write(args.out, json.dumps(result, indent=1, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="painleve",
        description="Separatrix eigenvalue analysis of the first and second Painleve transcendents",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("trajectory", help="integrate one initial-value problem to CSV")
    p.add_argument("--eq", required=True, choices=["p1", "p2", "toy"])
    p.add_argument("--y0", type=float, default=0.0, help="initial value y(0)")
    p.add_argument("--slope", type=float, default=0.0, help="initial slope y'(0)")
    p.add_argument("--direction", choices=["neg", "pos"], default=None,
                   help="default: neg for p1/p2, pos for toy")
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("eigen", help="critical initial conditions to JSON")
    p.add_argument("--eq", required=True, choices=["p1", "p2", "toy"])
    p.add_argument("--mode", choices=["slope", "value"], default="slope")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("constants", help="closed forms and extrapolation report")
    p.add_argument("--table", default=None, help="JSON table from the eigen subcommand")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IntegrationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
