"""Command-line entry point.

Exit codes: 0 success, 1 bad flags, bad input files or failed checks,
2 no triangle or metric exists (domain, realizability, infeasible target),
3 an iteration did not converge.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import re
import sys
from typing import List, Optional

import numpy as np

from . import complexes, packing, pattern, penner, verify
from .complexes import CellularSurface, TriangulatedSurface
from .errors import (
    ConvergenceError,
    DomainError,
    DomainExitError,
    InfeasibleError,
    InputError,
    ParseError,
    QuadratureError,
    SizeError,
    UnsupportedCaseError,
    ValidationError,
)
from .trig import GeneralizedTriangle, check_type, law_sas

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for domain errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# input helpers -------------------------------------------------------------------

def _floats(text: str, what: str) -> List[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{what} expects comma separated numbers, got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"--{what} values must be finite")
    return vals


def _values(text: str, ids, what: str, key: str) -> List[float]:
    """A single number (same on every id), a comma list in id order, or a JSON file ``{key: {id: value}}``."""
    if os.path.exists(text):
        return complexes.values_by_id(ids, complexes.load_values(text, key), what)
    vals = _floats(text, what)
    if len(vals) == 1:
        return vals * len(ids)
    if len(vals) != len(ids):
        raise UsageError(f"--{what} needs 1 or {len(ids)} values, got {len(vals)}")
    return vals


def _mesh(spec: str, kind):
    surface = complexes.resolve_mesh(spec)
    if not isinstance(surface, kind):
        want = "a triangulated surface" if kind is TriangulatedSurface else "a cellular surface"
        raise UsageError(f"{spec!r} is not {want}")
    return surface


def _digest(args, surface=None) -> str:
    # output destinations do not change the result
    doc = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "json", "trace")}
    if surface is not None:
        doc["mesh_data"] = surface.to_dict()
    return hashlib.sha256(json.dumps(doc, sort_keys=True, default=str).encode()).hexdigest()


def _floatlist(x) -> List[float]:
    return [float(v) for v in np.asarray(x, dtype=float).ravel()]


def _by_id(ids, x) -> dict:
    return {str(i): float(v) for i, v in zip(ids, x)}


def _emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_trace(path: str, ids, traj) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", *[f"r_{i}" for i in ids], *[f"K_{i}" for i in ids], "gradnorm"])
    for row in traj.rows():
        w.writerow([repr(float(v)) for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _solve_summary(out) -> dict:
    return {"iterations": int(out.iterations), "residual": float(out.residual)}


def _flow_summary(traj) -> dict:
    return {
        "steps": len(traj.times) - 1,
        "t_final": float(traj.times[-1]),
        "stopped": traj.stopped,
        "gradnorm_final": float(traj.gradnorms[-1]),
        "energy_gain": float(traj.energies[-1]),
    }


# commands --------------------------------------------------------------------------

def cmd_verify_laws(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    try:
        types = verify.parse_types(args.types)
    except InputError as exc:
        raise UsageError(str(exc)) from None
    report = verify.law_report(types, args.samples, args.seed, args.tol)
    report["inputs_digest"] = _digest(args)
    _emit(report, args.json)
    for f in report["failures"]:
        print(f"FAILED {f}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_USAGE


def cmd_triangle(args) -> int:
    try:
        ttype = check_type(tuple(int(x) for x in args.type.split(",")))
    except ValueError:
        raise UsageError(f"bad --type {args.type!r}") from None
    vals = _floats(args.values, "values")
    if len(vals) != 3:
        raise UsageError("--values needs three numbers")
    report = {"command": "triangle", "given": args.given}
    if args.given == "angles":
        tri = GeneralizedTriangle.from_angles(ttype, vals)
    elif args.given == "lengths":
        tri = GeneralizedTriangle.from_lengths(ttype, vals)
    else:
        third, tri = law_sas(ttype, vals[0], vals[1], vals[2])
        report["third_side"] = float(third)
    report["triangle"] = tri.to_dict()
    _emit(report, args.out)
    return EXIT_OK


def cmd_penner(args) -> int:
    surface = _mesh(args.mesh, TriangulatedSurface)
    ids = list(surface.edge_ids)
    report = {"command": f"penner {args.action}", "mesh": args.mesh, "inputs_digest": _digest(args, surface)}
    if args.action == "map":
        if args.lengths is None:
            raise UsageError("penner map needs --lengths")
        l = _values(args.lengths, ids, "lengths", "lengths")
        report["z"] = _by_id(ids, penner.psi_map(surface, l))
    elif args.action == "solve":
        if args.z is None:
            raise UsageError("penner solve needs --z")
        z = _values(args.z, ids, "z", "z")
        out = penner.psi_solve(surface, z, tol=args.tol, max_iter=args.max_iter)
        report["lengths"] = _by_id(ids, out.x)
        report.update(_solve_summary(out))
    else:
        if args.z is None:
            raise UsageError("penner check-polytope needs --z")
        z = _values(args.z, ids, "z", "z")
        ok, witness = penner.polytope_check(surface, z)
        report["inside"] = ok
        if not ok:
            report["witness"] = [str(x) for x in witness.alternating(surface)]
            report["witness_sum"] = float(sum(z[e] for e in witness.edges))
            _emit(report, args.out)
            return EXIT_DOMAIN
    _emit(report, args.out)
    return EXIT_OK


def cmd_packing(args) -> int:
    surface = _mesh(args.mesh, TriangulatedSurface)
    if args.classic and (args.eps, args.delta) != (1, 1):
        raise UsageError("--classic is only defined for (1,1,1) packings")
    if args.phi is None:
        raise UsageError("packing needs --phi")
    vids = list(surface.vertices)
    phi = _values(args.phi, list(surface.edge_ids), "phi", "edge_weights")
    config = packing.PackingConfig(args.eps, args.delta, tuple(phi))
    report = {"command": f"packing {args.action}", "mesh": args.mesh, "inputs_digest": _digest(args, surface)}

    def curv(k):
        return packing.classic_curvature(k) if args.classic else k

    def target():
        if args.target is None:
            raise UsageError(f"packing {args.action} needs --target")
        t = np.array(_values(args.target, vids, "target", "vertex_values"))
        # classic targets are cone deficits 2 pi - K~
        return packing.classic_curvature(t) if args.classic else t

    if args.action == "curvature":
        r = _need_r(args, vids)
        report["curvature"] = _by_id(vids, curv(packing.curvature_tilde(config, surface, r)))
    elif args.action == "solve":
        out = packing.packing_solve(config, surface, target(), tol=args.tol, max_iter=args.max_iter)
        report["r"] = _by_id(vids, out.x)
        report.update(_solve_summary(out))
    else:
        r = _need_r(args, vids)
        k_hat = target() if args.target is not None else None
        traj = packing.packing_flow(
            config, surface, r, k_hat, dt=args.dt, steps=args.steps,
            orientation=args.orientation, stop_tol=args.stop_tol,
        )
        report["r"] = _by_id(vids, traj.final)
        report["curvature"] = _by_id(vids, curv(traj.curvatures[-1]))
        report.update(_flow_summary(traj))
        if args.trace:
            _write_trace(args.trace, vids, traj)
    _emit(report, args.out)
    return EXIT_OK


def cmd_pattern(args) -> int:
    if args.classic:
        raise UsageError("--classic is only defined for (1,1,1) packings")
    surface = _mesh(args.mesh, CellularSurface)
    if args.theta is None:
        raise UsageError("pattern needs --theta")
    fids = list(surface.face_ids)
    eids = list(surface.edge_ids)
    theta = _values(args.theta, eids, "theta", "edge_weights")
    config = pattern.PatternConfig(args.eps, args.delta, args.h, dict(zip(eids, theta)))
    report = {"command": f"pattern {args.action}", "mesh": args.mesh, "inputs_digest": _digest(args, surface)}

    def target():
        if args.target is None:
            raise UsageError(f"pattern {args.action} needs --target")
        return np.array(_values(args.target, fids, "target", "face_values"))

    if args.action == "curvature":
        r = _need_r(args, fids, "face_values")
        report["curvature"] = _by_id(fids, pattern.kh_curvature(config, surface, r))
    elif args.action == "solve":
        out = pattern.pattern_solve(config, surface, target(), tol=args.tol, max_iter=args.max_iter)
        report["r"] = _by_id(fids, out.x)
        report.update(_solve_summary(out))
    else:
        r = _need_r(args, fids, "face_values")
        k_hat = target() if args.target is not None else None
        traj = pattern.pattern_flow(
            config, surface, r, k_hat, dt=args.dt, steps=args.steps,
            orientation=args.orientation, stop_tol=args.stop_tol,
        )
        report["r"] = _by_id(fids, traj.final)
        report["curvature"] = _by_id(fids, traj.curvatures[-1])
        report.update(_flow_summary(traj))
        if args.trace:
            _write_trace(args.trace, fids, traj)
    _emit(report, args.out)
    return EXIT_OK


def _need_r(args, ids, key="vertex_values"):
    if args.r is None:
        raise UsageError("this action needs --r")
    return np.array(_values(args.r, ids, "r", key))


# parser ------------------------------------------------------------------------------

def _vertex_type(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected -1, 0 or 1, got {text!r}") from None
    if v not in (-1, 0, 1):
        raise argparse.ArgumentTypeError(f"expected -1, 0 or 1, got {text!r}")
    return v


def _finite(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def _curvature_args(p, weight_flag):
    p.add_argument("action", choices=["curvature", "solve", "flow"])
    p.add_argument("--mesh", required=True, help="mesh file or builtin name")
    p.add_argument("--eps", type=_vertex_type, required=True)
    p.add_argument("--delta", type=_vertex_type, required=True)
    p.add_argument(weight_flag, help="one number, a comma list in edge order, or a JSON file")
    p.add_argument("--r", help="radii: one number, a comma list or a JSON file")
    p.add_argument("--target", help="prescribed curvature: one number, a comma list or a JSON file")
    p.add_argument("--tol", type=_finite, default=1e-12)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--dt", type=_finite, default=0.01)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--stop-tol", type=_finite, default=None)
    p.add_argument("--orientation", choices=list(packing.ORIENTATIONS), default="stable")
    p.add_argument("--trace", help="CSV file for the flow trace")
    p.add_argument("--classic", action="store_true", help="report 2 pi - K~ ((1,1,1) packings only)")
    p.add_argument("--out", help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genhyp", description="Generalized hyperbolic triangles and curvature problems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-laws", help="seeded law and identity report")
    p.add_argument("--types", default="all", help="'all' or e.g. '1,1,1;0,0,-1'")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_finite, default=None, help="one threshold for every exact identity")
    p.add_argument("--json", help="also write the report here")
    p.set_defaults(func=cmd_verify_laws)

    p = sub.add_parser("triangle", help="solve one triangle")
    p.add_argument("--type", required=True, help="e.g. 1,1,-1")
    p.add_argument("--given", choices=["angles", "lengths", "sas"], required=True)
    p.add_argument("--values", required=True, help="three numbers; for sas: l1,l2,included angle")
    p.add_argument("--out")
    p.set_defaults(func=cmd_triangle)

    p = sub.add_parser("penner", help="edge invariants of decorated ideal triangulations")
    p.add_argument("action", choices=["map", "solve", "check-polytope"])
    p.add_argument("--mesh", required=True)
    p.add_argument("--lengths")
    p.add_argument("--z")
    p.add_argument("--tol", type=_finite, default=1e-12)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_penner)

    p = sub.add_parser("packing", help="generalized circle packings")
    _curvature_args(p, "--phi")
    p.set_defaults(func=cmd_packing)

    p = sub.add_parser(
        "pattern",
        help="generalized circle patterns (hyperbolic background only)",
        description="Circle patterns on cellular surfaces. Euclidean-background patterns are not supported.",
    )
    _curvature_args(p, "--theta")
    p.add_argument("--h", type=_finite, default=0.0)
    p.set_defaults(func=cmd_pattern)
    return parser


_NEGATIVE = re.compile(r"^-[0-9.]")


def _join_negative_values(argv: List[str]) -> List[str]:
    """``--type -1,-1,0`` becomes ``--type=-1,-1,0`` so argparse does not read it as a flag."""
    out = []
    for item in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(item):
            out[-1] = f"{out[-1]}={item}"
        else:
            out.append(item)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        return args.func(args)
    except (UsageError, InputError, ParseError, ValidationError, SizeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InfeasibleError, DomainExitError, UnsupportedCaseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
