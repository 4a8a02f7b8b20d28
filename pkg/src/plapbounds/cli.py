"""Command line entry point: ``plapbounds <verb> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds as B
from . import experiments as X
from .eigensolver import SolverConfig, minimize_lambda_p, minimize_lambda_pq
from .exceptions import MeshFailure
from .geometry import ConvexPolygon, ShapeFamily, load_shape
from .poincare1d import pi_p_estimate

NAMED_SHAPES = ("square", "disk", "pyramid", "box", "triangle", "hexagon")


def parse_shape(text, alpha=0.2, L=8.0):
    """A named shape, a JSON document, or a path to a JSON file."""
    if text in NAMED_SHAPES:
        return {
            "square": lambda: ConvexPolygon.unit_square(),
            "disk": lambda: ShapeFamily.disk(1.0),
            "pyramid": lambda: ShapeFamily.collapsing_pyramid(2, alpha),
            "box": lambda: ShapeFamily.slab_section(2, L),
            "triangle": lambda: ConvexPolygon([[0, 0], [4, 0], [0, 3]]),
            "hexagon": lambda: ConvexPolygon.regular(6),
        }[text]()
    path = Path(text)
    if path.exists():
        text = path.read_text()
    return load_shape(text)


def _polygon(shape):
    return shape.polygon() if isinstance(shape, ShapeFamily) else shape


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def build_parser():
    ap = argparse.ArgumentParser(prog="plapbounds", description="p-Laplacian eigenvalues and inradius bounds")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, shape=False):
        p.add_argument("--p", type=float, default=2.0)
        p.add_argument("--q", type=float, default=None)
        p.add_argument("--h", type=float, default=None)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if shape:
            p.add_argument("--shape", default="square", help=f"one of {NAMED_SHAPES}, JSON text, or a JSON file")
            p.add_argument("--alpha", type=float, default=0.2)
            p.add_argument("--L", type=float, default=8.0)

    p = sub.add_parser("pi-p", help="discrete pi_p on [0, 1]")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-10)

    common(sub.add_parser("solve", help="discrete lambda_p or lambda_{p,q}"), shape=True)
    common(sub.add_parser("bounds", help="closed-form bounds without solving"), shape=True)
    p = sub.add_parser("report", help="solve and grade every bound")
    common(p, shape=True)
    p.add_argument("--r-scale", type=float, default=1.0, help="multiply the inradius (fault injection)")

    p = sub.add_parser("sweep", help="parameter sweeps")
    p.add_argument("experiment", choices=("pyramid", "slab", "subhom", "pinfty", "hardy"))
    common(p)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.8, 0.4, 0.2, 0.1])
    p.add_argument("--L", type=float, nargs="+", default=[1.0, 2.0, 4.0, 8.0])
    p.add_argument("--ps", type=float, nargs="+", default=[2.0, 5.0, 10.0, 20.0])
    p.add_argument("--n", type=int, default=50, help="number of random fields (hardy)")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ValueError, MeshFailure) as exc:
        # usage-level failure, same code argparse uses
        print(f"plapbounds: error: {exc}", file=sys.stderr)
        return 2


def _run(args):
    if args.verb == "pi-p":
        print(repr(pi_p_estimate(args.p, args.n, tol=args.tol)))
        return 0

    if args.verb == "sweep":
        spec = X.SweepSpec(
            experiment=args.experiment, p=args.p, q=args.q, alphas=args.alpha, Ls=args.L, ps=args.ps,
            h=args.h, n_fields=args.n, seed=args.seed, tol=args.tol, out=args.out, format=args.format,
        )
        rows, code = X.run_sweep(spec)
        written = X.write_table(spec.experiment, rows, args.out, args.format)
        if args.out is None:
            sys.stdout.write(written["text"])
        else:
            print(written["table"])
            print(written["svg"])
        return code

    shape = parse_shape(args.shape, args.alpha, args.L)
    poly = _polygon(shape)
    cfg = SolverConfig(p=args.p, q=args.q, tol=args.tol, seed=args.seed)

    if args.verb == "solve":
        if args.q is None:
            res = minimize_lambda_p(poly, args.p, cfg, h=args.h)
        else:
            res = minimize_lambda_pq(poly, args.p, args.q, cfg, h=args.h)
        info = {
            "p": res.p, "q": res.q, "value": res.value, "iterations": res.iterations,
            "residual": res.residual, "converged": res.converged, "n_nodes": res.mesh.n_nodes,
        }
        _emit(json.dumps(info, indent=2), args.out)
        return 0 if res.converged else 1

    if args.verb == "bounds":
        _, R, P, V = X.shape_quantities(shape)
        reports = [
            B.hardy_lower(args.p, R),
            B.hersch_protter_lower(args.p, R),
            B.faber_krahn_lower(args.p, 2, V),
            B.isoperimetric_lower(args.p, 2, P, V),
            B.ball_upper(args.p, R),
            B.isoperimetric_upper(args.p, P, V),
            B.cheeger_lower(2, P, V),
        ]
        if args.q is not None and args.q > args.p:
            reports.append(B.superhomogeneous_lower(args.p, args.q, 2, R))
        rows = [{"name": r.name, "side": r.side, "value": r.value, "citation": r.citation} for r in reports]
        text = X.rows_to_csv(rows) if args.format == "csv" else X.rows_to_json(rows)
        _emit(text, args.out)
        return 0

    # report
    verdicts, res = X.run_bounds_report(shape, args.p, args.h, r_scale=args.r_scale, config=cfg)
    rows = X.verdict_rows(verdicts)
    if args.out is None:
        text = B.verdicts_to_csv(verdicts) if args.format == "csv" else B.verdicts_to_json(verdicts)
        sys.stdout.write(text)
    else:
        written = X.write_table("report", rows, args.out, args.format)
        print(written["table"])
        print(written["svg"])
    return X.report_exit_code(verdicts, [res])


if __name__ == "__main__":
    sys.exit(main())
