"""Command-line surface: validation, classification, sampling, tangents,
length bounds, aspect statistics, the no-tangent witness and figure export.

Exit codes: 0 success, 1 invalid parameters, 2 bad flags, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import curve, length, render, tangent, witness
from .ifs import EigenParams, CLASSIFY_TOL, params_from_json, validate_params

EXIT_OK = 0
EXIT_INVALID_PARAMS = 1
EXIT_BAD_FLAGS = 2
EXIT_IO = 3


def _parse_params(args) -> tuple[EigenParams, float]:
    if args.json:
        with open(args.json) as fh:
            doc = json.load(fh)
        p, tol = params_from_json(doc)
        if args.tol is not None:
            tol = args.tol
        return p, tol
    if args.params is None:
        raise SystemExit2("one of --params or --json is required")
    parts = args.params.split(",")
    if len(parts) != 4:
        raise SystemExit2("--params must be four comma-separated numbers l1,n1,l2,n2")
    try:
        values = [float(v) for v in parts]
    except ValueError as exc:
        raise SystemExit2(f"bad --params value: {exc}")
    tol = args.tol if args.tol is not None else CLASSIFY_TOL
    return EigenParams(*values), tol


class SystemExit2(Exception):
    """Flag-level error, distinct from invalid parameter values."""


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        render.write_atomic(out_path, text)
    else:
        sys.stdout.write(text)


def _fmt_slope(s) -> str:
    return "vertical" if s is None else render.fnum(s)


def _address_from_args(args) -> curve.Address:
    if args.address:
        word = tuple(int(c) for c in args.address)
        return curve.Address(word, args.tail)
    if args.t is not None:
        return curve.address_of_t(args.t, args.depth)
    raise SystemExit2("one of --address or --t is required")


def cmd_validate(args) -> int:
    p, tol = _parse_params(args)
    report = validate_params(p, tol)
    doc = report.as_dict()
    doc["alpha"] = p.alpha
    doc["beta"] = p.beta
    _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    p, tol = _parse_params(args)
    cls = tangent.classify(p, tol)
    if args.out:
        render.write_atomic(args.out, json.dumps(cls.as_dict(), sort_keys=True) + "\n")
    sys.stdout.write(cls.kind.value + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    p, _ = _parse_params(args)
    poly = curve.sample_curve(p, args.depth)
    _emit(render.polyline_to_csv(poly), args.out)
    return EXIT_OK


def cmd_tangent(args) -> int:
    p, _ = _parse_params(args)
    a = _address_from_args(args)
    line = tangent.tangent_at(p, a, eps=args.eps, max_depth=args.max_depth)
    doc = {
        "direction": [render.fnum(line.direction[0]), render.fnum(line.direction[1])],
        "sidedness": line.sidedness.value,
        "slope_base": _fmt_slope(line.slope_base),
        "slope_figure": _fmt_slope(line.slope_figure),
        "width": render.fnum(line.width),
        "converged": line.converged,
        "depth_used": line.depth_used,
    }
    _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_slopes(args) -> int:
    p, _ = _parse_params(args)
    left, right = tangent.one_sided_slopes_at_z(p)
    _emit(f"left {_fmt_slope(left)}\nright {_fmt_slope(right)}\n", args.out)
    return EXIT_OK


def cmd_length(args) -> int:
    p, _ = _parse_params(args)
    lower = length.chord_length_sum(p, args.depth)
    text = (
        f"depth {args.depth}\n"
        f"lower {render.fnum(lower)}\n"
        f"upper {render.fnum(2.0)}\n"
        f"gap {render.fnum(2.0 - lower)}\n"
    )
    _emit(text, args.out)
    return EXIT_OK


def cmd_aspect(args) -> int:
    p, _ = _parse_params(args)
    stats = length.level_stats(p, args.depth)
    _emit(render.level_stats_to_csv(stats), args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    if args.ifs:
        with open(args.ifs) as fh:
            ifs = witness.SimilarityIFS.from_json(json.load(fh))
    else:
        ifs = witness.sierpinski_triangle()
    report = witness.no_tangent_scan(
        ifs, depth=args.depth, directions=args.directions,
        samples=args.samples, seed=args.seed,
    )
    _emit(report.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_figures(args) -> int:
    p, _ = _parse_params(args)
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    poly = curve.sample_curve(p, args.depth)

    fig1 = render.RenderSpec(coords="figure", depth=args.depth, overlays=("derivative",))
    fig2 = render.RenderSpec(coords="base", depth=args.depth, overlays=("triangles",))
    fig3 = render.RenderSpec(coords="base", depth=args.depth, overlays=("squares",))
    render.write_atomic(os.path.join(outdir, "fig1.svg"), render.render_svg(p, poly, fig1))
    render.write_atomic(os.path.join(outdir, "fig2.svg"), render.render_svg(p, poly, fig2))
    render.write_atomic(os.path.join(outdir, "fig3.svg"), render.render_svg(p, poly, fig3))
    render.write_atomic(os.path.join(outdir, "curve.csv"), render.polyline_to_csv(poly))
    profile = tangent.derivative_profile(p, min(args.depth, 10))
    render.write_atomic(os.path.join(outdir, "derivative.csv"),
                        render.profile_to_csv(profile))
    return EXIT_OK


def _add_param_flags(sp) -> None:
    sp.add_argument("--params", help="inline parameters l1,n1,l2,n2")
    sp.add_argument("--json", help="JSON file with lambda1/nu1/lambda2/nu2")
    sp.add_argument("--tol", type=float, default=None, help="classification tolerance")
    sp.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfaffine",
                                 description="Plane self-affine curves with two pieces")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check parameter conditions")
    _add_param_flags(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("classify", help="smoothness regime of the curve")
    _add_param_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sample", help="polyline CSV of the level-n subdivision")
    _add_param_flags(sp)
    sp.add_argument("--depth", type=int, default=10)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("tangent", help="tangent line at an address or parameter")
    _add_param_flags(sp)
    sp.add_argument("--address", help="digit word over {1,2}")
    sp.add_argument("--tail", type=int, choices=(1, 2), default=None)
    sp.add_argument("--t", type=float, default=None)
    sp.add_argument("--depth", type=int, default=200, help="address digits taken from --t")
    sp.add_argument("--eps", type=float, default=tangent.CONE_EPS_DEFAULT)
    sp.add_argument("--max-depth", type=int, default=tangent.CONE_MAX_DEPTH_DEFAULT)
    sp.set_defaults(func=cmd_tangent)

    sp = sub.add_parser("slopes", help="one-sided slopes at the junction point")
    _add_param_flags(sp)
    sp.set_defaults(func=cmd_slopes)

    sp = sub.add_parser("length", help="chord-sum lower bound for the curve length")
    _add_param_flags(sp)
    sp.add_argument("--depth", type=int, default=20)
    sp.set_defaults(func=cmd_length)

    sp = sub.add_parser("aspect", help="walk-value aggregation of piece extents")
    _add_param_flags(sp)
    sp.add_argument("--depth", type=int, default=20)
    sp.set_defaults(func=cmd_aspect)

    sp = sub.add_parser("witness", help="no-tangent chord-angle scan for a similarity IFS")
    sp.add_argument("--ifs", help="JSON file: {\"maps\": [{angle, scale, tx, ty}, ...]}")
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--directions", type=int, default=64)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("figures", help="emit SVG/CSV figure set")
    _add_param_flags(sp)
    sp.add_argument("--depth", type=int, default=12)
    sp.set_defaults(func=cmd_figures)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags; normalize other codes
        return EXIT_BAD_FLAGS if exc.code not in (0,) else EXIT_OK
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_PARAMS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
