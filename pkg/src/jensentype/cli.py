"""Command-line entry point.

Exit codes: 0 completed, 1 violation found (check/search/bound), 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io, zoo
from .checker import VIOLATED, cone_bound_check, insphere_bound_check, jensen_verdict
from .errors import JensenTypeError
from .functions import standard_suite
from .insphere import chebyshev_center
from .measures import body_centroid, centroid_report
from .quadrature import QuadratureRequest
from .search import maxaffine_search
from .shapes import Cone, Polytope


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _shape_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("shape_pos", nargs="?", metavar="SHAPE", help="zoo:<name>, shape file, or inline JSON")
    p.add_argument("--shape", dest="shape_opt")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=1e-6, help="target error on each mean")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jensentype",
                                     description="Check body-vs-boundary mean inequalities for convex functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("centroids", "insphere"):
        p = sub.add_parser(name)
        _shape_arg(p)
        p.add_argument("--out")

    for name in ("check", "bound"):
        p = sub.add_parser(name)
        _shape_arg(p)
        p.add_argument("--suite", default="std", help="'std' or a JSON function file")
        _common(p)

    p = sub.add_parser("conecheck")
    _shape_arg(p)
    p.add_argument("--suite", default="std")
    _common(p)

    p = sub.add_parser("search")
    _shape_arg(p)
    p.add_argument("--pieces", type=int, default=4)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("zoo")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    return parser


def _get_shape(args):
    spec = args.shape_opt or args.shape_pos
    if not spec:
        raise io.InputError("missing shape (positional SHAPE or --shape)")
    return spec, io.load_shape(spec)


def _suite(args, shape):
    if args.suite == "std":
        return standard_suite(shape.dim, body_centroid(shape), seed=args.seed)
    return io.load_functions(args.suite)


def _run(args) -> int:
    if args.command == "zoo":
        if args.action == "list":
            _emit("\n".join(zoo.ZOO_NAMES), args.out)
            return 0
        if not args.name:
            raise io.InputError("zoo emit: missing shape name")
        _emit(io.dumps(io.shape_to_dict(zoo.zoo_shape(args.name))), args.out)
        return 0

    spec, shape = _get_shape(args)
    if args.command == "centroids":
        _emit(io.dumps(centroid_report(shape).to_dict()), args.out)
        return 0

    if args.command == "insphere":
        if not isinstance(shape, Polytope):
            raise io.InputError("shape: insphere needs a polytope")
        _emit(io.dumps(chebyshev_center(shape).to_dict()), args.out)
        return 0

    if args.command == "search":
        res = maxaffine_search(shape, args.pieces, args.restarts, args.budget, args.seed)
        _emit(io.dumps(res.to_dict()), args.out)
        return 1 if res.certificate.verdict == VIOLATED else 0

    req = QuadratureRequest(target_error=args.eps, seed=args.seed)
    suite = _suite(args, shape)

    if args.command == "check":
        report = jensen_verdict(shape, suite, req, name=spec)
        text = io.report_csv(report) if args.format == "csv" else io.dumps(report.to_dict())
        _emit(text, args.out)
        return 1 if report.violations else 0

    if args.command == "bound":
        if not isinstance(shape, Polytope):
            raise io.InputError("shape: bound needs a polytope")
        ins = chebyshev_center(shape)
        rows = [{"function": f.describe(), **insphere_bound_check(shape, f, req, ins).to_dict()} for f in suite]
        _emit(io.dumps({"shape": spec, "insphere": ins.to_dict(), "results": rows}), args.out)
        return 0 if all(r["holdsTheorem"] and r["holdsCorollary"] for r in rows) else 1

    if args.command == "conecheck":
        if not isinstance(shape, Cone):
            raise io.InputError("shape: conecheck needs a cone file (kind 'cone')")
        rows = []
        for f in suite:
            c = cone_bound_check(shape, f, req)
            rows.append({"function": f.describe(), "lhs": c.lhs.to_dict(), "rhs": c.rhs,
                         "errorBound": c.error_bound, "holds": c.holds})
        _emit(io.dumps({"shape": spec, "results": rows}), args.out)
        return 0 if all(r["holds"] for r in rows) else 1
    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return _run(args)
    except (io.InputError, JensenTypeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
