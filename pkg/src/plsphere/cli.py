"""Command line front end.

Exit codes: 0 success or positive certificate, 1 negative or obstructed,
2 inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .complex import make_cell, validate
from .contraction import ContractionSequence, Curve, search_contraction, validate_contraction
from .errors import (
    BudgetExhausted,
    CellNotInComplex,
    InvalidInput,
    IoError,
    NoFreeEdgeCorridor,
    NotTwoComponents,
    ProjectionRepairFailed,
    SurfaceError,
    UnsupportedDimension,
)
from .io import Report, emit_report, read_complex_file
from .metrics import distance_field, k_cell_distance
from .projection import project_sequence
from .separation import separate
from .shelling import Verdict, sphere_certificate

OK, NEGATIVE, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _cell_arg(text):
    try:
        return make_cell(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text")
    common.add_argument("--seed", help=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="plsphere", description="Combinatorial sphere recognition tools.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check pseudomanifold properties")
    s.add_argument("file")
    s.add_argument("--dim", type=int)

    s = sub.add_parser("distance", parents=[common], help="k-cell distances")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--from", dest="source", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--to", type=int)
    g.add_argument("--field", action="store_true")

    s = sub.add_parser("separate", parents=[common], help="split along a named surface")
    s.add_argument("file")
    s.add_argument("--surface", required=True)

    s = sub.add_parser("contract", parents=[common], help="search a contraction of a named curve")
    s.add_argument("file")
    s.add_argument("--curve", required=True)
    s.add_argument("--base", type=int, required=True)
    s.add_argument("--budget", type=int, default=10_000)

    s = sub.add_parser("project", parents=[common], help="push a contraction onto one side of a surface")
    s.add_argument("file")
    s.add_argument("--surface", required=True)
    s.add_argument("--curve", required=True)
    s.add_argument("--base", type=int, required=True)
    s.add_argument("--sequence")
    s.add_argument("--budget", type=int, default=10_000)

    s = sub.add_parser("shell", parents=[common], help="shelling toward a vertex star")
    s.add_argument("file")
    s.add_argument("--origin", type=int, required=True)
    s.add_argument("--first", type=_cell_arg)
    return p


def _named(cf, name, kind="subset"):
    pool = cf.subsets if kind == "subset" else cf.sequences
    if name not in pool:
        raise InvalidInput(f"no {kind} named {name!r} in the file")
    return pool[name]


def _curve(cf, name):
    cells = _named(cf, name)
    if any(len(c) != 2 for c in cells):
        raise InvalidInput(f"subset {name!r} is not a set of edges")
    return Curve(cells)


def _run(args, cf):
    """(outcome, payload, exit code) for one subcommand."""
    K = cf.complex
    if args.command == "validate":
        m = args.dim if args.dim is not None else (cf.dim if cf.dim is not None else K.top_dim)
        rep = validate(K, m)
        payload = rep.as_dict()
        payload["f_vector"] = list(K.f_vector)
        return ("valid" if rep.ok else "invalid"), payload, (OK if rep.ok else NEGATIVE)

    if args.command == "distance":
        if args.to is not None:
            d = k_cell_distance(K, args.k, args.source, args.to)
            return "computed", {"k": args.k, "from": args.source, "to": args.to, "distance": d}, OK
        f = distance_field(K, args.k, args.source)
        return "computed", {"k": args.k, "from": args.source, "field": f.dist}, OK

    if args.command == "separate":
        try:
            res = separate(K, _named(cf, args.surface))
        except NotTwoComponents as exc:
            return "not_two_components", {"components": exc.n_components, "message": str(exc)}, NEGATIVE
        except SurfaceError as exc:
            return "bad_surface", {"error": type(exc).__name__, "message": str(exc)}, NEGATIVE
        counts = {}
        for loc in res.vertex_location.values():
            counts[loc.value] = counts.get(loc.value, 0) + 1
        payload = {"inside_size": len(res.inside), "outside_size": len(res.outside),
                   "component_sizes": sorted(res.sizes()),
                   "surface_euler_characteristic": res.surface.euler_characteristic,
                   "vertex_locations": counts,
                   "inside": sorted(res.inside)}
        return "separated", payload, OK

    if args.command == "contract":
        C = _curve(cf, args.curve)
        try:
            seq = search_contraction(K, C, args.base, args.budget)
        except BudgetExhausted as exc:
            return "budget_exhausted", {"expanded": exc.expanded, "space_exhausted": exc.space_exhausted,
                                        "message": str(exc)}, INCONCLUSIVE
        payload = {"base_point": seq.base_point, "length": len(seq),
                   "curves": [list(c.canonical_form) for c in seq.curves],
                   "valid": bool(validate_contraction(K, seq))}
        return "contracted", payload, OK

    if args.command == "project":
        if K.top_dim != 3:
            raise UnsupportedDimension(f"projection is implemented for 3-dimensional complexes, got {K.top_dim}")
        try:
            sep = separate(K, _named(cf, args.surface))
        except (NotTwoComponents, SurfaceError) as exc:
            return "bad_surface", {"error": type(exc).__name__, "message": str(exc)}, NEGATIVE
        if args.sequence:
            seq = ContractionSequence(args.base, [Curve.from_vertices(c) for c in _named(cf, args.sequence, "sequence")])
            first = _curve(cf, args.curve)
            if seq.curves and seq.curves[0] != first:
                raise InvalidInput(f"sequence {args.sequence!r} does not start at curve {args.curve!r}")
        else:
            try:
                seq = search_contraction(K, _curve(cf, args.curve), args.base, args.budget)
            except BudgetExhausted as exc:
                return "budget_exhausted", {"expanded": exc.expanded, "message": str(exc)}, INCONCLUSIVE
        try:
            res = project_sequence(K, sep, seq, budget=args.budget)
        except ProjectionRepairFailed as exc:
            return "repair_failed", {"message": str(exc)}, INCONCLUSIVE
        return "projected", res.as_dict(), OK

    if args.command == "shell":
        cert = sphere_certificate(K, args.origin, args.first)
        code = {Verdict.SPHERE: OK, Verdict.INCONCLUSIVE: INCONCLUSIVE}.get(cert.verdict, NEGATIVE)
        payload = cert.as_dict()
        payload["removal_count"] = len(cert.trace.removals)
        return cert.trace.outcome.value, payload, code
    raise AssertionError(args.command)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed is not None:
        print("plsphere: error: --seed is not accepted; every algorithm is deterministic", file=sys.stderr)
        return INPUT_ERROR
    start = time.perf_counter()
    try:
        cf = read_complex_file(args.file)
    except (InvalidInput, IoError) as exc:
        print(f"plsphere: error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    try:
        outcome, payload, code = _run(args, cf)
    except (InvalidInput, CellNotInComplex, UnsupportedDimension, NoFreeEdgeCorridor, SurfaceError) as exc:
        outcome, payload, code = "input_error", {"error": type(exc).__name__, "message": str(exc)}, INPUT_ERROR
    timing = time.perf_counter() - start if args.format == "text" else None
    emit_report(Report(argv, cf.digest, outcome, payload, timing), args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
