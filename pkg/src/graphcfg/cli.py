"""Command-line entry point: ``graphcfg <subcommand> ...``.

Exit codes: 0 success, 1 error or failed ``verify`` checks, 2 unreachable
goal in ``plan``.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from pathlib import Path

from .complex import ResourceLimitError, UnfaithfulSubdivisionWarning, configuration_complex
from .formulas import format_table, formula_table
from .graph import FIXTURES, Graph, GraphError, essential_vertices, load_fixture, load_graph, subdivide
from .invariants import RankDiscrepancyError, invariant_report
from .linalg import DEFAULT_PRIME
from .planner import PlanningError, diameter, plan
from .reduction import collapse
from .verify import GROUPS, run_verify

EXIT_OK, EXIT_ERROR, EXIT_UNREACHABLE = 0, 1, 2


def _load(spec: str) -> Graph:
    """A file path, or the name of a bundled fixture when no such file exists."""
    if not Path(spec).exists() and spec in FIXTURES:
        return load_fixture(spec)
    return load_graph(spec)


def _emit(args, payload: dict, text: str, seconds: float | None = None) -> None:
    if args.json:
        if seconds is not None and not args.stable:
            payload = {**payload, "timing": {"seconds": round(seconds, 3)}}
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _complex(args):
    g = _load(args.graph)
    with warnings.catch_warnings():
        if args.factor is not None:
            warnings.simplefilter("ignore", UnfaithfulSubdivisionWarning)
        return configuration_complex(g, args.tokens, args.factor)


def cmd_graph(args) -> int:
    g = _load(args.graph)
    deg = g.degrees()
    ess = essential_vertices(g)
    circle = g.is_connected() and all(d == 2 for d in deg.values())
    payload = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "degrees": deg,
        "essential": ess,
        "V": len(ess),
        "is_circle": circle,
        "connected": g.is_connected(),
        "simple": g.is_simple(),
    }
    text = (f"vertices: {len(g.vertices)}\nedges: {len(g.edges)}\n"
            f"degrees: {' '.join(f'{v}={d}' for v, d in deg.items())}\n"
            f"essential vertices (V={len(ess)}): {' '.join(ess) or '-'}\n"
            f"is_circle: {str(circle).lower()}\n")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_complex(args) -> int:
    t0 = time.perf_counter()
    sg, c = _complex(args)
    seconds = time.perf_counter() - t0
    if args.export_json:
        Path(args.export_json).write_text(json.dumps(c.to_dict(), indent=2) + "\n")
    if args.dot:
        sys.stdout.write(c.to_dot())
        return EXIT_OK
    payload = {"factor": sg.factor, **c.to_dict()} if args.json else {}
    text = f"factor: {sg.factor}\nf_vector: {c.f_vector}\ndimension: {c.dim}\n"
    _emit(args, payload, text, seconds)
    return EXIT_OK


def cmd_invariants(args) -> int:
    t0 = time.perf_counter()
    sg, c = _complex(args)
    trace = None
    if args.collapse:
        trace = collapse(c)
        c = trace.residual
    report = invariant_report(c, args.prime, torsion=not args.no_torsion)
    seconds = time.perf_counter() - t0
    payload = report.to_dict()
    if trace is not None:
        payload["collapse"] = {"dim_before": trace.dim_before, "dim_after": trace.dim_after,
                               "cells_before": trace.cells_before, "cells_after": trace.cells_after}
    if report.notes:
        payload["notes"] = list(report.notes)
    lines = [f"factor: {sg.factor}", f"f_vector: {report.f_vector}", f"euler: {report.euler}",
             f"betti (GF({report.prime})): {report.betti}", f"torsion: {report.torsion}"]
    if trace is not None:
        lines.append(f"collapsed: dim {trace.dim_before} -> {trace.dim_after}, "
                     f"cells {trace.cells_before} -> {trace.cells_after}")
    lines += [f"note: {n}" for n in report.notes]
    _emit(args, payload, "\n".join(lines) + "\n", seconds)
    return EXIT_OK


def cmd_reduce(args) -> int:
    t0 = time.perf_counter()
    _, c = _complex(args)
    trace = collapse(c)
    seconds = time.perf_counter() - t0
    if args.dot:
        sys.stdout.write(trace.residual.to_dot())
        return EXIT_OK
    text = (f"dimension: {trace.dim_before} -> {trace.dim_after}\n"
            f"cells: {trace.cells_before} -> {trace.cells_after}\n"
            f"residual f_vector: {trace.residual.f_vector}\n")
    _emit(args, trace.to_dict() if args.json else {}, text, seconds)
    return EXIT_OK


def cmd_formulas(args) -> int:
    rows = formula_table(args.nmax, args.kmax, with_complex=args.with_complex)
    if args.json:
        payload = {"rows": [{"N": r.n, "K": r.k, "E": r.e, "chi_closed": r.euler_closed,
                             "chi_recursive": r.euler_recursive, "Q": r.q, "b1_complex": r.b1_complex}
                            for r in rows]}
        _emit(args, payload, "")
    else:
        sys.stdout.write(format_table(rows, as_csv=args.csv))
    return EXIT_OK


def _config(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _planning_graph(args):
    g = _load(args.graph)
    return subdivide(g, args.factor) if args.factor > 1 else g


def cmd_plan(args) -> int:
    g = _planning_graph(args)
    start, goal = _config(args.start), _config(args.goal)
    if args.tokens is not None and not (len(start) == len(goal) == args.tokens):
        raise PlanningError(f"--tokens {args.tokens} but start has {len(start)} and goal {len(goal)} entries")
    t0 = time.perf_counter()
    result = plan(g, start, goal, args.mode)
    seconds = time.perf_counter() - t0
    if not result.reachable:
        text = (f"unreachable: start and goal lie in different components "
                f"({result.components[0]} vs {result.components[1]})\n")
        _emit(args, result.to_dict(), text, seconds)
        return EXIT_UNREACHABLE
    lines = [f"length: {result.length} ({result.mode}, {result.expanded} states expanded)"]
    lines += [f"{i + 1:4d}. token {m.token}: {m.source} -> {m.target}" for i, m in enumerate(result.moves)]
    lines.append(f"min_token_gap: {result.min_token_gap}")
    _emit(args, result.to_dict(), "\n".join(lines) + "\n", seconds)
    return EXIT_OK


def cmd_diameter(args) -> int:
    g = _planning_graph(args)
    t0 = time.perf_counter()
    value, (a, b) = diameter(g, args.tokens)
    seconds = time.perf_counter() - t0
    payload = {"tokens": args.tokens, "diameter": value, "witness": [list(a), list(b)]}
    text = f"diameter: {value}\nwitness: {','.join(a)} -> {','.join(b)}\n"
    _emit(args, payload, text, seconds)
    return EXIT_OK


def cmd_verify(args) -> int:
    result = run_verify(args.filter)
    if args.json:
        sys.stdout.write(json.dumps(result.to_dict(args.stable), indent=2) + "\n")
    else:
        sys.stdout.write(result.format_table(args.stable))
    return EXIT_OK if result.passed else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    def global_flags(default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--json", action="store_true", default=default, help="machine-readable output")
        p.add_argument("--stable", action="store_true", default=default, help="omit timing so output is byte-stable")
        return p

    # the flags are accepted before or after the subcommand
    common = global_flags(argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="graphcfg", parents=[global_flags(False)],
                                     description="Configuration spaces of labeled tokens on graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_arg(p):
        p.add_argument("graph", help=f"graph file (.graph or .json) or a bundled fixture: {', '.join(FIXTURES)}")

    def complex_args(p):
        graph_arg(p)
        p.add_argument("--tokens", "-n", type=int, required=True)
        p.add_argument("--factor", type=int, default=None, help="subdivision factor (default tokens+1)")

    p = sub.add_parser("graph", parents=[common], help="summarize a graph")
    graph_arg(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("complex", parents=[common], help="build the configuration complex")
    complex_args(p)
    p.add_argument("--export-json", metavar="FILE", help="write the full complex to FILE")
    p.add_argument("--dot", action="store_true", help="print the 1-skeleton in DOT format")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("invariants", parents=[common], help="Euler characteristic, Betti numbers, torsion")
    complex_args(p)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--collapse", action="store_true", help="collapse before computing homology")
    p.add_argument("--no-torsion", action="store_true", help="skip Smith normal form")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("reduce", parents=[common], help="collapse the complex")
    complex_args(p)
    p.add_argument("--dot", action="store_true", help="print the residual 1-skeleton in DOT format")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("formulas", parents=[common], help="tabulate the radial-tree formulas")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--with-complex", action="store_true", help="add b1 of the collapsed complex for small cases")
    p.set_defaults(func=cmd_formulas)

    p = sub.add_parser("plan", parents=[common], help="shortest collision-free plan")
    graph_arg(p)
    p.add_argument("--tokens", "-n", type=int, default=None)
    p.add_argument("--start", required=True, help="comma-separated vertices, token 0 first")
    p.add_argument("--goal", required=True)
    p.add_argument("--mode", choices=("bfs", "astar"), default="bfs")
    p.add_argument("--factor", type=int, default=1, help="subdivide the graph first")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("diameter", parents=[common], help="diameter of the configuration graph")
    graph_arg(p)
    p.add_argument("--tokens", "-n", type=int, required=True)
    p.add_argument("--factor", type=int, default=1)
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("verify", parents=[common], help="run the reproduction checks")
    p.add_argument("--filter", action="append", choices=list(GROUPS), help="run only this group (repeatable)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, PlanningError, ResourceLimitError, RankDiscrepancyError, ValueError, OSError) as exc:
        print(f"graphcfg: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
