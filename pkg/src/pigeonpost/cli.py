"""Command-line front end with stable JSON output.

Exit codes: 0 success, 1 verification found unsatisfied demands, 2 bad
usage or an instance outside the solver limits, 3 unparseable input,
4 budget exhausted under ``--strict``.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .demand import DemandGraphError, lower_bound, parse_demand_graph
from .exact import SearchLimitError, SearchLimits, optimal_multihop, optimal_twohop
from .flightplan import FlightPlanError, parse_flight_plan, verify
from .ilp import build_multihop_model, build_twohop_model, export_lp, optimal_multihop_ilp, optimal_twohop_ilp
from .instances import cycle_graph, demo_graph, random_graph, star_graph
from .jsonutil import canonical_dumps
from .planners import plan_coordinator, plan_cycle, plan_singlehop
from .reductions import (
    CnfError,
    ReductionError,
    parse_dimacs_cnf,
    parse_undirected_graph,
    reduce_3sat_to_twohop,
    reduce_vertex_cover_to_multihop,
)

EXIT_OK = 0
EXIT_UNSATISFIED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4

_PARSE_ERRORS = (DemandGraphError, FlightPlanError, CnfError, ReductionError)

# Which algorithms can honor which routing regime.  The cycle plan only
# verifies under multihop; coordinator plans verify under both relayed
# regimes.
VALID_ALGORITHMS = {
    "singlehop": ("direct",),
    "twohop": ("coordinator", "exact", "ilp"),
    "multihop": ("coordinator", "cycle", "exact", "ilp"),
}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _limits(args: argparse.Namespace) -> SearchLimits:
    return SearchLimits(
        max_nodes=args.max_nodes,
        max_demands=args.max_demands,
        expansion_budget=args.budget,
        time_budget=args.time_budget,
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    if args.algorithm not in VALID_ALGORITHMS[args.mode]:
        print(
            f"error: algorithm {args.algorithm!r} cannot produce {args.mode} plans",
            file=sys.stderr,
        )
        return EXIT_USAGE
    graph = parse_demand_graph(_read(args.graph))
    limits = _limits(args)
    if args.algorithm == "direct":
        result = plan_singlehop(graph)
    elif args.algorithm == "coordinator":
        result = plan_coordinator(graph)
    elif args.algorithm == "cycle":
        result = plan_cycle(graph)
    elif args.algorithm == "exact":
        solver = optimal_twohop if args.mode == "twohop" else optimal_multihop
        result = solver(graph, limits)
    else:
        solver = optimal_twohop_ilp if args.mode == "twohop" else optimal_multihop_ilp
        result = solver(graph, limits)
    if result.mode != args.mode:
        # A plan valid under a stricter regime is valid here as well.
        result = dataclasses.replace(result, mode=args.mode)
    _write(args.output, result.to_json())
    if args.strict and args.algorithm in ("exact", "ilp") and not result.proven_optimal:
        print("error: budget exhausted before optimality was proven", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    graph = parse_demand_graph(_read(args.graph))
    plan = parse_flight_plan(_read(args.plan))
    report = verify(args.mode, graph, plan)
    _write(args.output, report.to_json())
    return EXIT_OK if report.satisfied else EXIT_UNSATISFIED


def _cmd_bounds(args: argparse.Namespace) -> int:
    graph = parse_demand_graph(_read(args.graph))
    _write(args.output, canonical_dumps(lower_bound(graph).to_json_dict()))
    return EXIT_OK


def _cmd_reduce(args: argparse.Namespace) -> int:
    if args.kind == "3sat-to-twohop":
        formula = parse_dimacs_cnf(_read(args.input))
        output = reduce_3sat_to_twohop(formula)
    else:
        if args.k is None:
            print("error: vc-to-multihop needs --k", file=sys.stderr)
            return EXIT_USAGE
        graph = parse_undirected_graph(_read(args.input))
        output = reduce_vertex_cover_to_multihop(graph, args.k)
    _write(args.output, output.to_json())
    return EXIT_OK


def _cmd_export_lp(args: argparse.Namespace) -> int:
    graph = parse_demand_graph(_read(args.graph))
    builder = build_twohop_model if args.mode == "twohop" else build_multihop_model
    _write(args.output, export_lp(builder(graph)))
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    try:
        if args.kind == "demo":
            graph = demo_graph()
        elif args.kind == "cycle":
            graph = cycle_graph(args.n)
        elif args.kind == "star":
            graph = star_graph(args.n)
        else:
            graph = random_graph(args.n, args.p, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(args.output, graph.to_json())
    return EXIT_OK


def _add_limit_flags(parser: argparse.ArgumentParser) -> None:
    defaults = SearchLimits()
    parser.add_argument("--max-nodes", type=int, default=defaults.max_nodes)
    parser.add_argument("--max-demands", type=int, default=defaults.max_demands)
    parser.add_argument("--budget", type=int, default=defaults.expansion_budget,
                        help="node-expansion budget for exact searches")
    parser.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pigeonpost",
        description="Plan, verify, and exactly solve pigeon-post networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="plan flights for a demand graph")
    solve.add_argument("graph", help="demand graph JSON file, or - for stdin")
    solve.add_argument("--mode", required=True, choices=("singlehop", "twohop", "multihop"))
    solve.add_argument(
        "--algorithm", required=True,
        choices=("direct", "coordinator", "cycle", "exact", "ilp"),
    )
    solve.add_argument("--output", "-o", default="-")
    solve.add_argument("--strict", action="store_true",
                       help="exit 4 when optimality is not proven")
    _add_limit_flags(solve)
    solve.set_defaults(func=_cmd_solve)

    verify_cmd = sub.add_parser("verify", help="check a plan against a demand graph")
    verify_cmd.add_argument("graph")
    verify_cmd.add_argument("plan")
    verify_cmd.add_argument("--mode", required=True,
                            choices=("singlehop", "twohop", "multihop"))
    verify_cmd.add_argument("--output", "-o", default="-")
    verify_cmd.set_defaults(func=_cmd_verify)

    bounds = sub.add_parser("bounds", help="pigeon lower bounds for a demand graph")
    bounds.add_argument("graph")
    bounds.add_argument("--output", "-o", default="-")
    bounds.set_defaults(func=_cmd_bounds)

    reduce_cmd = sub.add_parser("reduce", help="generate a hardness instance")
    reduce_cmd.add_argument("kind", choices=("3sat-to-twohop", "vc-to-multihop"))
    reduce_cmd.add_argument("input", help="DIMACS cnf or undirected graph JSON")
    reduce_cmd.add_argument("--k", type=int, default=None,
                            help="vertex cover budget (vc-to-multihop)")
    reduce_cmd.add_argument("--output", "-o", default="-")
    reduce_cmd.set_defaults(func=_cmd_reduce)

    export = sub.add_parser("export-lp", help="write a 0/1 model in LP format")
    export.add_argument("graph")
    export.add_argument("--mode", required=True, choices=("twohop", "multihop"))
    export.add_argument("--output", "-o", default="-")
    export.set_defaults(func=_cmd_export_lp)

    gen = sub.add_parser("gen", help="generate demand-graph fixtures")
    gen.add_argument("kind", choices=("demo", "cycle", "star", "random"))
    gen.add_argument("--n", type=int, default=6)
    gen.add_argument("--p", type=float, default=0.3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", "-o", default="-")
    gen.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SearchLimitError as exc:
        print(f"error: {exc} (raise --max-nodes/--max-demands?)", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
