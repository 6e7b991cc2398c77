#!/usr/bin/env python3
"""
meshflow - multipath routing throughput for multirate wireless mesh networks

Generates random mesh instances, finds high-throughput multipath routes with
collision-free slot schedules, compares them with the medium-time-metric
single path and verifies solutions.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from core.config import SolverConfig
from core.errors import BudgetExceeded, MeshflowError, NoPath, ParseError
from core.experiment import load_experiment_config, run_experiment, save_csv, write_csv
from core.generator import generate_random_topology
from core.mtm import mtm_path
from core.optimizer import solve_multipath
from core.oracle import best_over_orderings, check_constraints_literal, replays_greedy
from core.report import (
    format_comparison,
    format_mtm,
    format_rate,
    format_solution,
    parse_solution_dump,
)
from core.topology import ConnectivityGraph, dump_topology, parse_topology
from core.validator import validate
from models import IEEE80211B_RATES, ExperimentConfig, OracleBudget, TopologySpec

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_PATH = 2
EXIT_VERIFY_FAILED = 3


class MeshflowArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _error(e: Exception) -> int:
    print(f"Error: {e}", file=sys.stderr)
    return EXIT_NO_PATH if isinstance(e, NoPath) else EXIT_USAGE


def _read_text(path: str) -> str:
    """Read a UTF-8 input file; undecodable bytes are a ParseError."""
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"{path} is not valid UTF-8: {e}") from e


def _load_graph(path: str) -> ConnectivityGraph:
    return parse_topology(_read_text(path))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    """Generate a random unit-disk topology."""
    try:
        spec = TopologySpec(
            node_count=args.nodes,
            target_directed_link_count=args.links,
            cap_min=args.cap_min,
            cap_max=args.cap_max,
            cap_step=args.cap_step,
            seed=args.seed,
            rates=IEEE80211B_RATES if args.rates == "80211b" else None,
            bridge_components=not args.strict,
        )
        graph = generate_random_topology(spec)
    except MeshflowError as e:
        return _error(e)

    _emit(dump_topology(graph), args.out)
    summary = f"Generated {graph.node_count} nodes, {len(graph.links)} directed links"
    if graph.bridges:
        summary += f" ({len(graph.bridges)} bridge edge(s) outside the unit disk)"
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    """Solve one source/destination pair."""
    try:
        graph = _load_graph(args.topology)
        if args.single_path:
            result = mtm_path(
                graph,
                args.source,
                args.destination,
                reuse=not args.no_reuse_baseline,
                metric=args.metric,
            )
            _emit(format_mtm(result), args.out)
            return EXIT_OK
        sol = solve_multipath(graph, args.source, args.destination, SolverConfig.from_env())
    except OSError as e:
        print(f"Error: Cannot read topology: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MeshflowError as e:
        return _error(e)

    _emit(format_solution(sol, include_schedule=args.dump_schedule), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    """Compare multipath throughput with the MTM single path."""
    try:
        graph = _load_graph(args.topology)
        sol = solve_multipath(graph, args.source, args.destination, SolverConfig.from_env())
        baseline = mtm_path(
            graph, args.source, args.destination, reuse=not args.no_reuse_baseline
        )
    except OSError as e:
        print(f"Error: Cannot read topology: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MeshflowError as e:
        return _error(e)

    print(format_comparison(sol, baseline), end="")
    return EXIT_OK


def _experiment_config(args) -> ExperimentConfig:
    config = load_experiment_config(args.config) if args.config else ExperimentConfig()
    overrides = {
        "node_count": args.nodes,
        "target_links": args.links,
        "cap_min": args.cap_min,
        "cap_max": args.cap_max,
        "cap_step": args.cap_step,
        "trials": args.trials,
        "hop_min": args.hop_min,
        "hop_max": args.hop_max,
        "seed": args.seed,
        "output": args.out,
        "workers": args.workers,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(config, name, value)
    if args.timing:
        config.timing = True
    if args.no_reuse_baseline:
        config.reuse_baseline = False
    return config


def cmd_experiment(args) -> int:
    """Run the hop-distance sweep and write CSV."""
    try:
        solver = SolverConfig.from_env()
        config = _experiment_config(args)
        if args.workers is None and not args.config:
            config.workers = solver.workers
        config.validate()
        rows = run_experiment(config, solver)
    except MeshflowError as e:
        return _error(e)

    if config.output:
        save_csv(rows, config.output)
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Validate a solution and optionally compare it with the oracle."""
    try:
        budget = OracleBudget(max_paths_considered=args.max_paths, max_hops=args.max_hops)
        graph = _load_graph(args.topology)
        if args.solution:
            sol = parse_solution_dump(_read_text(args.solution), graph)
        else:
            if args.source is None or args.destination is None:
                print("Error: --source and --destination are required without --solution", file=sys.stderr)
                return EXIT_USAGE
            sol = solve_multipath(graph, args.source, args.destination, SolverConfig.from_env())
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MeshflowError as e:
        return _error(e)

    failed = False
    violations = validate(sol, graph)
    literal = check_constraints_literal(sol, graph)

    print(f"Solution: {len(sol.paths)} path(s), {len(sol.schedule.slots)} slot(s), "
          f"{format_rate(sol.throughput)} Mbps")
    print(f"validator: {len(violations)} violation(s)")
    for v in violations:
        print(f"  {v}")
    print(f"literal checker: {len(literal)} violation(s)")
    for v in literal:
        print(f"  {v}")
    if violations or literal:
        failed = True
    if bool(violations) != bool(literal):
        print("Validators disagree")

    if args.oracle:
        try:
            best = best_over_orderings(graph, sol.source, sol.destination, budget)
        except BudgetExceeded as e:
            print(f"Oracle skipped: {e}")
        else:
            print(f"oracle={format_rate(best)} greedy={format_rate(sol.throughput)}")
            if replays_greedy(sol, budget) and sol.throughput > best:
                print("Greedy exceeds the best ordering")
                failed = True

    if failed:
        print("Invalid")
        return EXIT_VERIFY_FAILED
    print("Valid")
    return EXIT_OK


def _add_pair_args(sub: argparse.ArgumentParser, required: bool = True) -> None:
    sub.add_argument("topology", help="Path to a topology JSON file")
    sub.add_argument("--source", "-s", type=int, required=required, help="Source node id")
    sub.add_argument("--destination", "-d", type=int, required=required, help="Destination node id")


def _add_generator_args(sub: argparse.ArgumentParser, defaults: bool) -> None:
    def default(value):
        return value if defaults else None

    sub.add_argument("--nodes", type=int, default=default(100), help="Number of nodes")
    sub.add_argument("--links", type=int, default=default(320), help="Target directed link count")
    sub.add_argument("--cap-min", type=int, default=default(5), help="Smallest capacity (Mbps)")
    sub.add_argument("--cap-max", type=int, default=default(15), help="Largest capacity (Mbps)")
    sub.add_argument("--cap-step", type=int, default=default(1), help="Capacity grid step (Mbps)")
    sub.add_argument("--seed", type=int, default=default(0), help="Master seed")
    sub.add_argument("--out", "-o", default=None, help="Output file (default: stdout)")


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = MeshflowArgumentParser(
        description="meshflow - multipath routing throughput for multirate wireless mesh networks",
        prog="meshflow",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Gen command
    gen_parser = subparsers.add_parser("gen", help="Generate a random topology")
    _add_generator_args(gen_parser, defaults=True)
    gen_parser.add_argument(
        "--rates", choices=["grid", "80211b"], default="grid",
        help="Capacity set: the cap-min..cap-max grid or 802.11b rates",
    )
    gen_parser.add_argument(
        "--strict", action="store_true", help="Fail instead of bridging disconnected layouts"
    )
    gen_parser.set_defaults(func=cmd_gen)

    # Solve command
    solve_parser = subparsers.add_parser("solve", help="Find multipath routes and a schedule")
    _add_pair_args(solve_parser)
    solve_parser.add_argument("--single-path", action="store_true", help="Print the MTM route instead")
    solve_parser.add_argument("--dump-schedule", action="store_true", help="Include the slot schedule")
    solve_parser.add_argument(
        "--no-reuse-baseline", action="store_true", help="Schedule the MTM route without spatial reuse"
    )
    solve_parser.add_argument(
        "--metric", choices=["medium-time", "hop-count"], default="medium-time",
        help="Single-path metric for --single-path",
    )
    solve_parser.add_argument("--out", "-o", default=None, help="Output file (default: stdout)")
    solve_parser.set_defaults(func=cmd_solve)

    # Compare command
    compare_parser = subparsers.add_parser("compare", help="Compare multipath with MTM")
    _add_pair_args(compare_parser)
    compare_parser.add_argument(
        "--no-reuse-baseline", action="store_true", help="Schedule the MTM route without spatial reuse"
    )
    compare_parser.set_defaults(func=cmd_compare)

    # Experiment command
    experiment_parser = subparsers.add_parser("experiment", help="Run the hop-distance sweep")
    _add_generator_args(experiment_parser, defaults=False)
    experiment_parser.add_argument("--config", default=None, help="YAML experiment config")
    experiment_parser.add_argument("--trials", type=int, default=None, help="Trials per hop bucket")
    experiment_parser.add_argument("--hop-min", type=int, default=None, help="Smallest hop distance")
    experiment_parser.add_argument("--hop-max", type=int, default=None, help="Largest hop distance")
    experiment_parser.add_argument("--workers", type=int, default=None, help="Worker processes")
    experiment_parser.add_argument("--timing", action="store_true", help="Record solve runtime")
    experiment_parser.add_argument(
        "--no-reuse-baseline", action="store_true", help="Schedule the MTM route without spatial reuse"
    )
    experiment_parser.set_defaults(func=cmd_experiment)

    # Verify command
    verify_parser = subparsers.add_parser("verify", help="Validate a solution")
    _add_pair_args(verify_parser, required=False)
    verify_parser.add_argument("--solution", default=None, help="Solution dump to replay")
    verify_parser.add_argument("--oracle", action="store_true", help="Compare with the ordering oracle")
    verify_parser.add_argument("--max-paths", type=int, default=3, help="Oracle sequence length")
    verify_parser.add_argument("--max-hops", type=int, default=8, help="Oracle path length")
    verify_parser.set_defaults(func=cmd_verify)

    # Parse arguments
    args = parser.parse_args(argv)

    level = {0: os.getenv("MESHFLOW_LOG_LEVEL", "WARNING").upper(), 1: "INFO"}.get(args.verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    # Execute command
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
