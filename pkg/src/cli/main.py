import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

# Add the repository root to the path so the script also runs as `python src/cli/main.py`
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from mpmath import nstr

from src.cli.bench import build_tasks, parse_sizes, run_bench, write_bench
from src.config.settings import Settings, get_settings
from src.core.errors import GeneratorError, GraphFormatError, InvariantViolationError, OracleRefusedError
from src.generators.instances import COST_POLICIES, KINDS, CostPolicy, GeneratorSpec
from src.graph.graph_io import dump_graph, read_graph_file
from src.oracle.held_karp import count_hamiltonian_cycles, held_karp
from src.recurrence.recurrence import (
    MAX_N, BoundParams, growth_base, recurrence_frame, verify_constraints, verify_dominance,
)
from src.search.invariants import check_path_invariants, write_trace_csv
from src.search.solver import SolverConfig, solve

logger = logging.getLogger("src.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _edge_list(text: str) -> List[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated edge ids, got {text!r}")


def _add_cost_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--costs", choices=COST_POLICIES, default="unit", help="edge cost policy")
    parser.add_argument("--lo", type=int, default=1, help="smallest uniform cost")
    parser.add_argument("--hi", type=int, default=100, help="largest uniform cost")


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubic-tsp",
        description="Exact TSP for cubic graphs by branch and bound, with oracles, generators and the recurrence bound.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    solve_cmd = sub.add_parser("solve", help="solve a graph file")
    solve_cmd.add_argument("file")
    solve_cmd.add_argument("--seed", type=int, default=settings.seed)
    solve_cmd.add_argument("--deterministic", action="store_true", default=settings.deterministic,
                           help="branch on the smallest edge id when F is empty")
    solve_cmd.add_argument("--trace", metavar="CSV", help="write one row per branch to this file")
    solve_cmd.add_argument("--check-invariants", action="store_true", default=settings.check_invariants)
    solve_cmd.add_argument("--no-six-cycle-priority", dest="six_cycle_priority", action="store_false",
                           default=settings.six_cycle_priority, help="run the algorithm without the 6-cycle rule")
    solve_cmd.add_argument("--prune", action="store_true", help="cut nodes whose forced cost reaches the best tour")
    solve_cmd.add_argument("--branch-edges", type=_edge_list, metavar="IDS",
                           help="comma-separated edge ids to branch on first")
    solve_cmd.add_argument("--scale", type=int, help="multiply decimal costs by this factor")

    oracle_cmd = sub.add_parser("oracle", help="Held-Karp reference solution")
    oracle_cmd.add_argument("file")
    oracle_cmd.add_argument("--count", action="store_true", help="also count Hamiltonian cycles")
    oracle_cmd.add_argument("--scale", type=int)

    gen_cmd = sub.add_parser("gen", help="write a generated graph")
    gen_cmd.add_argument("kind", choices=KINDS)
    gen_cmd.add_argument("--n", type=int, help="vertex count (random, hc)")
    gen_cmd.add_argument("--girth", type=int, help="girth (cage)")
    gen_cmd.add_argument("--seed", type=int, default=settings.seed)
    gen_cmd.add_argument("--out", help="output file, stdout when omitted")
    _add_cost_flags(gen_cmd)

    bench_cmd = sub.add_parser("bench", help="solve generated instances and write CSV")
    bench_cmd.add_argument("--kind", choices=KINDS, default="random")
    bench_cmd.add_argument("--sizes", required=True, help="a, a..b or a..b:step")
    bench_cmd.add_argument("--reps", type=int, default=5, help="instances per size")
    bench_cmd.add_argument("--runs", type=int, default=3, help="solver runs per instance")
    bench_cmd.add_argument("--seed", type=int, default=settings.seed)
    bench_cmd.add_argument("--workers", type=int, default=settings.workers)
    bench_cmd.add_argument("--check-invariants", action="store_true", default=settings.check_invariants)
    bench_cmd.add_argument("--no-six-cycle-priority", dest="six_cycle_priority", action="store_false",
                           default=settings.six_cycle_priority)
    bench_cmd.add_argument("--out", required=True)
    _add_cost_flags(bench_cmd)

    rec_cmd = sub.add_parser("recurrence", help="tabulate T(n) against the bounds")
    rec_cmd.add_argument("--max-n", type=int, default=MAX_N)
    rec_cmd.add_argument("--out", required=True)

    bound_cmd = sub.add_parser("verify-bound", help="check the constants of the exponential bound")
    bound_cmd.add_argument("--dominance-n", type=int, metavar="N",
                           help="also check T <= R on every reachable state for n = 1..N")
    return parser


def _trace_target(args, settings: Settings) -> Path:
    if getattr(args, "trace", None):
        return Path(args.trace)
    return Path(settings.trace_dir) / f"{Path(args.file).stem}.trace.csv"


def cmd_solve(args, settings: Settings) -> int:
    graph = read_graph_file(args.file, scale=args.scale, require_cubic=True)
    config = SolverConfig.from_settings(
        settings,
        seed=args.seed,
        deterministic=args.deterministic,
        check_invariants=args.check_invariants,
        six_cycle_priority=args.six_cycle_priority,
        prune=args.prune and not args.check_invariants,
        trace=bool(args.trace) or args.check_invariants,
        edge_script=args.branch_edges,
    )
    if args.prune and args.check_invariants:
        logger.warning("--prune is ignored while invariants are checked")

    try:
        outcome, stats = solve(graph, config)
    except InvariantViolationError as e:
        path = write_trace_csv(e.report.get("trace", []), _trace_target(args, settings))
        print(f"invariant violated: {e}; trace written to {path}", file=sys.stderr)
        return EXIT_INVARIANT

    print(outcome.describe())
    if args.trace:
        write_trace_csv(stats.trace, args.trace)
    if args.check_invariants:
        report = check_path_invariants(stats)
        if not report["passed"]:
            path = write_trace_csv(stats.trace, _trace_target(args, settings))
            print(f"invariant violated: {'; '.join(report['failures'])}; trace written to {path}", file=sys.stderr)
            return EXIT_INVARIANT
    logger.info(f"{stats.leaves} leaves, {stats.branches} branches, {stats.pruned} pruned")
    return EXIT_OK


def cmd_oracle(args, settings: Settings) -> int:
    graph = read_graph_file(args.file, scale=args.scale)
    print(held_karp(graph).describe())
    if args.count:
        print(f"hamiltonian cycles {count_hamiltonian_cycles(graph)}")
    return EXIT_OK


def _costs(args) -> CostPolicy:
    return CostPolicy(args.costs, args.lo, args.hi)


def cmd_gen(args, settings: Settings) -> int:
    size = args.girth if args.kind == "cage" else args.n
    if size is None:
        raise GeneratorError(f"gen {args.kind} needs {'--girth' if args.kind == 'cage' else '--n'}")
    spec = GeneratorSpec(args.kind, size, args.seed, _costs(args))
    text = dump_graph(spec.build(), comment=f"{spec.label} costs={args.costs}")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {spec.label} to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args, settings: Settings) -> int:
    sizes = parse_sizes(args.sizes, args.kind)
    tasks = build_tasks(args.kind, sizes, args.reps, args.runs, args.seed, _costs(args),
                        args.check_invariants, args.six_cycle_priority)
    try:
        frame = run_bench(tasks, max(1, args.workers))
    except InvariantViolationError as e:
        path = write_trace_csv(e.report.get("trace", []), Path(settings.trace_dir) / "bench.trace.csv")
        print(f"invariant violated: {e}; trace written to {path}", file=sys.stderr)
        return EXIT_INVARIANT
    out, summary = write_bench(frame, args.out)
    print(f"wrote {len(frame)} rows to {out} (summary {summary})")
    return EXIT_OK


def cmd_recurrence(args, settings: Settings) -> int:
    frame = recurrence_frame(args.max_n)
    frame.to_csv(args.out, index=False)
    last = frame.iloc[-1]
    print(f"n={last['n']}: log2 T = {last['log2T']:.3f}, log2 R = {last['log2R']:.3f}; wrote {args.out}")
    return EXIT_OK


def cmd_verify_bound(args, settings: Settings) -> int:
    params = BoundParams.published()
    report = verify_constraints(params)
    print(f"alpha = {params.alpha}")
    print(f"beta = {params.beta}")
    print(f"gamma = {params.gamma}")
    print(f"objective = {params.objective}")
    print(f"2^({params.objective}) = {nstr(growth_base(params), 9)}")
    for name, ok in report.satisfied.items():
        print(f"{name}: {'ok' if ok else 'FAILED'} (residual {report.residuals[name]:.12f})")

    passed = report.passed
    if args.dominance_n:
        for n in range(1, args.dominance_n + 1):
            dominance = verify_dominance(n, params)
            if not dominance.passed:
                print(f"T <= R fails at n={n} on {len(dominance.violations)} states")
                passed = False
        if passed:
            print(f"T <= R holds for n = 1..{args.dominance_n}")
    return EXIT_OK if passed else EXIT_FAILURE


COMMANDS = {
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "recurrence": cmd_recurrence,
    "verify-bound": cmd_verify_bound,
}


def run(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level, logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args, settings)
    except (GraphFormatError, GeneratorError, OracleRefusedError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
