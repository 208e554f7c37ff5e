import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import List, Tuple, Union

import pandas as pd

from src.generators.instances import CostPolicy, GeneratorSpec
from src.recurrence.recurrence import MAX_N, eval_T
from src.search.solver import SolverConfig, solve

logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    "n", "instance_label", "seed", "outcome", "leaves",
    "branches_total", "a_total", "b_total", "d_total", "log2_branches", "wall_ms",
    "run", "log2_eval_T",
]
SUMMARY_COLUMNS = ["n", "instances", "runs", "max_log2_branches", "avg_log2_branches", "log2_eval_T"]

DEFAULT_STEP = {"random": 2, "cage": 1, "hc": 6}
RUN_SEED_STRIDE = 1000

_SIZES = re.compile(r"^(\d+)(?:\.\.(\d+)(?::(\d+))?)?$")


@lru_cache(maxsize=None)
def log2_ceiling(n: int):
    """log2 T(n), the recurrence ceiling a run of size n is compared with; None past MAX_N."""
    return round(eval_T(n).log2, 6) if 1 <= n <= MAX_N else None


def parse_sizes(text: str, kind: str) -> List[int]:
    """'8', '8..16' or '8..16:4'; the default step depends on the generator kind."""
    match = _SIZES.match(text.strip())
    if not match:
        raise ValueError(f"sizes must look like a, a..b or a..b:step, got {text!r}")
    start = int(match.group(1))
    stop = int(match.group(2)) if match.group(2) else start
    step = int(match.group(3)) if match.group(3) else DEFAULT_STEP.get(kind, 1)
    if step <= 0 or stop < start:
        raise ValueError(f"empty size range {text!r}")
    return list(range(start, stop + 1, step))


@dataclass(frozen=True)
class BenchTask:
    spec: GeneratorSpec
    runs: int
    check_invariants: bool = False
    six_cycle_priority: bool = True


def _run_instance(task: BenchTask) -> List[dict]:
    """Builds one instance and solves it `runs` times with derived seeds. Runs in a worker process."""
    graph = task.spec.build()
    records = []
    for run in range(task.runs):
        config = SolverConfig(
            seed=task.spec.seed * RUN_SEED_STRIDE + run,
            check_invariants=task.check_invariants,
            trace=task.check_invariants,
            six_cycle_priority=task.six_cycle_priority,
        )
        started = time.perf_counter()
        outcome, stats = solve(graph, config)
        wall_ms = (time.perf_counter() - started) * 1000.0
        records.append({
            "n": graph.n,
            "instance_label": task.spec.label,
            "seed": task.spec.seed,
            "outcome": outcome.cost if outcome.found else "none",
            "leaves": stats.leaves,
            "branches_total": stats.branches,
            "a_total": stats.branches_by_kind["A"],
            "b_total": stats.branches_by_kind["B"],
            "d_total": stats.branches_by_kind["D"],
            "log2_branches": round(math.log2(max(stats.leaves, 1)), 6),
            "wall_ms": round(wall_ms, 3),
            "run": run,
            "log2_eval_T": log2_ceiling(graph.n),
        })
    return records


def build_tasks(kind: str, sizes: List[int], reps: int, runs: int, seed: int, costs: CostPolicy,
                check_invariants: bool = False, six_cycle_priority: bool = True) -> List[BenchTask]:
    tasks = []
    for size in sizes:
        for rep in range(reps):
            spec = GeneratorSpec(kind, size, seed + rep, costs)
            tasks.append(BenchTask(spec, runs, check_invariants, six_cycle_priority))
    return tasks


def run_bench(tasks: List[BenchTask], workers: int = 1) -> pd.DataFrame:
    """Solves every task; rows come back in task order whatever the worker count."""
    logger.info(f"Running {len(tasks)} instances on {workers} worker(s)...")
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                batches = list(executor.map(_run_instance, tasks))
        else:
            batches = [_run_instance(task) for task in tasks]
    except Exception as e:
        logger.error(f"Benchmark aborted: {e}")
        raise
    rows = [record for batch in batches for record in batch]
    logger.info(f"Benchmark finished: {len(rows)} runs")
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """Per-size worst and mean branch counts next to the recurrence ceiling."""
    rows = []
    for n, group in frame.groupby("n", sort=True):
        leaves = group["leaves"].clip(lower=1)
        n = int(n)
        rows.append({
            "n": n,
            "instances": len(group[["instance_label", "seed"]].drop_duplicates()),
            "runs": len(group),
            "max_log2_branches": round(math.log2(leaves.max()), 6),
            "avg_log2_branches": round(math.log2(leaves.mean()), 6),
            "log2_eval_T": log2_ceiling(n),
        })
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def summary_path(out: Union[str, Path]) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}.summary.csv")


def write_bench(frame: pd.DataFrame, out: Union[str, Path]) -> Tuple[Path, Path]:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    summary = summary_path(out)
    summarize(frame).to_csv(summary, index=False)
    logger.info(f"Wrote {len(frame)} rows to {out} and the summary to {summary}")
    return out, summary
