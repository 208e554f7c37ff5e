import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd

from src.recurrence.recurrence import eval_T, MAX_N
from src.search.solver import SearchStats

logger = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "depth", "provenance", "kind", "edge",
    "s_before", "f_before", "s_child1", "f_child1", "s_child2", "f_child2",
    "a", "b", "d", "lines", "notes",
]

# A-branches are charged to line 1, B-branches to line 2
KIND_LINES = {"A": 1, "B": 2}


def child_decrements(row: dict) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """(ds, df) for the forced and the removed child; a pruned child decrements without limit."""
    result = []
    for slot in (1, 2):
        s_child, f_child = row.get(f"s_child{slot}"), row.get(f"f_child{slot}")
        if s_child is None or f_child is None:
            result.append((math.inf, math.inf))
        else:
            result.append((row["s_before"] - s_child, row["f_before"] - f_child))
    return result[0], result[1]


def _either_order(first, second, test_one, test_other) -> bool:
    return (test_one(first) and test_other(second)) or (test_one(second) and test_other(first))


def dominated_lines(row: dict) -> List[int]:
    """Recurrence lines whose decrements both children of this branch meet or exceed."""
    one, two = child_decrements(row)
    lines = []
    if all(ds >= 3 and df >= 4 for ds, df in (one, two)):
        lines.append(1)
    if all(ds >= 3 for ds, _ in (one, two)):
        lines.append(2)
    if _either_order(one, two, lambda c: c[0] >= 5 and c[1] >= 2, lambda c: c[0] >= 2 and c[1] >= 2):
        lines.append(3)
    if all(ds >= 4 for ds, _ in (one, two)):
        lines.append(4)
    if _either_order(one, two, lambda c: c[0] >= 4 and c[1] >= 2, lambda c: c[0] >= 3 and c[1] >= 2):
        lines.append(5)
    return lines


def _negative_measures(stats: SearchStats) -> int:
    count = int(stats.root_s is not None and min(stats.root_s, stats.root_f) < 0)
    for row in stats.trace:
        values = [row[key] for key in ("s_before", "f_before", "s_child1", "f_child1", "s_child2", "f_child2")]
        count += sum(1 for value in values if value is not None and value < 0)
    return count


def annotate_trace(trace: List[dict]) -> pd.DataFrame:
    rows = []
    for row in trace:
        annotated = dict(row)
        annotated["lines"] = "|".join(str(line) for line in dominated_lines(row))
        rows.append(annotated)
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def check_path_invariants(stats: SearchStats, trace_sink: Optional[Union[str, Path]] = None) -> Dict:
    """
    Summarize a finished search against the recurrence it is meant to follow.

    `passed` needs the path bounds (3a+7b <= n, a <= n/4, b <= n/7),
    non-negative s and f at every recorded node, and for every traced branch a
    dominated line with each child shrinking s by at least 2. An A-branch must
    meet line 1 and a B-branch line 2. Branches on an arbitrary edge (empty F)
    are not charged to a line and count as unchecked. D-branches covered only
    by lines 1 or 2 and the leaf count against T(n) are reported only.
    """
    n = stats.n
    failures = []
    if stats.six_cycle_priority and stats.max_path_3a_7b > n:
        failures.append(f"3a+7b reached {stats.max_path_3a_7b} > n = {n}")
    if stats.max_path_a > n // 4:
        failures.append(f"a reached {stats.max_path_a} > n/4")
    if stats.max_path_b > n // 7:
        failures.append(f"b reached {stats.max_path_b} > n/7")

    leaf_bound = eval_T(n).value if 1 <= n <= MAX_N else None
    within_leaf_bound = leaf_bound is None or stats.leaves <= leaf_bound
    if not within_leaf_bound:
        logger.info(f"{stats.leaves} leaves exceed T({n}) = {leaf_bound}")

    negative = _negative_measures(stats)
    if negative:
        failures.append(f"s or f went negative at {negative} recorded nodes")

    undominated, unchecked, off_line, d_on_ab_lines = 0, 0, 0, 0
    for row in stats.trace:
        if row["provenance"] == "3c":
            unchecked += 1
            continue
        one, two = child_decrements(row)
        lines = dominated_lines(row)
        if not lines or min(one[0], two[0]) < 2:
            undominated += 1
        required = KIND_LINES.get(row["kind"])
        if required is not None and required not in lines:
            off_line += 1
        if row["kind"] == "D" and lines and set(lines) <= {1, 2}:
            d_on_ab_lines += 1
    if undominated:
        failures.append(f"{undominated} branches dominate no recurrence line")
    if off_line:
        failures.append(f"{off_line} A/B branches miss the line of their kind")

    report = {
        "n": n,
        "passed": not failures,
        "failures": failures,
        "max_3a_7b": stats.max_path_3a_7b,
        "max_a": stats.max_path_a,
        "max_b": stats.max_path_b,
        "leaves": stats.leaves,
        "leaf_bound": leaf_bound,
        "within_leaf_bound": within_leaf_bound,
        "branches_traced": len(stats.trace),
        "undominated_branches": undominated,
        "unchecked_branches": unchecked,
        "off_line_branches": off_line,
        "d_branches_on_ab_lines": d_on_ab_lines,
        "negative_measures": negative,
    }
    if failures:
        logger.warning(f"Path invariants failed for n={n}: {'; '.join(failures)}")
        if trace_sink is not None and stats.trace:
            write_trace_csv(stats.trace, trace_sink)
    return report


def write_trace_csv(trace: List[dict], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    annotate_trace(trace).to_csv(path, index=False)
    logger.info(f"Trace with {len(trace)} branches written to {path}")
    return path
