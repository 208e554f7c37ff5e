import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.closure.four_cycle_closure import four_cycle_components, is_disjoint_4cycle_cover, solve_4cycle_closure
from src.config.settings import Settings, get_settings
from src.core.errors import InvariantViolationError
from src.core.outcome import Outcome
from src.graph.multigraph import WeightedMultigraph, find_unforced_cycles
from src.reduction.rewrite_log import EdgeRemoved, ForcedFlagSet, RewriteLog
from src.reduction.simplifier import simplify
from src.search.branching import BranchKind, Provenance, choose_branch_edge, classify_branch, scripted_choice


@dataclass
class SolverConfig:
    seed: int = 0
    deterministic: bool = False
    check_invariants: bool = False
    six_cycle_priority: bool = True
    prune: bool = False
    trace: bool = False
    edge_script: Optional[List[int]] = None

    @classmethod
    def from_settings(cls, settings: Settings = None, **overrides) -> "SolverConfig":
        settings = settings or get_settings()
        values = dict(
            seed=settings.seed,
            deterministic=settings.deterministic,
            check_invariants=settings.check_invariants,
            six_cycle_priority=settings.six_cycle_priority,
        )
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass
class SearchStats:
    n: int
    nodes: int = 0
    leaves: int = 0
    pruned: int = 0
    cutoffs: int = 0
    closure_successes: int = 0
    closure_failures: int = 0
    max_depth: int = 0
    root_s: Optional[int] = None
    root_f: Optional[int] = None
    max_path_a: int = 0
    max_path_b: int = 0
    max_path_3a_7b: int = 0
    branches_by_kind: Dict[str, int] = field(default_factory=lambda: {kind.value: 0 for kind in BranchKind})
    branches_by_provenance: Dict[str, int] = field(default_factory=lambda: {p.value: 0 for p in Provenance})
    six_cycle_priority: bool = True
    trace: List[dict] = field(default_factory=list)

    @property
    def branches(self) -> int:
        return sum(self.branches_by_kind.values())

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "nodes": self.nodes,
            "leaves": self.leaves,
            "pruned": self.pruned,
            "branches_total": self.branches,
            "a_total": self.branches_by_kind["A"],
            "b_total": self.branches_by_kind["B"],
            "d_total": self.branches_by_kind["D"],
            "max_depth": self.max_depth,
            "max_path_3a_7b": self.max_path_3a_7b,
        }


@dataclass
class _Node:
    graph: WeightedMultigraph
    log: RewriteLog
    depth: int = 0
    a: int = 0
    b: int = 0
    d: int = 0
    # trace row of the parent branch and which child this is (1 forced, 2 removed)
    row: Optional[dict] = None
    slot: int = 0


def measure(graph: WeightedMultigraph) -> Tuple[int, int]:
    """(s, f): s = |V| - |F| - 2 * (4-cycle components of G minus F), f = free vertices."""
    s = graph.n - len(graph.forced_edge_ids()) - 2 * len(four_cycle_components(graph))
    return s, graph.free_vertex_count()


class BranchAndBoundSolver:
    """
    Exact minimum-cost Hamiltonian cycle search on cubic graphs.

    Each node is simplified, closed by the 4-cycle step when possible, and
    otherwise split on one edge: forced first, removed second.
    """

    def __init__(self, config: SolverConfig = None):
        self.config = config or SolverConfig()
        self.logger = logging.getLogger(__name__)

    def solve(self, graph: WeightedMultigraph) -> Tuple[Outcome, SearchStats]:
        if not graph.is_cubic():
            raise ValueError(f"solver input must be 3-regular, got {graph}")
        if not graph.is_connected():
            raise ValueError("solver input must be connected")

        self.logger.info(f"Solving graph with {graph.n} vertices...")
        rng = None if self.config.deterministic else random.Random(self.config.seed)
        script = deque(self.config.edge_script or [])
        stats = SearchStats(n=graph.n, six_cycle_priority=self.config.six_cycle_priority)
        best = Outcome.no_tour()

        stack = [_Node(graph.copy(), RewriteLog.for_graph(graph))]
        while stack:
            node = stack.pop()
            stats.nodes += 1
            stats.max_depth = max(stats.max_depth, node.depth)

            result = simplify(node.graph, node.log)
            if result.parallel_after_contraction:
                self._note(node, "parallel_after_contraction")

            if result.is_pruned:
                stats.pruned += 1
                self._record_child(node, None, None)
                self._end_of_path(node, stats)
                continue

            if result.is_solved:
                self._record_child(node, 0, node.graph.free_vertex_count())
                self._leaf(node, stats)
                candidate = Outcome.tour(result.cost, result.tour)
                if candidate.better_than(best):
                    best = candidate
                continue

            s, f = measure(node.graph)
            self._record_child(node, s, f)
            if stats.root_s is None:
                stats.root_s, stats.root_f = s, f

            if self.config.prune and best.found:
                if node.graph.total_cost(node.graph.forced_edge_ids()) >= best.cost:
                    stats.cutoffs += 1
                    continue

            if is_disjoint_4cycle_cover(node.graph):
                self._leaf(node, stats)
                candidate = solve_4cycle_closure(node.graph, node.log)
                if candidate.found:
                    stats.closure_successes += 1
                    if candidate.better_than(best):
                        best = candidate
                else:
                    stats.closure_failures += 1
                    self._note(node, "closure_failure")
                continue

            self._branch(node, s, f, rng, script, stats, stack)

        self.logger.info(
            f"Search finished: {best.describe()}, {stats.leaves} leaves, "
            f"{stats.branches} branches (A={stats.branches_by_kind['A']}, "
            f"B={stats.branches_by_kind['B']}, D={stats.branches_by_kind['D']})"
        )
        return best, stats

    def _choose(self, graph: WeightedMultigraph, rng, script: deque, six_cycles):
        while script:
            edge_id = script.popleft()
            choice = scripted_choice(graph, edge_id)
            if choice is not None:
                return choice
            self.logger.warning(f"Skipping scripted edge {edge_id}: not an unforced edge of the current graph")
        return choose_branch_edge(graph, rng, self.config.six_cycle_priority, six_cycles)

    def _branch(self, node: _Node, s: int, f: int, rng, script: deque, stats: SearchStats, stack: list):
        graph = node.graph
        six_cycles = find_unforced_cycles(graph, 6)
        choice = self._choose(graph, rng, script, six_cycles)
        kind = classify_branch(graph, choice, six_cycles)

        a = node.a + (kind is BranchKind.A)
        b = node.b + (kind is BranchKind.B)
        d = node.d + (kind is BranchKind.D)
        stats.branches_by_kind[kind.value] += 1
        stats.branches_by_provenance[choice.provenance.value] += 1
        self.logger.debug(
            f"depth {node.depth}: branch on edge {choice.edge_id} ({choice.provenance.value}, {kind.value}), s={s} f={f}"
        )

        row = None
        if self.config.trace:
            row = {
                "depth": node.depth, "provenance": choice.provenance.value, "kind": kind.value,
                "edge": choice.edge_id, "s_before": s, "f_before": f,
                "s_child1": None, "f_child1": None, "s_child2": None, "f_child2": None,
                "a": a, "b": b, "d": d, "notes": "",
            }
            stats.trace.append(row)

        forced_graph = graph.copy()
        forced_graph.force(choice.edge_id)
        forced_log = node.log.fork()
        forced_log.record(ForcedFlagSet(choice.edge_id, "branch"))

        graph.remove_edge(choice.edge_id)
        removed_log = node.log.fork()
        removed_log.record(EdgeRemoved(choice.edge_id, "branch"))

        depth = node.depth + 1
        stack.append(_Node(graph, removed_log, depth, a, b, d, row, 2))
        stack.append(_Node(forced_graph, forced_log, depth, a, b, d, row, 1))

    @staticmethod
    def _record_child(node: _Node, s: Optional[int], f: Optional[int]):
        if node.row is not None:
            node.row[f"s_child{node.slot}"] = s
            node.row[f"f_child{node.slot}"] = f

    @staticmethod
    def _note(node: _Node, text: str):
        if node.row is not None:
            note = f"child{node.slot}:{text}"
            node.row["notes"] = f"{node.row['notes']};{note}" if node.row["notes"] else note

    def _leaf(self, node: _Node, stats: SearchStats):
        stats.leaves += 1
        self._end_of_path(node, stats)

    def _end_of_path(self, node: _Node, stats: SearchStats):
        n = stats.n
        stats.max_path_a = max(stats.max_path_a, node.a)
        stats.max_path_b = max(stats.max_path_b, node.b)
        stats.max_path_3a_7b = max(stats.max_path_3a_7b, 3 * node.a + 7 * node.b)
        if not self.config.check_invariants:
            return

        problems = []
        if self.config.six_cycle_priority and 3 * node.a + 7 * node.b > n:
            problems.append(f"3a+7b = {3 * node.a + 7 * node.b} > n = {n}")
        if node.a > n // 4:
            problems.append(f"a = {node.a} > n/4")
        if node.b > n // 7:
            problems.append(f"b = {node.b} > n/7")
        if problems:
            report = {"n": n, "depth": node.depth, "a": node.a, "b": node.b, "d": node.d,
                      "trace": list(stats.trace)}
            self.logger.error(f"Path invariant violated at depth {node.depth}: {', '.join(problems)}")
            raise InvariantViolationError("; ".join(problems), report)


def solve(graph: WeightedMultigraph, config: SolverConfig = None) -> Tuple[Outcome, SearchStats]:
    return BranchAndBoundSolver(config).solve(graph)
