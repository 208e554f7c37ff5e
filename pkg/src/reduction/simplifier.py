import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from networkx.utils import UnionFind

from src.core.errors import InternalSolverError
from src.graph.multigraph import CycleDescriptor, WeightedMultigraph, find_unforced_cycles
from src.reduction.rewrite_log import (
    EdgeRemoved,
    ForcedFlagSet,
    ForcedPathMerge,
    RewriteLog,
    TriangleContraction,
)

logger = logging.getLogger(__name__)


class SimplifyTag(Enum):
    PRUNED = "Pruned"
    SOLVED = "Solved"
    IN_PROGRESS = "InProgress"


@dataclass
class SimplifyOutcome:
    tag: SimplifyTag
    applied_rules: List[str] = field(default_factory=list)
    cost: Optional[int] = None
    tour: Tuple[int, ...] = ()
    pruned_by: Optional[str] = None
    parallel_after_contraction: bool = False

    @property
    def is_pruned(self) -> bool:
        return self.tag is SimplifyTag.PRUNED

    @property
    def is_solved(self) -> bool:
        return self.tag is SimplifyTag.SOLVED

    @property
    def in_progress(self) -> bool:
        return self.tag is SimplifyTag.IN_PROGRESS


# --- terminal checks, rules 1(a)-1(d) ---

def _low_degree_vertex(graph: WeightedMultigraph) -> Optional[int]:
    for vertex in sorted(graph.vertices):
        if graph.degree(vertex) <= 1:
            return vertex
    return None


def _forced_hamiltonian_cycle(graph: WeightedMultigraph) -> Optional[List[int]]:
    forced = graph.forced_edge_ids()
    if len(forced) != graph.n:
        return None
    if any(graph.forced_degree(v) != 2 for v in graph.vertices):
        return None
    components = UnionFind(graph.vertices)
    for edge_id in forced:
        edge = graph.edges[edge_id]
        components.union(edge.u, edge.v)
    if len(list(components.to_sets())) != 1:
        return None
    return forced


def _forced_cycle_edge(graph: WeightedMultigraph) -> Optional[int]:
    components = UnionFind()
    for edge_id in graph.forced_edge_ids():
        edge = graph.edges[edge_id]
        if components[edge.u] == components[edge.v]:
            return edge_id
        components.union(edge.u, edge.v)
    return None


def _overloaded_vertex(graph: WeightedMultigraph) -> Optional[int]:
    for vertex in sorted(graph.vertices):
        if graph.forced_degree(vertex) >= 3:
            return vertex
    return None


# --- rewriting rules, 1(e)-1(j) ---

def _remove_parallel_edge(graph: WeightedMultigraph, log: RewriteLog) -> Optional[str]:
    if graph.n < 2:
        return None
    # on two vertices a tour uses two of the parallel edges, so only a third one can go
    smallest_group = 3 if graph.n == 2 else 2
    groups = {}
    for edge_id in sorted(graph.edges):
        edge = graph.edges[edge_id]
        if not edge.is_loop:
            groups.setdefault(edge.endpoints(), []).append(edge)
    for endpoints in sorted(groups):
        group = groups[endpoints]
        unforced = [edge for edge in group if not edge.forced]
        if len(group) < smallest_group or not unforced:
            continue
        # costlier unforced edge goes; on equal cost the higher id
        victim = max(unforced, key=lambda edge: (edge.cost, edge.id))
        graph.remove_edge(victim.id)
        log.record(EdgeRemoved(victim.id, "1e"))
        return f"1e:{victim.id}"
    return None


def _remove_self_loop(graph: WeightedMultigraph, log: RewriteLog) -> Optional[str]:
    if graph.n <= 1:
        return None
    for edge_id in sorted(graph.edges):
        edge = graph.edges[edge_id]
        if edge.is_loop and not edge.forced:
            graph.remove_edge(edge_id)
            log.record(EdgeRemoved(edge_id, "1f"))
            return f"1f:{edge_id}"
    return None


def _force_degree_two(graph: WeightedMultigraph, log: RewriteLog) -> Optional[str]:
    for vertex in sorted(graph.vertices):
        if graph.degree(vertex) != 2:
            continue
        unforced = [eid for eid in dict.fromkeys(graph.incidence[vertex]) if not graph.edges[eid].forced]
        if not unforced:
            continue
        for edge_id in unforced:
            graph.force(edge_id)
            log.record(ForcedFlagSet(edge_id, "1g"))
        return f"1g:{vertex}"
    return None


def merge_forced_path(graph: WeightedMultigraph, log: RewriteLog, vertex: int) -> int:
    """
    Replace the forced path u-v-w through vertex v by one forced edge u-w whose
    cost is the sum of the two. Drops v and its remaining edge.

    Returns:
        id of the new forced edge
    """
    forced = graph.forced_incident(vertex)
    if len(forced) != 2 or forced[0] == forced[1]:
        raise InternalSolverError(f"vertex {vertex} does not have exactly two forced edges")

    first, second = (graph.edges[eid] for eid in forced)
    u, w = first.other(vertex), second.other(vertex)
    cost = first.cost + second.cost
    others = [eid for eid in graph.incidence[vertex] if eid not in forced]
    dropped = others[0] if others else None

    graph.remove_vertex(vertex)
    new_edge = graph.add_edge(u, w, cost, forced=True)
    log.record(ForcedPathMerge(new_edge, (first.id, second.id), vertex, dropped))
    logger.debug(f"Merged forced edges {first.id},{second.id} at vertex {vertex} into {new_edge} (cost {cost})")
    return new_edge


def _merge_any_forced_path(graph: WeightedMultigraph, log: RewriteLog) -> Optional[str]:
    for vertex in sorted(graph.vertices):
        if graph.forced_degree(vertex) == 2:
            new_edge = merge_forced_path(graph, log, vertex)
            return f"1h:{vertex}->{new_edge}"
    return None


def find_triangle(graph: WeightedMultigraph) -> Optional[Tuple[int, int, int]]:
    """Lexicographically smallest triangle (x < y < z), or None."""
    for x in sorted(graph.vertices):
        higher = [v for v in graph.neighbors(x) if v > x]
        for i, y in enumerate(higher):
            for z in higher[i + 1:]:
                if graph.edges_between(y, z):
                    return (x, y, z)
    return None


def contract_triangle(graph: WeightedMultigraph, log: RewriteLog, triangle: Tuple[int, int, int]) -> int:
    """
    Contract triangle xyz into one supervertex. Each external edge at a corner
    is re-created at the supervertex with the cost of the opposite triangle
    edge added, and is forced when that opposite edge was forced.

    Returns:
        the supervertex id
    """
    x, y, z = triangle
    side = {}
    for a, b in ((x, y), (y, z), (z, x)):
        between = graph.edges_between(a, b)
        if not between:
            raise InternalSolverError(f"{triangle} is not a triangle")
        side[frozenset((a, b))] = graph.edges[min(between, key=lambda eid: (graph.edges[eid].cost, eid))]
    triangle_edge_ids = {edge.id for edge in side.values()}

    corner_edges = {}
    planned = []
    for corner in (x, y, z):
        rest = [v for v in (x, y, z) if v != corner]
        opposite = side[frozenset(rest)]
        corner_edges[corner] = tuple(sorted(side[frozenset((corner, v))].id for v in rest))
        for edge_id in sorted(set(graph.incidence[corner]) - triangle_edge_ids):
            edge = graph.edges[edge_id]
            planned.append((edge, corner, edge.other(corner), opposite))

    for corner in (x, y, z):
        graph.remove_vertex(corner)
    super_vertex = graph.new_vertex_id()

    external_edges = {}
    cost_deltas = {}
    far_ends = []
    for edge, corner, far, opposite in planned:
        new_id = graph.add_edge(super_vertex, far, edge.cost + opposite.cost, forced=edge.forced or opposite.forced)
        external_edges[new_id] = (edge.id, corner)
        cost_deltas[new_id] = opposite.cost
        far_ends.append(far)

    created_parallel = len(set(far_ends)) != len(far_ends)
    log.record(TriangleContraction(super_vertex, triangle, corner_edges, external_edges, cost_deltas, created_parallel))
    if created_parallel:
        logger.warning(f"Contracting triangle {triangle} created parallel edges at supervertex {super_vertex}")
    return super_vertex


def _contract_any_triangle(graph: WeightedMultigraph, log: RewriteLog) -> Optional[str]:
    triangle = find_triangle(graph)
    if triangle is None:
        return None
    super_vertex = contract_triangle(graph, log, triangle)
    return f"1i:{triangle[0]},{triangle[1]},{triangle[2]}->{super_vertex}"


def _attached(graph: WeightedMultigraph, cycle: CycleDescriptor, vertex: int) -> List[int]:
    on_cycle = set(cycle.edges)
    return [eid for eid in dict.fromkeys(graph.incidence[vertex]) if eid not in on_cycle]


def forcing_applies(graph: WeightedMultigraph, cycle: CycleDescriptor) -> bool:
    """True when two opposite vertices of the 4-cycle each carry a forced attached edge."""
    carries = [any(graph.edges[eid].forced for eid in _attached(graph, cycle, v)) for v in cycle.vertices]
    return (carries[0] and carries[2]) or (carries[1] and carries[3])


def apply_4cycle_forcing(graph: WeightedMultigraph, log: RewriteLog, cycle: CycleDescriptor) -> List[int]:
    """Force every non-cycle edge at a vertex of the cycle. Returns the newly forced ids."""
    newly_forced = []
    for vertex in cycle.vertices:
        for edge_id in _attached(graph, cycle, vertex):
            if not graph.edges[edge_id].forced:
                graph.force(edge_id)
                log.record(ForcedFlagSet(edge_id, "1j"))
                newly_forced.append(edge_id)
    return newly_forced


def _force_four_cycle(graph: WeightedMultigraph, log: RewriteLog) -> Optional[str]:
    for cycle in find_unforced_cycles(graph, 4):
        if cycle.attached_selected_count == len(cycle.attached_edges):
            continue
        if forcing_applies(graph, cycle):
            forced = apply_4cycle_forcing(graph, log, cycle)
            return f"1j:{','.join(str(eid) for eid in forced)}"
    return None


REWRITE_RULES = (
    _remove_parallel_edge,
    _remove_self_loop,
    _force_degree_two,
    _merge_any_forced_path,
    _contract_any_triangle,
    _force_four_cycle,
)


def _check_fixpoint(graph: WeightedMultigraph):
    if graph.n > 2 and not graph.is_simple():
        raise InternalSolverError(f"simplify stopped on a non-simple graph {graph}")
    if not graph.is_cubic():
        raise InternalSolverError(f"simplify stopped on a non-cubic graph {graph}")


def simplify(graph: WeightedMultigraph, log: RewriteLog) -> SimplifyOutcome:
    """
    Apply rules 1(a)-1(j) in order, restarting from 1(a) after every rewrite,
    until one of them ends the node or none applies.

    Args:
        graph: search node graph, modified in place
        log: rewrite log of the same node, appended to

    Returns:
        SimplifyOutcome; a Solved cost and tour are in input-graph terms
    """
    applied = []
    parallel_after_contraction = False

    while True:
        vertex = _low_degree_vertex(graph)
        if vertex is not None:
            return SimplifyOutcome(SimplifyTag.PRUNED, applied, pruned_by=f"1a:{vertex}",
                                   parallel_after_contraction=parallel_after_contraction)

        cycle = _forced_hamiltonian_cycle(graph)
        if cycle is not None:
            cost = graph.total_cost(cycle)
            tour = log.expand(cycle)
            if log.expanded_cost(tour) != cost:
                raise InternalSolverError(f"forced cycle costs {cost} but expands to {log.expanded_cost(tour)}")
            applied.append("1b")
            return SimplifyOutcome(SimplifyTag.SOLVED, applied, cost=cost, tour=tuple(tour),
                                   parallel_after_contraction=parallel_after_contraction)

        edge_id = _forced_cycle_edge(graph)
        if edge_id is not None:
            return SimplifyOutcome(SimplifyTag.PRUNED, applied, pruned_by=f"1c:{edge_id}",
                                   parallel_after_contraction=parallel_after_contraction)

        vertex = _overloaded_vertex(graph)
        if vertex is not None:
            return SimplifyOutcome(SimplifyTag.PRUNED, applied, pruned_by=f"1d:{vertex}",
                                   parallel_after_contraction=parallel_after_contraction)

        step = None
        for rule in REWRITE_RULES:
            step = rule(graph, log)
            if step is not None:
                break
        if step is None:
            break
        applied.append(step)
        if step.startswith("1i") and log.own_records[-1].created_parallel:
            parallel_after_contraction = True

    _check_fixpoint(graph)
    return SimplifyOutcome(SimplifyTag.IN_PROGRESS, applied, parallel_after_contraction=parallel_after_contraction)
