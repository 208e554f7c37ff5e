import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import networkx as nx
from networkx.utils import UnionFind

from src.core.errors import InternalSolverError, OracleRefusedError
from src.core.outcome import Outcome
from src.graph.multigraph import CycleDescriptor, WeightedMultigraph
from src.reduction.rewrite_log import RewriteLog

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_CYCLES = 20


@dataclass
class ClosureCycle:
    descriptor: CycleDescriptor
    pair: Tuple[int, int]
    complement: Tuple[int, int]
    pair_cost: int
    complement_cost: int

    @property
    def cost(self) -> int:
        return self.pair_cost + self.complement_cost

    @property
    def swap_cost(self) -> int:
        """Cost change of trading the chosen pair for its complement."""
        return self.complement_cost - self.pair_cost


@dataclass
class ComponentEdge:
    index: int
    cost: int
    first: int
    second: int


@dataclass
class ClosureInstance:
    cycles: List[ClosureCycle]
    forced: List[int]
    component_of: Dict[int, int] = field(default_factory=dict)
    component_edges: List[ComponentEdge] = field(default_factory=list)

    @property
    def component_count(self) -> int:
        return len(set(self.component_of.values()))


def _ordered_cycle(graph: WeightedMultigraph, vertices) -> CycleDescriptor:
    start = min(vertices)
    order = [start]
    edges = []
    previous_edge = None
    current = start
    while True:
        options = [eid for eid in sorted(graph.incidence[current])
                   if not graph.edges[eid].forced and eid != previous_edge]
        edge_id = options[0]
        edges.append(edge_id)
        current = graph.edges[edge_id].other(current)
        previous_edge = edge_id
        if current == start:
            break
        order.append(current)
    attached = sorted({eid for v in order for eid in graph.incidence[v] if graph.edges[eid].forced})
    return CycleDescriptor(tuple(order), tuple(edges), len(attached), tuple(attached))


def unforced_components(graph: WeightedMultigraph) -> List[set]:
    unforced = graph.to_networkx(unforced_only=True)
    return sorted((set(c) for c in nx.connected_components(unforced)), key=min)


def _is_four_cycle(graph: WeightedMultigraph, component: set) -> bool:
    if len(component) != 4:
        return False
    for vertex in component:
        unforced = [eid for eid in graph.incidence[vertex] if not graph.edges[eid].forced]
        if len(unforced) != 2 or any(graph.edges[eid].is_loop for eid in unforced):
            return False
    return True


def four_cycle_components(graph: WeightedMultigraph) -> List[CycleDescriptor]:
    """Components of G minus F that are 4-cycles, ordered by smallest vertex."""
    return [_ordered_cycle(graph, component)
            for component in unforced_components(graph)
            if _is_four_cycle(graph, component)]


def is_disjoint_4cycle_cover(graph: WeightedMultigraph) -> bool:
    components = unforced_components(graph)
    return bool(components) and all(_is_four_cycle(graph, component) for component in components)


def build_closure_instance(graph: WeightedMultigraph) -> ClosureInstance:
    """Opposite-pair choice per 4-cycle and the component graph of F plus the chosen pairs."""
    cycles = []
    for descriptor in four_cycle_components(graph):
        e0, e1, e2, e3 = descriptor.edges
        options = []
        for pair, complement in (((e0, e2), (e1, e3)), ((e1, e3), (e0, e2))):
            options.append(ClosureCycle(descriptor, pair, complement,
                                        graph.total_cost(pair), graph.total_cost(complement)))
        # cheaper pair; on a tie the pair holding the smallest edge id
        cycles.append(min(options, key=lambda c: (c.pair_cost, min(c.pair))))

    instance = ClosureInstance(cycles, graph.forced_edge_ids())
    components = UnionFind(graph.vertices)
    for edge_id in instance.forced + [eid for cycle in cycles for eid in cycle.pair]:
        edge = graph.edges[edge_id]
        components.union(edge.u, edge.v)
    instance.component_of = {vertex: components[vertex] for vertex in sorted(graph.vertices)}

    for index, cycle in enumerate(cycles):
        ends = {instance.component_of[graph.edges[eid].u] for eid in cycle.pair}
        if len(ends) > 2:
            raise InternalSolverError(f"opposite pair {cycle.pair} touches {len(ends)} components")
        if len(ends) == 2:
            first, second = sorted(ends)
            instance.component_edges.append(ComponentEdge(index, cycle.swap_cost, first, second))
    return instance


def _finish(graph: WeightedMultigraph, log: RewriteLog, edge_ids: List[int], expected_cost: int) -> Outcome:
    tour = log.expand(edge_ids)
    cost = log.expanded_cost(tour)
    if cost != expected_cost:
        raise InternalSolverError(f"closure tour costs {expected_cost} but expands to {cost}")
    return Outcome.tour(cost, tour)


def solve_4cycle_closure(graph: WeightedMultigraph, log: RewriteLog) -> Outcome:
    """
    Finish a node whose unforced edges form disjoint 4-cycles: take the cheaper
    opposite pair of every cycle, then join the pieces of F plus the pairs with
    a minimum spanning tree of pair swaps (Kruskal).

    Returns:
        Outcome with input-graph cost and edges, or no tour when the swaps cannot connect the pieces
    """
    instance = build_closure_instance(graph)
    forest = UnionFind(set(instance.component_of.values()))
    swapped = set()
    tree_cost = 0
    for option in sorted(instance.component_edges, key=lambda e: (e.cost, e.index)):
        if forest[option.first] != forest[option.second]:
            forest.union(option.first, option.second)
            swapped.add(option.index)
            tree_cost += option.cost

    if len(swapped) != instance.component_count - 1:
        logger.warning(f"4-cycle closure failed: {instance.component_count} pieces cannot be joined by pair swaps")
        return Outcome.no_tour()

    chosen = list(instance.forced)
    for index, cycle in enumerate(instance.cycles):
        chosen.extend(cycle.complement if index in swapped else cycle.pair)
    base_cost = graph.total_cost(instance.forced) + sum(cycle.pair_cost for cycle in instance.cycles)
    return _finish(graph, log, chosen, base_cost + tree_cost)


def _is_single_cycle(graph: WeightedMultigraph, edge_ids: List[int]) -> bool:
    degree = {vertex: 0 for vertex in graph.vertices}
    components = UnionFind(graph.vertices)
    for edge_id in edge_ids:
        edge = graph.edges[edge_id]
        degree[edge.u] += 1
        degree[edge.v] += 1
        components.union(edge.u, edge.v)
    if any(d != 2 for d in degree.values()):
        return False
    return len(list(components.to_sets())) == 1


def brute_force_closure(graph: WeightedMultigraph, log: RewriteLog) -> Outcome:
    """Reference for the closure: every combination of opposite pairs, keep the cheapest single cycle."""
    cycles = four_cycle_components(graph)
    if len(cycles) > BRUTE_FORCE_MAX_CYCLES:
        raise OracleRefusedError(f"{len(cycles)} 4-cycles exceed the brute-force limit of {BRUTE_FORCE_MAX_CYCLES}")

    forced = graph.forced_edge_ids()
    best = None
    for mask in range(1 << len(cycles)):
        chosen = list(forced)
        for index, cycle in enumerate(cycles):
            e0, e1, e2, e3 = cycle.edges
            chosen.extend((e1, e3) if mask >> index & 1 else (e0, e2))
        if not _is_single_cycle(graph, chosen):
            continue
        key = (graph.total_cost(chosen), sorted(chosen))
        if best is None or key < best:
            best = key

    if best is None:
        return Outcome.no_tour()
    return _finish(graph, log, best[1], best[0])
