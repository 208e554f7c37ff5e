import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from src.closure.four_cycle_closure import four_cycle_components
from src.core.errors import InternalSolverError
from src.graph.multigraph import CycleDescriptor, WeightedMultigraph, find_unforced_cycles

logger = logging.getLogger(__name__)


class BranchKind(Enum):
    A = "A"
    B = "B"
    D = "D"


class Provenance(Enum):
    FOUR_CYCLE = "3a"
    SIX_CYCLE = "3a'"
    ADJACENT = "3b"
    ANY = "3c"


@dataclass(frozen=True)
class BranchChoice:
    edge_id: int
    provenance: Provenance
    y: int
    z: int
    scripted: bool = False


def _carries_forced(graph: WeightedMultigraph, cycle: CycleDescriptor, vertex: int) -> bool:
    on_cycle = set(cycle.edges)
    return any(graph.edges[eid].forced for eid in graph.incidence[vertex] if eid not in on_cycle)


def _choose_four_cycle_edge(graph: WeightedMultigraph) -> Optional[BranchChoice]:
    for cycle in find_unforced_cycles(graph, 4):
        carriers = [v for v in cycle.vertices if _carries_forced(graph, cycle, v)]
        if len(carriers) < 2:
            continue
        on_cycle = set(cycle.edges)
        options = []
        for vertex in cycle.vertices:
            if vertex in carriers:
                continue
            for edge_id in graph.incidence[vertex]:
                edge = graph.edges[edge_id]
                if edge_id not in on_cycle and not edge.forced:
                    options.append((edge_id, vertex))
        if options:
            edge_id, y = min(options)
            return BranchChoice(edge_id, Provenance.FOUR_CYCLE, y, graph.edges[edge_id].other(y))
    return None


def _choose_six_cycle_edge(graph: WeightedMultigraph, cycles: List[CycleDescriptor]) -> Optional[BranchChoice]:
    best = None
    for cycle in cycles:
        if cycle.attached_selected_count == 0:
            continue
        # cycles arrive ordered by key, so strict > keeps the smallest key on ties
        if best is None or cycle.attached_selected_count > best.attached_selected_count:
            best = cycle
    if best is None:
        return None

    carriers = {v for v in best.vertices if _carries_forced(graph, best, v)}
    options = []
    for edge_id in best.edges:
        edge = graph.edges[edge_id]
        ends = [v for v in (edge.u, edge.v) if v in carriers]
        if ends:
            # both ends carrying a forced edge sorts first
            options.append((len(ends) < 2, edge_id, ends[0]))
    _, edge_id, y = min(options)
    return BranchChoice(edge_id, Provenance.SIX_CYCLE, y, graph.edges[edge_id].other(y))


def _choose_adjacent_edge(graph: WeightedMultigraph) -> Optional[BranchChoice]:
    # edges of isolated 4-cycles are left to the closure step
    isolated = {eid for cycle in four_cycle_components(graph) for eid in cycle.edges}
    candidates = graph.unforced_edge_ids()
    ordered = [eid for eid in candidates if eid not in isolated] + [eid for eid in candidates if eid in isolated]
    for edge_id in ordered:
        edge = graph.edges[edge_id]
        for y in (edge.u, edge.v):
            if graph.has_forced_edge(y):
                return BranchChoice(edge_id, Provenance.ADJACENT, y, edge.other(y))
    return None


def choose_branch_edge(graph: WeightedMultigraph,
                       rng: Optional[random.Random] = None,
                       six_cycle_priority: bool = True,
                       six_cycles: Optional[List[CycleDescriptor]] = None) -> BranchChoice:
    """
    Pick the edge to branch on.

    Order: a non-cycle edge at a 4-cycle with two cycle vertices carrying
    forced edges (3a); the best live 6-cycle with forced attached edges (3a');
    the smallest unforced edge next to F, edges of isolated 4-cycles last
    (3b); any edge when F is empty (3c, seeded-random with rng, smallest id
    without).
    """
    choice = _choose_four_cycle_edge(graph)
    if choice is None and six_cycle_priority:
        if six_cycles is None:
            six_cycles = find_unforced_cycles(graph, 6)
        choice = _choose_six_cycle_edge(graph, six_cycles)
    if choice is None and graph.forced_edge_ids():
        choice = _choose_adjacent_edge(graph)
    if choice is None and not graph.forced_edge_ids():
        candidates = graph.unforced_edge_ids()
        if candidates:
            edge_id = rng.choice(candidates) if rng is not None else candidates[0]
            edge = graph.edges[edge_id]
            choice = BranchChoice(edge_id, Provenance.ANY, edge.u, edge.v)
    if choice is None:
        raise InternalSolverError(f"no branch edge qualifies in {graph}")
    return choice


def scripted_choice(graph: WeightedMultigraph, edge_id: int) -> Optional[BranchChoice]:
    """Wrap an externally chosen edge; None when the id is absent or forced."""
    edge = graph.edges.get(edge_id)
    if edge is None or edge.forced:
        return None
    for y in (edge.u, edge.v):
        if graph.has_forced_edge(y):
            return BranchChoice(edge_id, Provenance.ADJACENT, y, edge.other(y), scripted=True)
    return BranchChoice(edge_id, Provenance.ANY, edge.u, edge.v, scripted=True)


def lies_on_c6(graph: WeightedMultigraph, edge_id: int, six_cycles: List[CycleDescriptor]) -> bool:
    """Edge belongs to a live 6-cycle whose six vertices all carry a forced edge."""
    for cycle in six_cycles:
        if edge_id in cycle.edges and all(graph.has_forced_edge(v) for v in cycle.vertices):
            return True
    return False


def classify_branch(graph: WeightedMultigraph, choice: BranchChoice,
                    six_cycles: Optional[List[CycleDescriptor]] = None) -> BranchKind:
    if choice.provenance is Provenance.FOUR_CYCLE:
        return BranchKind.D
    if six_cycles is None:
        six_cycles = find_unforced_cycles(graph, 6)
    if lies_on_c6(graph, choice.edge_id, six_cycles):
        return BranchKind.B
    if choice.provenance is not Provenance.ADJACENT:
        return BranchKind.D

    y, z = choice.y, choice.z
    if graph.forced_degree(y) != 1 or graph.has_forced_edge(z):
        return BranchKind.D
    third = [eid for eid in graph.incidence[y] if eid != choice.edge_id and not graph.edges[eid].forced]
    if len(third) != 1:
        return BranchKind.D
    w = graph.edges[third[0]].other(y)
    if graph.has_forced_edge(w):
        return BranchKind.D
    return BranchKind.A
