from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from src.core.errors import InternalSolverError


@dataclass(frozen=True)
class EdgeRemoved:
    edge_id: int
    rule: str


@dataclass(frozen=True)
class ForcedFlagSet:
    edge_id: int
    rule: str


@dataclass(frozen=True)
class ForcedPathMerge:
    new_edge: int
    replaced: Tuple[int, int]
    removed_vertex: int
    dropped_edge: Optional[int] = None


@dataclass(frozen=True)
class TriangleContraction:
    super_vertex: int
    triangle_vertices: Tuple[int, int, int]
    # triangle vertex -> the two triangle edges meeting there
    corner_edges: Dict[int, Tuple[int, int]]
    # new external edge id -> (old external edge id, triangle vertex it left from)
    external_edges: Dict[int, Tuple[int, int]]
    cost_deltas: Dict[int, int]
    created_parallel: bool = False


class RewriteLog:
    """
    Ordered record of the rewrites applied to one search node's graph.

    Logs form a chain: fork() starts a child log that shares every record
    of its parent, so sibling search nodes never copy history.
    """

    def __init__(self, base_costs: Dict[int, int], parent: "RewriteLog" = None):
        self.base_costs = base_costs
        self.parent = parent
        self.own_records: List[object] = []

    @classmethod
    def for_graph(cls, graph) -> "RewriteLog":
        return cls({edge_id: edge.cost for edge_id, edge in graph.edges.items()})

    def fork(self) -> "RewriteLog":
        return RewriteLog(self.base_costs, parent=self)

    def record(self, entry):
        self.own_records.append(entry)

    def records(self) -> List[object]:
        chain = []
        log = self
        while log is not None:
            chain.append(log.own_records)
            log = log.parent
        return [entry for records in reversed(chain) for entry in records]

    def _reversed_records(self) -> Iterator[object]:
        log = self
        while log is not None:
            yield from reversed(log.own_records)
            log = log.parent

    def __len__(self):
        return len(self.records())

    def expand(self, edge_ids: Iterable[int]) -> List[int]:
        """
        Map a Hamiltonian cycle of the current graph back to the input graph.

        Replays merges and triangle contractions newest first; removals and
        flag changes do not alter which input edges a current edge stands for.
        """
        current = set(edge_ids)
        for entry in self._reversed_records():
            if isinstance(entry, ForcedPathMerge):
                if entry.new_edge in current:
                    current.discard(entry.new_edge)
                    current.update(entry.replaced)
            elif isinstance(entry, TriangleContraction):
                used = [eid for eid in entry.external_edges if eid in current]
                if not used:
                    continue
                if len(used) != 2:
                    raise InternalSolverError(f"tour uses {len(used)} edges at contracted triangle {entry.triangle_vertices}")
                used_corners = set()
                for eid in used:
                    old_edge, corner = entry.external_edges[eid]
                    current.discard(eid)
                    current.add(old_edge)
                    used_corners.add(corner)
                (skipped,) = set(entry.triangle_vertices) - used_corners
                current.update(entry.corner_edges[skipped])

        missing = [eid for eid in current if eid not in self.base_costs]
        if missing:
            raise InternalSolverError(f"expansion left edges {sorted(missing)} that are not in the input graph")
        return sorted(current)

    def expanded_cost(self, input_edge_ids: Iterable[int]) -> int:
        return sum(self.base_costs[eid] for eid in input_edge_ids)
