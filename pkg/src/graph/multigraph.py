import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

MAX_TOTAL_COST = 2 ** 62


@dataclass
class Edge:
    id: int
    u: int
    v: int
    cost: int
    forced: bool = False

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, vertex: int) -> int:
        return self.v if self.u == vertex else self.u

    def endpoints(self) -> Tuple[int, int]:
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


@dataclass(frozen=True)
class CycleDescriptor:
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    attached_selected_count: int = 0
    attached_edges: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def key(self) -> Tuple[int, ...]:
        return tuple(sorted(self.edges))


class WeightedMultigraph:
    """
    Mutable multigraph with stable vertex/edge ids, integer costs and a forced
    flag per edge. The forced edges are the set F of the branch-and-bound search.
    """

    def __init__(self):
        self.vertices = set()
        self.edges: Dict[int, Edge] = {}
        self.incidence: Dict[int, List[int]] = {}
        self._next_vertex_id = 0
        self._next_edge_id = 0

    # --- construction ---

    def add_vertex(self, vertex: Optional[int] = None) -> int:
        if vertex is None:
            vertex = self._next_vertex_id
        if vertex in self.vertices:
            raise ValueError(f"vertex {vertex} already present")
        self.vertices.add(vertex)
        self.incidence[vertex] = []
        self._next_vertex_id = max(self._next_vertex_id, vertex + 1)
        return vertex

    def add_edge(self, u: int, v: int, cost: int = 1, forced: bool = False, edge_id: Optional[int] = None) -> int:
        if u not in self.vertices or v not in self.vertices:
            raise ValueError(f"edge {u}-{v} references a missing vertex")
        if cost < 0:
            raise ValueError(f"negative cost {cost} on edge {u}-{v}")
        if edge_id is None:
            edge_id = self._next_edge_id
        if edge_id in self.edges:
            raise ValueError(f"edge id {edge_id} already used")
        self._next_edge_id = max(self._next_edge_id, edge_id + 1)
        self.edges[edge_id] = Edge(edge_id, u, v, cost, forced)
        self.incidence[u].append(edge_id)
        self.incidence[v].append(edge_id)
        return edge_id

    @classmethod
    def from_edge_list(cls, n: int, edge_list: Iterable[Tuple]) -> "WeightedMultigraph":
        """Builds a graph on vertices 0..n-1 from (u, v) or (u, v, cost) tuples."""
        graph = cls()
        for vertex in range(n):
            graph.add_vertex(vertex)
        for item in edge_list:
            u, v = item[0], item[1]
            cost = item[2] if len(item) > 2 else 1
            graph.add_edge(u, v, cost)
        return graph

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, cost: int = 1) -> "WeightedMultigraph":
        """Relabels the nodes of nx_graph to 0..n-1 in sorted order; every edge gets `cost`."""
        index = {node: i for i, node in enumerate(sorted(nx_graph.nodes))}
        edge_list = sorted(tuple(sorted((index[u], index[v]))) for u, v in nx_graph.edges())
        return cls.from_edge_list(len(index), [(u, v, cost) for u, v in edge_list])

    def copy(self) -> "WeightedMultigraph":
        clone = WeightedMultigraph()
        clone.vertices = set(self.vertices)
        clone.edges = {eid: Edge(e.id, e.u, e.v, e.cost, e.forced) for eid, e in self.edges.items()}
        clone.incidence = {v: list(ids) for v, ids in self.incidence.items()}
        clone._next_vertex_id = self._next_vertex_id
        clone._next_edge_id = self._next_edge_id
        return clone

    # --- mutation ---

    def remove_edge(self, edge_id: int) -> Edge:
        edge = self.edges.pop(edge_id)
        self.incidence[edge.u].remove(edge_id)
        self.incidence[edge.v].remove(edge_id)
        return edge

    def remove_vertex(self, vertex: int):
        for edge_id in list(self.incidence[vertex]):
            if edge_id in self.edges:
                self.remove_edge(edge_id)
        del self.incidence[vertex]
        self.vertices.discard(vertex)

    def force(self, edge_id: int):
        self.edges[edge_id].forced = True

    def new_vertex_id(self) -> int:
        return self.add_vertex(self._next_vertex_id)

    # --- queries ---

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, vertex: int) -> int:
        return len(self.incidence[vertex])

    def incident(self, vertex: int) -> List[Edge]:
        # a self-loop appears once
        return [self.edges[eid] for eid in dict.fromkeys(self.incidence[vertex])]

    def forced_incident(self, vertex: int) -> List[int]:
        """Forced edge ids at vertex; a forced self-loop is listed twice."""
        return [eid for eid in self.incidence[vertex] if self.edges[eid].forced]

    def forced_degree(self, vertex: int) -> int:
        return len(self.forced_incident(vertex))

    def has_forced_edge(self, vertex: int) -> bool:
        return any(self.edges[eid].forced for eid in self.incidence[vertex])

    def forced_edge_ids(self) -> List[int]:
        return sorted(eid for eid, e in self.edges.items() if e.forced)

    def unforced_edge_ids(self) -> List[int]:
        return sorted(eid for eid, e in self.edges.items() if not e.forced)

    def free_vertex_count(self) -> int:
        return sum(1 for v in self.vertices if not self.has_forced_edge(v))

    def edges_between(self, u: int, v: int) -> List[int]:
        return sorted(eid for eid in set(self.incidence[u]) if self.edges[eid].other(u) == v)

    def neighbors(self, vertex: int) -> List[int]:
        return sorted({self.edges[eid].other(vertex) for eid in self.incidence[vertex]})

    def total_cost(self, edge_ids: Iterable[int]) -> int:
        return sum(self.edges[eid].cost for eid in edge_ids)

    def degree_sum(self) -> int:
        return sum(self.degree(v) for v in self.vertices)

    def is_cubic(self) -> bool:
        return all(self.degree(v) == 3 for v in self.vertices)

    def is_simple(self) -> bool:
        seen = set()
        for edge in self.edges.values():
            if edge.is_loop or edge.endpoints() in seen:
                return False
            seen.add(edge.endpoints())
        return True

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return nx.is_connected(self.to_networkx())

    def to_networkx(self, unforced_only: bool = False) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(sorted(self.vertices))
        for edge_id in sorted(self.edges):
            edge = self.edges[edge_id]
            if unforced_only and edge.forced:
                continue
            graph.add_edge(edge.u, edge.v, key=edge_id, cost=edge.cost, forced=edge.forced)
        return graph

    def __repr__(self):
        forced = len(self.forced_edge_ids())
        return f"WeightedMultigraph(n={self.n}, m={self.m}, forced={forced})"


def girth(graph: WeightedMultigraph):
    """
    Length of the shortest cycle: 1 for a self-loop, 2 for a parallel pair,
    math.inf for a forest. Otherwise a BFS from every vertex.
    """
    if any(edge.is_loop for edge in graph.edges.values()):
        return 1
    if not graph.is_simple():
        return 2

    best = math.inf
    for root in sorted(graph.vertices):
        dist = {root: 0}
        via = {root: None}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for edge_id in graph.incidence[x]:
                if edge_id == via[x]:
                    continue
                y = graph.edges[edge_id].other(x)
                if y not in dist:
                    dist[y] = dist[x] + 1
                    via[y] = edge_id
                    queue.append(y)
                else:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def _attached_edges(graph: WeightedMultigraph, vertices, cycle_edges) -> List[int]:
    on_cycle = set(cycle_edges)
    attached = set()
    for vertex in vertices:
        for edge_id in graph.incidence[vertex]:
            if edge_id not in on_cycle:
                attached.add(edge_id)
    return sorted(attached)


def find_unforced_cycles(graph: WeightedMultigraph, length: int, live_only: bool = True) -> List[CycleDescriptor]:
    """
    All simple cycles with the given number of edges, found by a bounded DFS
    started at every vertex.

    Args:
        length: 4 or 6 (any length >= 3 works)
        live_only: skip cycles that use a forced edge

    Returns:
        CycleDescriptors ordered by their sorted edge-id tuple
    """
    found = {}
    for start in sorted(graph.vertices):
        # start is the smallest vertex of the cycle
        path_vertices = [start]
        path_edges = []

        def extend(current):
            for edge_id in graph.incidence[current]:
                edge = graph.edges[edge_id]
                if edge.is_loop or edge_id in path_edges:
                    continue
                if live_only and edge.forced:
                    continue
                nxt = edge.other(current)
                if len(path_edges) == length - 1:
                    if nxt == start:
                        edges = tuple(path_edges + [edge_id])
                        key = tuple(sorted(edges))
                        if key not in found:
                            found[key] = (tuple(path_vertices), edges)
                    continue
                if nxt <= start or nxt in path_vertices:
                    continue
                path_vertices.append(nxt)
                path_edges.append(edge_id)
                extend(nxt)
                path_vertices.pop()
                path_edges.pop()

        extend(start)

    cycles = []
    for key in sorted(found):
        vertices, edges = found[key]
        attached = _attached_edges(graph, vertices, edges)
        selected = sum(1 for eid in attached if graph.edges[eid].forced)
        cycles.append(CycleDescriptor(vertices, edges, selected, tuple(attached)))
    return cycles
