import logging
from typing import Dict, List, Tuple

from src.core.errors import OracleRefusedError
from src.core.outcome import Outcome
from src.graph.multigraph import WeightedMultigraph

logger = logging.getLogger(__name__)

HELD_KARP_MAX_N = 20
CYCLE_COUNT_MAX_N = 24


def _cheapest_edges(graph: WeightedMultigraph) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(u, v) with u < v -> (cost, edge id) of the cheapest non-loop edge between them."""
    cheapest = {}
    for edge in graph.edges.values():
        if edge.is_loop:
            continue
        key = edge.endpoints()
        candidate = (edge.cost, edge.id)
        if key not in cheapest or candidate < cheapest[key]:
            cheapest[key] = candidate
    return cheapest


def _tiny_tour(graph: WeightedMultigraph) -> Outcome:
    edges = sorted(graph.edges.values(), key=lambda e: (e.cost, e.id))
    if graph.n == 1:
        loops = [e for e in edges if e.is_loop]
        return Outcome.tour(loops[0].cost, [loops[0].id]) if loops else Outcome.no_tour()
    links = [e for e in edges if not e.is_loop]
    if len(links) < 2:
        return Outcome.no_tour()
    return Outcome.tour(links[0].cost + links[1].cost, [links[0].id, links[1].id])


def held_karp(graph: WeightedMultigraph) -> Outcome:
    """
    Minimum-cost Hamiltonian cycle by dynamic programming over vertex subsets.

    Only subsets reachable from the start vertex are stored, layer by layer.
    Refuses graphs with more than HELD_KARP_MAX_N vertices.
    """
    n = graph.n
    if n > HELD_KARP_MAX_N:
        raise OracleRefusedError(f"Held-Karp oracle accepts at most {HELD_KARP_MAX_N} vertices, got {n}")
    if n == 0:
        return Outcome.no_tour()
    if n <= 2:
        return _tiny_tour(graph)

    order = sorted(graph.vertices)
    index = {vertex: i for i, vertex in enumerate(order)}
    cheapest = _cheapest_edges(graph)
    adjacency: List[List[Tuple[int, int, int]]] = [[] for _ in range(n)]
    for (u, v), (cost, edge_id) in cheapest.items():
        adjacency[index[u]].append((index[v], cost, edge_id))
        adjacency[index[v]].append((index[u], cost, edge_id))

    # layer[(mask, last)] = (cost, previous state, edge id)
    layer = {(1, 0): (0, None, None)}
    history = [layer]
    for _ in range(n - 1):
        following = {}
        for (mask, last), (cost, _, _) in layer.items():
            for nxt, edge_cost, edge_id in adjacency[last]:
                if mask & (1 << nxt):
                    continue
                state = (mask | (1 << nxt), nxt)
                candidate = cost + edge_cost
                if state not in following or candidate < following[state][0]:
                    following[state] = (candidate, (mask, last), edge_id)
        layer = following
        history.append(layer)
        if not layer:
            return Outcome.no_tour()

    full = (1 << n) - 1
    best = None
    for (mask, last), (cost, _, _) in layer.items():
        if mask != full:
            continue
        for nxt, edge_cost, edge_id in adjacency[last]:
            if nxt == 0:
                candidate = (cost + edge_cost, last, edge_id)
                if best is None or candidate < best:
                    best = candidate
    if best is None:
        return Outcome.no_tour()

    total, last, closing_edge = best
    tour = [closing_edge]
    state = (full, last)
    for depth in range(n - 1, 0, -1):
        _, previous, edge_id = history[depth][state]
        tour.append(edge_id)
        state = previous
    logger.debug(f"Held-Karp optimum {total} over {sum(len(layer) for layer in history)} states")
    return Outcome.tour(total, tour)


def count_hamiltonian_cycles(graph: WeightedMultigraph) -> int:
    """
    Number of Hamiltonian cycles, parallel edges counted as distinct.
    Refuses graphs with more than CYCLE_COUNT_MAX_N vertices.
    """
    n = graph.n
    if n > CYCLE_COUNT_MAX_N:
        raise OracleRefusedError(f"cycle counter accepts at most {CYCLE_COUNT_MAX_N} vertices, got {n}")
    if n == 0:
        return 0
    if n == 1:
        return sum(1 for e in graph.edges.values() if e.is_loop)
    if n == 2:
        links = sum(1 for e in graph.edges.values() if not e.is_loop)
        return links * (links - 1) // 2

    order = sorted(graph.vertices)
    start = order[0]
    # multiplicity of each neighbour, loops dropped
    adjacency: Dict[int, Dict[int, int]] = {v: {} for v in order}
    for edge in graph.edges.values():
        if edge.is_loop:
            continue
        adjacency[edge.u][edge.v] = adjacency[edge.u].get(edge.v, 0) + 1
        adjacency[edge.v][edge.u] = adjacency[edge.v].get(edge.u, 0) + 1

    visited = {start}

    def stuck(current: int) -> bool:
        for vertex in order:
            if vertex in visited:
                continue
            reachable = sum(1 for w in adjacency[vertex] if w not in visited or w in (current, start))
            if reachable < 2:
                return True
        return False

    def extend(current: int) -> int:
        if len(visited) == n:
            return adjacency[current].get(start, 0)
        if stuck(current):
            return 0
        total = 0
        for nxt, multiplicity in adjacency[current].items():
            if nxt in visited:
                continue
            visited.add(nxt)
            total += multiplicity * extend(nxt)
            visited.discard(nxt)
        return total

    directed = extend(start)
    return directed // 2
