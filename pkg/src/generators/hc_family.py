import logging
from typing import List, Tuple

from src.core.errors import GeneratorError
from src.graph.multigraph import WeightedMultigraph

logger = logging.getLogger(__name__)

# six-vertex gadget with ports 0 and 5; four Hamiltonian paths join the ports
GADGET_EDGES = ((0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5))

# n = 6: cubic only as a multigraph (0-1 doubled); four Hamiltonian cycles
SIX_VERTEX_MEMBER = ((0, 1), (0, 1), (0, 5), (1, 2), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5))


def _ring_of_gadgets(k: int) -> List[Tuple[int, int]]:
    edges = []
    for i in range(k):
        base = 6 * i
        edges.extend((base + u, base + v) for u, v in GADGET_EDGES)
        # out-port of gadget i to the in-port of the next one
        edges.append((base + 5, (6 * (i + 1)) % (6 * k)))
    return edges


def hc_rich_family(n: int) -> WeightedMultigraph:
    """
    Cubic graph on n vertices with exactly 2^(n/3) Hamiltonian cycles, unit costs.

    For n >= 12 the graph is a ring of n/6 gadgets, each crossed by four
    port-to-port Hamiltonian paths, and is simple. n = 6 has a doubled edge.
    """
    if n < 6 or n % 6:
        raise GeneratorError(f"hc_rich_family needs n a positive multiple of 6, got {n}")
    edges = SIX_VERTEX_MEMBER if n == 6 else _ring_of_gadgets(n // 6)
    graph = WeightedMultigraph.from_edge_list(n, edges)
    logger.debug(f"hc_rich_family({n}): {graph.m} edges, simple={graph.is_simple()}")
    return graph
