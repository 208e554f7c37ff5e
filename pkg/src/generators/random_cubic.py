import logging
import random

import networkx as nx

from src.core.errors import GeneratorError
from src.graph.multigraph import WeightedMultigraph

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 10_000


def _pairing(n: int, rng: random.Random):
    """One round of the pairing model: three stubs per vertex matched uniformly."""
    stubs = [vertex for vertex in range(n) for _ in range(3)]
    rng.shuffle(stubs)
    edges = set()
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v:
            return None
        key = (min(u, v), max(u, v))
        if key in edges:
            return None
        edges.add(key)
    return sorted(edges)


def random_cubic(n: int, seed: int = 0) -> WeightedMultigraph:
    """
    Simple connected 3-regular graph on n vertices with unit costs.

    Pairings with a loop, a repeated edge or more than one component are
    rejected and redrawn from the same seeded generator, so a given (n, seed)
    always yields the same graph.
    """
    if n < 4 or n % 2:
        raise GeneratorError(f"3-regular graphs need even order n >= 4, got {n}")

    rng = random.Random(seed)
    for attempt in range(1, MAX_ATTEMPTS + 1):
        edges = _pairing(n, rng)
        if edges is None:
            continue
        if not nx.is_connected(nx.Graph(edges)):
            continue
        logger.debug(f"random_cubic(n={n}, seed={seed}) accepted after {attempt} pairings")
        return WeightedMultigraph.from_edge_list(n, edges)
    raise GeneratorError(f"no simple connected pairing for n={n} after {MAX_ATTEMPTS} attempts")
