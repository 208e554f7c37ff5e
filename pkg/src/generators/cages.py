import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List

import networkx as nx

from src.core.errors import GeneratorError
from src.graph.multigraph import WeightedMultigraph

logger = logging.getLogger(__name__)

CATALOG_PATH = Path(__file__).parent / "data" / "cages.json"
CAGE_ORDERS = {3: 4, 4: 6, 5: 10, 6: 14, 7: 24, 8: 30, 9: 58, 10: 70, 11: 112}


@lru_cache(maxsize=1)
def _catalog() -> Dict[int, dict]:
    with open(CATALOG_PATH, "r", encoding="utf-8") as handle:
        entries = json.load(handle)["cages"]
    return {entry["girth"]: entry for entry in entries}


def available_girths() -> List[int]:
    return sorted(_catalog())


def _build(entry: dict) -> nx.Graph:
    if "edges" in entry:
        graph = nx.Graph()
        graph.add_nodes_from(range(entry["order"]))
        graph.add_edges_from(tuple(edge) for edge in entry["edges"])
        return graph
    return nx.LCF_graph(entry["order"], entry["lcf"], entry["repeats"])


def cage(g: int) -> WeightedMultigraph:
    """
    The (3, g)-cage from the bundled catalog, unit costs.

    Every entry is checked for order, 3-regularity and girth before it is
    returned; a catalog entry that fails raises GeneratorError.
    """
    entry = _catalog().get(g)
    if entry is None:
        raise GeneratorError(f"no cage with girth {g} in the catalog (available: {available_girths()})")

    nx_graph = _build(entry)
    graph = WeightedMultigraph.from_networkx(nx_graph)
    expected = CAGE_ORDERS[g]
    if graph.n != expected or entry["order"] != expected:
        raise GeneratorError(f"catalog cage for girth {g} has {graph.n} vertices, expected {expected}")
    if not graph.is_cubic():
        raise GeneratorError(f"catalog cage for girth {g} ({entry['name']}) is not 3-regular")
    measured = nx.girth(nx_graph)
    if measured != g:
        raise GeneratorError(f"catalog cage for girth {g} ({entry['name']}) has girth {measured}")

    logger.debug(f"Loaded {entry['name']} with {graph.n} vertices")
    return graph
