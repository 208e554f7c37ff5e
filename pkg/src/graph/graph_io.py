import logging
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional, Union

from src.core.errors import GraphFormatError
from src.graph.multigraph import MAX_TOTAL_COST, WeightedMultigraph

logger = logging.getLogger(__name__)


def _parse_cost(token: str, line_number: int, scale: Optional[int]) -> int:
    if scale is None:
        try:
            return int(token)
        except ValueError:
            raise GraphFormatError(f"cost '{token}' is not an integer (use --scale for decimal costs)", line_number)

    try:
        scaled = Decimal(token) * scale
    except InvalidOperation:
        raise GraphFormatError(f"cost '{token}' is not a number", line_number)
    if scaled != scaled.to_integral_value():
        raise GraphFormatError(f"cost '{token}' has more precision than scale {scale} allows (mixed precision)", line_number)
    return int(scaled)


def load_graph(text: str, scale: Optional[int] = None, require_cubic: bool = False) -> WeightedMultigraph:
    """
    Parse the text graph format into a WeightedMultigraph.

    Args:
        text: file content ('#' comments, "p <n> <m>" header, m lines "e <u> <v> <cost>", 1-based)
        scale: multiply decimal costs by this factor; results must be integral
        require_cubic: reject headers whose degree sum cannot be 3n

    Returns:
        Graph on vertices 0..n-1, edge ids 0..m-1 in file order, nothing forced
    """
    graph = None
    declared_edges = 0
    header_line = None
    total_cost = 0

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()

        if tokens[0] == "p":
            if graph is not None:
                raise GraphFormatError("duplicate header", line_number)
            if len(tokens) != 3:
                raise GraphFormatError("malformed header, expected 'p <n> <m>'", line_number)
            try:
                n, m = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise GraphFormatError("malformed header, counts must be integers", line_number)
            if n < 1 or m < 0:
                raise GraphFormatError(f"malformed header, bad counts n={n} m={m}", line_number)
            if require_cubic and 2 * m != 3 * n:
                raise GraphFormatError(f"odd degree sum: a cubic graph on {n} vertices has {3 * n / 2:g} edges, header declares {m}", line_number)
            graph = WeightedMultigraph()
            for vertex in range(n):
                graph.add_vertex(vertex)
            declared_edges = m
            header_line = line_number
            continue

        if tokens[0] != "e":
            raise GraphFormatError(f"unknown line type '{tokens[0]}'", line_number)
        if graph is None:
            raise GraphFormatError("edge before header", line_number)
        if len(tokens) != 4:
            raise GraphFormatError("malformed edge, expected 'e <u> <v> <cost>'", line_number)
        try:
            u, v = int(tokens[1]), int(tokens[2])
        except ValueError:
            raise GraphFormatError("malformed edge, vertex indices must be integers", line_number)
        if not (1 <= u <= graph.n and 1 <= v <= graph.n):
            raise GraphFormatError("vertex index out of range", line_number)
        cost = _parse_cost(tokens[3], line_number, scale)
        if cost < 0:
            raise GraphFormatError(f"negative cost {tokens[3]}", line_number)
        if graph.m >= declared_edges:
            raise GraphFormatError(f"more edges than the {declared_edges} declared", line_number)
        total_cost += cost
        if total_cost >= MAX_TOTAL_COST:
            raise GraphFormatError("total edge cost must stay below 2^62", line_number)
        graph.add_edge(u - 1, v - 1, cost)

    if graph is None:
        raise GraphFormatError("missing header line 'p <n> <m>'")
    if graph.m != declared_edges:
        raise GraphFormatError(f"header declares {declared_edges} edges, found {graph.m}", header_line)
    if not graph.is_connected():
        raise GraphFormatError("graph is disconnected")

    logger.debug(f"Loaded graph with {graph.n} vertices and {graph.m} edges")
    return graph


def read_graph_file(path: Union[str, Path], scale: Optional[int] = None, require_cubic: bool = False) -> WeightedMultigraph:
    path = Path(path)
    logger.info(f"Reading graph file {path}")
    return load_graph(path.read_text(encoding="utf-8"), scale=scale, require_cubic=require_cubic)


def dump_graph(graph: WeightedMultigraph, comment: Optional[str] = None) -> str:
    """Graph file text; vertices renumbered 1..n in id order, edges in id order."""
    index = {vertex: position for position, vertex in enumerate(sorted(graph.vertices), start=1)}
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"p {graph.n} {graph.m}")
    for edge_id in sorted(graph.edges):
        edge = graph.edges[edge_id]
        lines.append(f"e {index[edge.u]} {index[edge.v]} {edge.cost}")
    return "\n".join(lines) + "\n"


def write_graph_file(graph: WeightedMultigraph, path: Union[str, Path], comment: Optional[str] = None):
    path = Path(path)
    path.write_text(dump_graph(graph, comment), encoding="utf-8")
    logger.info(f"Wrote graph with {graph.n} vertices to {path}")
