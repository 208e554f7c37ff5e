import networkx as nx
import pytest

from src.graph.graph_io import dump_graph
from src.graph.multigraph import WeightedMultigraph


def is_hamiltonian_cycle(graph: WeightedMultigraph, edge_ids) -> bool:
    edge_ids = list(edge_ids)
    if len(edge_ids) != graph.n or len(set(edge_ids)) != len(edge_ids):
        return False
    cycle = nx.MultiGraph()
    cycle.add_nodes_from(graph.vertices)
    for edge_id in edge_ids:
        edge = graph.edges[edge_id]
        cycle.add_edge(edge.u, edge.v)
    return all(degree == 2 for _, degree in cycle.degree()) and nx.is_connected(cycle)


@pytest.fixture
def k4():
    return WeightedMultigraph.from_networkx(nx.complete_graph(4))


@pytest.fixture
def k33():
    return WeightedMultigraph.from_networkx(nx.complete_bipartite_graph(3, 3))


@pytest.fixture
def q3():
    # vertex i is the cube corner whose bits read i
    return WeightedMultigraph.from_networkx(nx.hypercube_graph(3))


@pytest.fixture
def petersen():
    return WeightedMultigraph.from_networkx(nx.petersen_graph())


@pytest.fixture
def heawood():
    return WeightedMultigraph.from_networkx(nx.heawood_graph())


@pytest.fixture
def c6_with_pendants():
    """Live 6-cycle 0..5 (edge ids 0..5) whose every vertex carries a forced pendant edge."""
    graph = WeightedMultigraph.from_edge_list(12, [(i, (i + 1) % 6) for i in range(6)])
    for i in range(6):
        graph.add_edge(i, i + 6, forced=True)
    return graph


@pytest.fixture
def graph_file(tmp_path):
    def write(graph: WeightedMultigraph, name: str = "graph.txt"):
        path = tmp_path / name
        path.write_text(dump_graph(graph), encoding="utf-8")
        return path
    return write


@pytest.fixture
def is_tour():
    return is_hamiltonian_cycle
