import pytest

from src.core.errors import GraphFormatError
from src.graph.graph_io import dump_graph, load_graph, read_graph_file, write_graph_file
from src.graph.multigraph import girth

K4_TEXT = """\
# K4, unit costs
p 4 6
e 1 2 1
e 1 3 1
e 1 4 1
e 2 3 1
e 2 4 1
e 3 4 1
"""


def test_load_k4():
    graph = load_graph(K4_TEXT)
    assert graph.n == 4
    assert graph.m == 6
    assert graph.is_cubic()
    assert not graph.forced_edge_ids()
    assert sorted(graph.edges) == list(range(6))


def test_load_petersen_round_trip(petersen):
    graph = load_graph(dump_graph(petersen))
    assert graph.m == 15
    assert girth(graph) == 5


def test_dump_is_stable(petersen):
    text = dump_graph(petersen, comment="petersen")
    assert text.startswith("# petersen\np 10 15\n")
    assert dump_graph(load_graph(text), comment="petersen") == text


def test_vertex_index_out_of_range_names_the_line():
    text = "p 4 6\ne 1 5 1\n"
    with pytest.raises(GraphFormatError, match="vertex index out of range") as info:
        load_graph(text)
    assert info.value.line_number == 2


@pytest.mark.parametrize("text, message", [
    ("e 1 2 1\n", "edge before header"),
    ("p 4\n", "malformed header"),
    ("p x 6\n", "malformed header"),
    ("p 2 1\np 2 1\n", "duplicate header"),
    ("p 2 1\ne 1 2 -3\n", "negative cost"),
    ("p 2 1\ne 1 2 1.5\n", "not an integer"),
    ("p 2 1\ne 1 2\n", "malformed edge"),
    ("p 2 1\nq 1 2 1\n", "unknown line type"),
    ("p 2 1\ne 1 2 1\ne 1 2 1\n", "more edges"),
    ("p 3 3\ne 1 2 1\n", "found 1"),
    ("p 4 2\ne 1 2 1\ne 3 4 1\n", "disconnected"),
    ("# nothing\n", "missing header"),
])
def test_malformed_files(text, message):
    with pytest.raises(GraphFormatError, match=message):
        load_graph(text)


def test_odd_degree_sum_only_checked_for_cubic_input():
    text = "p 3 2\ne 1 2 1\ne 2 3 1\n"
    assert load_graph(text).m == 2
    with pytest.raises(GraphFormatError, match="odd degree sum") as info:
        load_graph(text, require_cubic=True)
    assert info.value.line_number == 1


def test_total_cost_limit():
    text = f"p 2 2\ne 1 2 {2 ** 61}\ne 1 2 {2 ** 61}\n"
    with pytest.raises(GraphFormatError, match="2\\^62"):
        load_graph(text)


def test_decimal_costs_need_a_scale():
    text = "p 2 2\ne 1 2 1.25\ne 1 2 0.5\n"
    graph = load_graph(text, scale=100)
    assert [graph.edges[eid].cost for eid in sorted(graph.edges)] == [125, 50]
    with pytest.raises(GraphFormatError, match="mixed precision"):
        load_graph(text, scale=10)


def test_file_helpers(tmp_path, heawood):
    path = tmp_path / "heawood.txt"
    write_graph_file(heawood, path, comment="heawood")
    graph = read_graph_file(path, require_cubic=True)
    assert graph.n == 14
    assert girth(graph) == 6
