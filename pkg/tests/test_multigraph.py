import itertools
import math
import random
from collections import Counter

import networkx as nx
import pytest

from src.generators.random_cubic import random_cubic
from src.graph.multigraph import WeightedMultigraph, find_unforced_cycles, girth


def test_edge_list_builds_cubic_graph(k4):
    assert k4.n == 4
    assert k4.m == 6
    assert k4.is_cubic()
    assert k4.is_simple()
    assert k4.degree_sum() == 12


def test_self_loop_is_listed_twice_in_incidence():
    graph = WeightedMultigraph.from_edge_list(2, [(0, 0, 3), (0, 1, 1)])
    assert graph.incidence[0].count(0) == 2
    assert graph.degree(0) == 3
    assert [edge.id for edge in graph.incident(0)] == [0, 1]
    assert not graph.is_simple()


def test_add_edge_rejects_bad_input():
    graph = WeightedMultigraph.from_edge_list(2, [])
    with pytest.raises(ValueError):
        graph.add_edge(0, 5)
    with pytest.raises(ValueError):
        graph.add_edge(0, 1, cost=-1)
    graph.add_edge(0, 1, edge_id=7)
    with pytest.raises(ValueError):
        graph.add_edge(0, 1, edge_id=7)
    assert graph.add_edge(0, 1) == 8


def test_copy_is_independent(k4):
    clone = k4.copy()
    clone.force(0)
    clone.remove_edge(5)
    assert not k4.edges[0].forced
    assert 5 in k4.edges
    assert clone.m == 5


def test_forced_queries(q3):
    q3.force(0)
    edge = q3.edges[0]
    assert q3.forced_edge_ids() == [0]
    assert 0 not in q3.unforced_edge_ids()
    assert q3.forced_degree(edge.u) == 1
    assert q3.has_forced_edge(edge.v)
    assert q3.free_vertex_count() == 6


def test_remove_vertex_drops_incident_edges(k4):
    k4.remove_vertex(0)
    assert k4.n == 3
    assert k4.m == 3
    assert all(k4.degree(v) == 2 for v in k4.vertices)


def test_edges_between_and_neighbors():
    graph = WeightedMultigraph.from_edge_list(3, [(0, 1), (1, 0), (1, 2)])
    assert graph.edges_between(0, 1) == [0, 1]
    assert graph.neighbors(1) == [0, 2]


@pytest.mark.parametrize("fixture, expected", [
    ("k4", 3),
    ("k33", 4),
    ("q3", 4),
    ("petersen", 5),
    ("heawood", 6),
])
def test_girth_of_small_cubic_graphs(request, fixture, expected):
    assert girth(request.getfixturevalue(fixture)) == expected


def test_girth_degenerate_cases():
    assert girth(WeightedMultigraph.from_edge_list(2, [(0, 0), (0, 1)])) == 1
    assert girth(WeightedMultigraph.from_edge_list(2, [(0, 1), (0, 1)])) == 2
    assert girth(WeightedMultigraph.from_edge_list(3, [(0, 1), (1, 2)])) == math.inf


@pytest.mark.parametrize("fixture, length, expected", [
    ("k4", 4, 3),
    ("q3", 4, 6),
    ("petersen", 4, 0),
    ("petersen", 6, 10),
    ("heawood", 4, 0),
])
def test_cycle_counts(request, fixture, length, expected):
    assert len(find_unforced_cycles(request.getfixturevalue(fixture), length)) == expected


def test_cycle_descriptors_are_consistent(petersen):
    for cycle in find_unforced_cycles(petersen, 6):
        assert cycle.length == 6
        for i, edge_id in enumerate(cycle.edges):
            edge = petersen.edges[edge_id]
            assert {edge.u, edge.v} == {cycle.vertices[i], cycle.vertices[(i + 1) % 6]}
        assert len(cycle.attached_edges) == 6
        assert cycle.attached_selected_count == 0


def test_forced_edges_kill_cycles(q3):
    vertical = q3.edges_between(0, 4)[0]
    q3.force(vertical)
    live = find_unforced_cycles(q3, 4)
    assert len(live) == 4
    assert len(find_unforced_cycles(q3, 4, live_only=False)) == 6

    face = next(c for c in live if set(c.vertices) == {0, 1, 2, 3})
    assert face.attached_selected_count == 1


def test_to_networkx_can_skip_forced_edges(k4):
    k4.force(0)
    assert k4.to_networkx().number_of_edges() == 6
    assert k4.to_networkx(unforced_only=True).number_of_edges() == 5
    assert k4.is_connected()


def _cycles_by_edge_subsets(graph, length, live_only):
    pool = graph.unforced_edge_ids() if live_only else sorted(graph.edges)
    found = set()
    for subset in itertools.combinations(pool, length):
        degree = Counter()
        for edge_id in subset:
            edge = graph.edges[edge_id]
            degree[edge.u] += 1
            degree[edge.v] += 1
        if len(degree) != length or any(count != 2 for count in degree.values()):
            continue
        if nx.is_connected(nx.Graph([graph.edges[edge_id].endpoints() for edge_id in subset])):
            found.add(subset)
    return found


@pytest.mark.parametrize("n", [8, 10, 12])
@pytest.mark.parametrize("seed", range(3))
def test_cycles_match_edge_subset_enumeration(n, seed):
    graph = random_cubic(n, seed)
    rng = random.Random(seed)
    for edge_id in rng.sample(sorted(graph.edges), n // 4):
        graph.force(edge_id)
    for length in (4, 6):
        for live_only in (True, False):
            listed = {cycle.key for cycle in find_unforced_cycles(graph, length, live_only=live_only)}
            assert listed == _cycles_by_edge_subsets(graph, length, live_only), (length, live_only)


@pytest.mark.parametrize("n", range(4, 22, 2))
def test_girth_agrees_with_networkx(n):
    for seed in range(3):
        graph = random_cubic(n, seed)
        assert girth(graph) == nx.girth(nx.Graph(graph.to_networkx()))
