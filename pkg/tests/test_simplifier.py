import random

import pytest

from src.closure.four_cycle_closure import is_disjoint_4cycle_cover
from src.generators.instances import CostPolicy
from src.generators.random_cubic import random_cubic
from src.graph.multigraph import WeightedMultigraph, find_unforced_cycles
from src.oracle.held_karp import held_karp
from src.reduction.rewrite_log import RewriteLog
from src.reduction.simplifier import (
    REWRITE_RULES,
    SimplifyTag,
    _forced_cycle_edge,
    _forced_hamiltonian_cycle,
    _low_degree_vertex,
    _overloaded_vertex,
    _remove_parallel_edge,
    _remove_self_loop,
    apply_4cycle_forcing,
    contract_triangle,
    find_triangle,
    forcing_applies,
    merge_forced_path,
    simplify,
)
from src.search.branching import choose_branch_edge


def completion_cost(graph: WeightedMultigraph):
    """Cheapest Hamiltonian cycle containing every forced edge, or None."""
    penalty = sum(edge.cost for edge in graph.edges.values()) + 1
    shadow = graph.copy()
    for edge in shadow.edges.values():
        if not edge.forced:
            edge.cost += penalty
    outcome = held_karp(shadow)
    if not outcome.found:
        return None
    unforced_used = sum(1 for eid in outcome.edges if not graph.edges[eid].forced)
    if unforced_used != graph.n - len(graph.forced_edge_ids()):
        return None
    return outcome.cost - unforced_used * penalty


def _terminal(graph):
    return (_low_degree_vertex(graph) is not None
            or _forced_hamiltonian_cycle(graph) is not None
            or _forced_cycle_edge(graph) is not None
            or _overloaded_vertex(graph) is not None)


def test_k4_is_solved_by_reductions(k4, is_tour):
    log = RewriteLog.for_graph(k4)
    result = simplify(k4.copy(), log)
    assert result.tag is SimplifyTag.SOLVED
    assert result.cost == 4
    assert is_tour(k4, result.tour)
    assert any(step.startswith("1i") for step in result.applied_rules)


def test_petersen_is_already_a_fixpoint(petersen):
    result = simplify(petersen, RewriteLog.for_graph(petersen))
    assert result.in_progress
    assert result.applied_rules == []


def test_low_degree_vertex_prunes():
    graph = WeightedMultigraph.from_edge_list(3, [(0, 1), (1, 2)])
    result = simplify(graph, RewriteLog.for_graph(graph))
    assert result.is_pruned
    assert result.pruned_by == "1a:0"


def test_forced_short_cycle_prunes(k4):
    for eid in (k4.edges_between(0, 1) + k4.edges_between(1, 2) + k4.edges_between(0, 2)):
        k4.force(eid)
    result = simplify(k4, RewriteLog.for_graph(k4))
    assert result.is_pruned
    assert result.pruned_by.startswith("1c")


def test_three_forced_edges_at_a_vertex_prune(k4):
    for edge in k4.incident(0):
        k4.force(edge.id)
    result = simplify(k4, RewriteLog.for_graph(k4))
    assert result.pruned_by == "1d:0"


def test_parallel_edge_keeps_the_cheaper_one():
    graph = WeightedMultigraph.from_edge_list(3, [(0, 1, 5), (0, 1, 2), (1, 2, 1), (2, 0, 1)])
    log = RewriteLog.for_graph(graph)
    assert _remove_parallel_edge(graph, log) == "1e:0"
    assert graph.edges_between(0, 1) == [1]


def test_parallel_edge_tie_and_forced_partner():
    graph = WeightedMultigraph.from_edge_list(3, [(0, 1, 4), (0, 1, 4), (1, 2), (2, 0)])
    assert _remove_parallel_edge(graph, RewriteLog.for_graph(graph)) == "1e:1"

    graph = WeightedMultigraph.from_edge_list(3, [(0, 1, 1), (0, 1, 9), (1, 2), (2, 0)])
    graph.force(1)
    assert _remove_parallel_edge(graph, RewriteLog.for_graph(graph)) == "1e:0"


def test_two_vertex_graph_keeps_a_parallel_pair():
    graph = WeightedMultigraph.from_edge_list(2, [(0, 1, 1), (0, 1, 2)])
    assert _remove_parallel_edge(graph, RewriteLog.for_graph(graph)) is None

    graph.add_edge(0, 1, 7)
    assert _remove_parallel_edge(graph, RewriteLog.for_graph(graph)) == "1e:2"
    result = simplify(graph, RewriteLog.for_graph(graph))
    assert result.is_solved
    assert result.cost == 3


def test_self_loop_is_removed():
    graph = WeightedMultigraph.from_edge_list(2, [(0, 0), (0, 1), (0, 1), (1, 1)])
    assert _remove_self_loop(graph, RewriteLog.for_graph(graph)) == "1f:0"
    assert 0 not in graph.edges


def test_degree_two_vertex_forces_its_edges():
    # prism with one rung removed: vertices 0 and 3 drop to degree two
    graph = WeightedMultigraph.from_edge_list(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (1, 4), (2, 5)])
    result = simplify(graph, RewriteLog.for_graph(graph))
    assert "1g:0" in result.applied_rules
    assert result.is_solved
    assert result.cost == 6


def test_merge_forced_path_sums_costs():
    graph = WeightedMultigraph.from_edge_list(4, [(0, 1, 2), (1, 2, 3), (1, 3, 9), (2, 3, 1), (0, 3, 1)])
    graph.force(0)
    graph.force(1)
    log = RewriteLog.for_graph(graph)
    new_edge = merge_forced_path(graph, log, 1)

    assert 1 not in graph.vertices
    assert graph.edges[new_edge].cost == 5
    assert graph.edges[new_edge].forced
    assert {graph.edges[new_edge].u, graph.edges[new_edge].v} == {0, 2}
    assert 2 not in graph.edges
    assert log.expand([new_edge]) == [0, 1]


def test_triangle_contraction_moves_costs_to_external_edges(k4):
    for edge in k4.edges.values():
        edge.cost = edge.id + 1
    log = RewriteLog.for_graph(k4)
    assert find_triangle(k4) == (0, 1, 2)

    super_vertex = contract_triangle(k4, log, (0, 1, 2))
    assert k4.n == 2
    assert sorted(k4.neighbors(super_vertex)) == [3]
    record = log.own_records[-1]
    assert record.created_parallel
    # external edge at corner 0 carries the cost of the opposite edge 1-2
    for new_id, (old_id, corner) in record.external_edges.items():
        opposite = {0: 4, 1: 2, 2: 1}[corner]
        assert record.cost_deltas[new_id] == opposite
        assert k4.edges[new_id].cost == log.base_costs[old_id] + opposite


def test_no_triangle_in_q3(q3):
    assert find_triangle(q3) is None


def test_four_cycle_forcing(q3):
    q3.force(q3.edges_between(0, 4)[0])
    q3.force(q3.edges_between(3, 7)[0])
    cycle = next(c for c in find_unforced_cycles(q3, 4) if set(c.vertices) == {0, 1, 2, 3})
    assert forcing_applies(q3, cycle)

    log = RewriteLog.for_graph(q3)
    newly = apply_4cycle_forcing(q3, log, cycle)
    assert sorted(newly) == sorted(q3.edges_between(1, 5) + q3.edges_between(2, 6))
    assert apply_4cycle_forcing(q3, log, cycle) == []
    assert all(q3.forced_degree(v) == 1 for v in (0, 1, 2, 3))


def test_forcing_needs_opposite_carriers(q3):
    q3.force(q3.edges_between(0, 4)[0])
    q3.force(q3.edges_between(1, 5)[0])
    cycle = next(c for c in find_unforced_cycles(q3, 4) if set(c.vertices) == {0, 1, 2, 3})
    assert not forcing_applies(q3, cycle)


def _check_rules_one_at_a_time(graph, log, fired=None):
    """Apply the rewrite rules in simplify's order, comparing the optimal completion after each."""
    while not _terminal(graph):
        before = completion_cost(graph)
        step = None
        for rule in REWRITE_RULES:
            step = rule(graph, log)
            if step is not None:
                break
        if step is None:
            return
        assert completion_cost(graph) == before, step
        if fired is not None:
            fired.add(step.split(":")[0])


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_rewrites_preserve_optimal_completion(seed):
    rng = random.Random(seed)
    n = rng.choice([8, 10, 12])
    graph = CostPolicy("uniform", 1, 100).apply(random_cubic(n, seed), seed)
    log = RewriteLog.for_graph(graph)

    for _ in range(n):
        before = completion_cost(graph)
        probe, probe_log = graph.copy(), log.fork()
        _check_rules_one_at_a_time(probe, probe_log)

        result = simplify(graph, log)
        if result.is_pruned:
            assert before is None
            return
        if result.is_solved:
            assert result.cost == before
            return
        assert completion_cost(graph) == before
        assert graph.is_simple() and graph.is_cubic() and find_triangle(graph) is None
        if is_disjoint_4cycle_cover(graph):
            return

        choice = choose_branch_edge(graph, rng)
        log = log.fork()
        if rng.random() < 0.5:
            graph.force(choice.edge_id)
        else:
            graph.remove_edge(choice.edge_id)


def _q3_with_opposite_forced_edges(q3):
    q3.force(q3.edges_between(0, 4)[0])
    q3.force(q3.edges_between(3, 7)[0])
    return q3


def _k4_with_a_loop(k4):
    k4.add_edge(0, 0, 5)
    return k4


def _q3_with_a_forced_path(q3):
    q3.force(q3.edges_between(0, 1)[0])
    q3.force(q3.edges_between(0, 2)[0])
    return q3


def _doubled_triangle():
    return WeightedMultigraph.from_edge_list(3, [(0, 1), (0, 1), (1, 2), (2, 0)])


def _prism_missing_a_rung():
    return WeightedMultigraph.from_edge_list(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (1, 4), (2, 5)])


@pytest.mark.parametrize("seed", range(3))
def test_each_rewrite_rule_preserves_optimal_completion(seed, k4, q3):
    states = [
        ("1e", _doubled_triangle()),
        ("1f", _k4_with_a_loop(k4.copy())),
        ("1g", _prism_missing_a_rung()),
        ("1h", _q3_with_a_forced_path(q3.copy())),
        ("1i", k4.copy()),
        ("1j", _q3_with_opposite_forced_edges(q3.copy())),
    ]
    fired = set()
    for rule, graph in states:
        graph = CostPolicy("uniform", 1, 50).apply(graph, seed)
        assert completion_cost(graph) is not None, rule
        _check_rules_one_at_a_time(graph, RewriteLog.for_graph(graph), fired)
        assert rule in fired, rule
    assert fired == {"1e", "1f", "1g", "1h", "1i", "1j"}
