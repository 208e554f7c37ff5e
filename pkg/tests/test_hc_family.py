import pytest

from src.core.errors import GeneratorError
from src.generators.hc_family import hc_rich_family


def test_six_vertex_member_is_a_multigraph():
    graph = hc_rich_family(6)
    assert graph.is_cubic()
    assert not graph.is_simple()
    assert graph.edges_between(0, 1) == [0, 1]


@pytest.mark.parametrize("n", [12, 18, 24, 60])
def test_larger_members_are_simple(n):
    graph = hc_rich_family(n)
    assert graph.n == n
    assert graph.is_cubic()
    assert graph.is_simple()
    assert graph.is_connected()


@pytest.mark.parametrize("n", [0, 3, 8, 13])
def test_order_must_be_a_multiple_of_six(n):
    with pytest.raises(GeneratorError):
        hc_rich_family(n)
