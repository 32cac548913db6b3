import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpturan import build_complete, build_g1
from mpturan.errors import (
    DegeneratePartsError,
    GraphParseError,
    InvalidSizesError,
    PartViolationError,
)
from mpturan.graph import MultipartiteGraph, PartSizes, new_graph, parse_graph, serialize_graph
from oracles import random_graph


def test_new_graph_sizes():
    g = new_graph((1, 1, 1, 1))
    assert (g.n, g.num_edges) == (4, 0)
    g = new_graph((5, 4, 3, 2))
    assert (g.n, g.num_edges, g.r) == (14, 0, 4)


@pytest.mark.parametrize("bad", [(0, 1), (2, -1), (), (1.5, 2)])
def test_new_graph_rejects_bad_sizes(bad):
    with pytest.raises(InvalidSizesError):
        new_graph(bad)


def test_vertices_contiguous_per_part():
    g = new_graph((3, 1, 2))
    assert [g.part_of[v] for v in g.vertices()] == [1, 1, 1, 2, 3, 3]
    assert list(g.part_vertices(3)) == [4, 5]


def test_add_edge_idempotent_and_part_checked():
    g = new_graph((1, 1))
    g.add_edge(0, 1)
    assert g.num_edges == 1
    g.add_edge(1, 0)
    assert g.num_edges == 1
    h = new_graph((2, 1))
    with pytest.raises(PartViolationError):
        h.add_edge(0, 1)


def test_remove_edge():
    g = build_complete((1, 1, 1))
    g.remove_edge(0, 2)
    assert g.num_edges == 2 and not g.has_edge(2, 0)
    g.check_invariants()


def test_degree_to():
    g = build_complete((2, 3))
    assert g.degree_to(0, {2}) == 3
    assert new_graph((2, 3)).degree_to(0, {2}) == 0
    g1 = build_g1((5, 4, 3, 2), 2)
    assert all(g1.degree_to(v, {4}) == 1 for v in g1.part_vertices(1))


def test_edges_incident():
    g = build_complete((1, 1, 1))
    assert g.edges_incident([]) == 0
    assert g.edges_incident([0]) == g.degree(0)
    assert g.edges_incident([0, 1]) == 3


def test_common_neighbors():
    g = build_complete((1, 1, 1, 1))
    assert g.common_neighbors(0, 1) == {2, 3}
    assert len(g.common_neighbors(0, 1)) == g.degree(0) + g.degree(1) - 4
    assert new_graph((2, 2)).common_neighbors(0, 2) == frozenset()
    g1 = build_g1((5, 4, 3, 2), 2)
    z = g1.part_vertices(4)[0]
    assert g1.common_neighbors(0, 5) == {z}
    with pytest.raises(PartViolationError):
        g1.common_neighbors(0, 1)


def test_remove_vertices():
    g = build_complete((2, 2))
    assert g.remove_vertices([]) == g
    h = g.remove_vertices([0])
    assert h.parts.sizes == (1, 2) and h.num_edges == 2
    with pytest.raises(DegeneratePartsError):
        build_complete((1, 1)).remove_vertices([0])


def test_parse_and_serialize():
    g = parse_graph("parts 2 2\nedge 0 2\n")
    assert g.parts.sizes == (2, 2) and g.edges() == [(0, 2)]
    assert serialize_graph(new_graph((1, 1, 1))) == "parts 1 1 1\n"
    g = parse_graph("# comment\n\nparts 1 1\n  edge 1 0  \n")
    assert g.edges() == [(0, 1)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("parts 2 2\nedge 0 1\n", 2),
        ("part 2 2\n", 1),
        ("parts 2 x\n", 1),
        ("parts 1 1\nedge 0 5\n", 2),
        ("parts 1 1\nedge 0\n", 2),
        ("parts 1 1\n\nvertex 3\n", 3),
        ("", None),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(GraphParseError) as info:
        parse_graph(text)
    assert info.value.line == line
    if line is not None:
        assert f"line {line}" in str(info.value)


def test_part_sizes_views():
    ns = PartSizes.of((2, 5, 3, 5))
    assert ns.sorted_view() == (5, 5, 3, 2)
    assert ns.sort_permutation() == (2, 4, 3, 1)
    assert ns[2] == 5 and ns.total == 15 and ns.block_sum([1, 3]) == 5


sizes_st = st.lists(st.integers(1, 4), min_size=2, max_size=5)


@settings(max_examples=150, deadline=None)
@given(sizes=sizes_st, p=st.floats(0, 1), seed=st.integers(0, 2**32 - 1))
def test_graph_invariants_on_random_graphs(sizes, p, seed):
    rng = random.Random(seed)
    g = random_graph(rng, sizes, p)
    g.check_invariants()
    # handshake
    assert sum(g.degree(v) for v in g.vertices()) == 2 * g.num_edges
    # symmetry and part discipline
    for x, y in g.edges():
        assert x in g.neighbors(y) and y in g.neighbors(x)
        assert g.part_of[x] != g.part_of[y]
    # serialization round trip
    assert parse_graph(serialize_graph(g)) == g
    # deletion consistency on one vertex per part at most, never emptying a part
    T = [v for i in range(1, g.r + 1) if g.parts[i] > 1 for v in g.part_vertices(i)[:1]]
    T = rng.sample(T, rng.randint(0, len(T))) if T else []
    assert g.remove_vertices(T).num_edges + g.edges_incident(T) == g.num_edges


def test_common_neighbour_lower_bound_on_random_4_partite():
    rng = random.Random(31)
    for _ in range(1000):
        sizes = [rng.randint(1, 5) for _ in range(4)]
        g = random_graph(rng, sizes, rng.random())
        total = sum(sizes)
        for x in g.vertices():
            for y in range(x + 1, g.n):
                if g.part_of[x] != g.part_of[y]:
                    assert len(g.common_neighbors(x, y)) >= g.degree(x) + g.degree(y) - total


def test_copy_is_independent():
    g = build_complete((2, 2))
    h = g.copy()
    h.remove_edge(0, 2)
    assert g.has_edge(0, 2) and g != h
    assert MultipartiteGraph.from_edges((2, 2), g.edges()) == g
