import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pigeonpost import (
    DemandGraph,
    DemandGraphError,
    degree_profile,
    lower_bound,
    parse_demand_graph,
    weakly_connected_components,
)
from pigeonpost.instances import demo_graph


def test_parse_smallest_instance():
    g = parse_demand_graph('{"n": 2, "demands": [[0, 1]]}')
    assert g.n == 2
    assert g.demands == {(0, 1)}


def test_parse_demo_instance():
    text = '{"n": 6, "demands": [[0,3],[0,4],[0,5],[1,4],[1,5],[2,3]]}'
    assert parse_demand_graph(text) == demo_graph()


@pytest.mark.parametrize(
    "text",
    [
        '{"n": 3, "demands": [[0, 0]]}',  # self-demand
        '{"n": 2, "demands": [[0, 2]]}',  # endpoint out of range
        '{"n": -1, "demands": []}',  # negative node count
        '{"n": 2}',  # missing demands
        "not json",
        '{"n": 2, "demands": [[0, 1, 2]]}',  # not a pair
    ],
)
def test_parse_rejects_invalid(text):
    with pytest.raises(DemandGraphError):
        parse_demand_graph(text)


def test_duplicates_are_dropped_and_counted():
    g = DemandGraph.from_pairs(3, [(0, 1), (0, 1), (1, 2), (0, 1)])
    assert g.demands == {(0, 1), (1, 2)}
    assert g.duplicates_dropped == 2


def test_canonical_json_sorts_demands():
    g = DemandGraph.from_pairs(4, [(2, 3), (0, 1), (0, 2)])
    assert g.to_json() == (
        '{\n  "demands": [\n    [\n      0,\n      1\n    ],\n    [\n      0,\n'
        '      2\n    ],\n    [\n      2,\n      3\n    ]\n  ],\n  "n": 4\n}\n'
    )


def test_json_round_trip(demo):
    assert parse_demand_graph(demo.to_json()) == demo


def test_degree_profile_demo(demo):
    profile = degree_profile(demo)
    assert profile.sources == {0, 1, 2}
    assert profile.destinations == {3, 4, 5}
    assert profile.degree[0] == 3


def test_degree_profile_empty():
    profile = degree_profile(DemandGraph.from_pairs(4, []))
    assert profile.sources == frozenset()
    assert profile.destinations == frozenset()


def test_degree_profile_cycle():
    g = DemandGraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    profile = degree_profile(g)
    assert profile.sources == {0, 1, 2, 3}
    assert profile.destinations == {0, 1, 2, 3}
    assert all(d == 2 for d in profile.degree)


def test_components_demo_is_single(demo):
    partition = weakly_connected_components(demo)
    assert partition.components == (frozenset(range(6)),)
    assert partition.isolated == frozenset()


def test_components_split():
    g = DemandGraph.from_pairs(4, [(0, 1), (2, 3)])
    partition = weakly_connected_components(g)
    assert partition.components == (frozenset({0, 1}), frozenset({2, 3}))


def test_components_isolated_nodes():
    g = DemandGraph.from_pairs(5, [(0, 1)])
    partition = weakly_connected_components(g)
    assert partition.components == (frozenset({0, 1}),)
    assert partition.isolated == {2, 3, 4}


def test_lower_bound_demo(demo):
    bound = lower_bound(demo)
    assert bound.overall == 3
    assert bound.per_component == (3,)
    assert bound.component_total == 3


def test_lower_bound_empty():
    assert lower_bound(DemandGraph.from_pairs(3, [])).overall == 0


def test_lower_bound_star():
    g = DemandGraph.from_pairs(4, [(0, 1), (0, 2), (0, 3)])
    assert lower_bound(g).overall == 3


@st.composite
def demand_graphs(draw):
    n = draw(st.integers(min_value=0, max_value=7))
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    demands = draw(st.lists(st.sampled_from(pairs), max_size=12)) if pairs else []
    return DemandGraph.from_pairs(n, demands)


@settings(max_examples=80, deadline=None)
@given(demand_graphs())
def test_partition_covers_all_nodes_exactly_once(g):
    partition = weakly_connected_components(g)
    seen: set[int] = set()
    for comp in partition.components:
        assert not comp & seen
        seen |= comp
    assert not seen & partition.isolated
    assert seen | partition.isolated == set(range(g.n))
    for src, dst in g.demands:
        owners = [c for c in partition.components if src in c or dst in c]
        assert len(owners) == 1 and src in owners[0] and dst in owners[0]


@settings(max_examples=80, deadline=None)
@given(demand_graphs())
def test_lower_bound_never_exceeds_demand_count(g):
    bound = lower_bound(g)
    assert bound.overall <= len(g.demands)
    assert bound.component_total >= bound.overall
