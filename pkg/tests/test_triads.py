import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citetriads.model import JournalRegistry, YearNetwork
from citetriads.oracle import GenSpec, brute_triads, random_dataset
from citetriads.triads import (
    ReciprocalGraph,
    TriadCountGraph,
    reciprocal_graph,
    shared_neighbor_counts,
    triangle_total,
)

from conftest import build_network, mutual


def names(*ids):
    return [f"J{i}" for i in ids]


def test_reciprocal_requires_both_arcs(shared_example):
    g = reciprocal_graph(shared_example)
    reg = shared_example.registry
    j1, j6 = reg.id_of("J1"), reg.id_of("J6")
    assert not g.has_edge(j1, j6)
    assert g.has_edge(reg.id_of("J2"), j6)
    assert g.n_edges == 8


def test_reciprocal_ignores_loops():
    reg = JournalRegistry(["A", "B"])
    net = build_network(1, reg, [("A", "A", 9), ("A", "B", 1), ("B", "A", 1)])
    g = reciprocal_graph(net)
    assert g.n_edges == 1
    assert not g.has_edge(0, 0)


def test_reciprocal_min_weight():
    reg = JournalRegistry(["A", "B"])
    net = build_network(1, reg, [("A", "B", 5), ("B", "A", 2)])
    assert reciprocal_graph(net, min_weight=2).n_edges == 1
    assert reciprocal_graph(net, min_weight=3).n_edges == 0


def test_shared_example_count(shared_example):
    t = shared_neighbor_counts(reciprocal_graph(shared_example))
    reg = shared_example.registry
    assert t.count(reg.id_of("J1"), reg.id_of("J2")) == 3
    assert t.count(reg.id_of("J2"), reg.id_of("J1")) == 3
    assert t.count(reg.id_of("J1"), reg.id_of("J6")) is None


def test_complete_graph_counts():
    n = 7
    reg = JournalRegistry(names(*range(n)))
    pairs = [(f"J{i}", f"J{j}") for i in range(n) for j in range(i + 1, n)]
    t = shared_neighbor_counts(reciprocal_graph(build_network(1, reg, mutual(pairs))))
    assert set(t.counts.tolist()) == {n - 2}
    assert triangle_total(t) == n * (n - 1) * (n - 2) // 6


def test_empty_graph():
    t = shared_neighbor_counts(reciprocal_graph(YearNetwork(1, JournalRegistry(["A"]))))
    assert len(t.keys) == 0
    assert triangle_total(t) == 0


def test_triangle_total_rejects_inconsistent_counts():
    t = TriadCountGraph(1, 3, [0], [1], [1])
    with pytest.raises(RuntimeError):
        triangle_total(t)


@given(
    st.integers(2, 25),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.integers(0, 2**32 - 1),
    st.integers(1, 5),
)
@settings(max_examples=60, deadline=None)
def test_matches_brute_force(n, p_arc, p_recip, seed, workers):
    net = random_dataset(GenSpec(n, p_arc, p_recip, seed), 1).years[0]
    g = reciprocal_graph(net)
    fast = shared_neighbor_counts(g, workers)
    assert fast == brute_triads(g)
    assert int(fast.counts.sum()) % 3 == 0


def test_worker_count_does_not_change_result():
    net = random_dataset(GenSpec(300, 0.2, 0.5, 11), 1).years[0]
    g = reciprocal_graph(net)
    base = shared_neighbor_counts(g, 1)
    for w in (2, 3, 8, 64):
        other = shared_neighbor_counts(g, w)
        assert np.array_equal(other.keys, base.keys)
        assert np.array_equal(other.counts, base.counts)


def test_neighbors_sorted():
    net = random_dataset(GenSpec(40, 0.3, 0.6, 2), 1).years[0]
    g = reciprocal_graph(net)
    for node in range(g.n_nodes):
        nb = g.neighbors(node)
        assert np.all(np.diff(nb) > 0)
        assert all(g.has_edge(node, int(x)) for x in nb)
    assert int(g.degree().sum()) == 2 * g.n_edges


def test_as_valued_round_trip(shared_example):
    t = shared_neighbor_counts(reciprocal_graph(shared_example))
    vg = t.as_valued()
    assert {(a, b): int(v) for a, b, v in vg.lines()} == t.as_dict()


def test_reciprocal_graph_type(shared_example):
    assert isinstance(reciprocal_graph(shared_example), ReciprocalGraph)
