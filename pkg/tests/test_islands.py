import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citetriads.dynamics import ChangeNetwork
from citetriads.islands import (
    core_linkage,
    filter_positive,
    island_lines,
    line_islands,
    linkage_to_dot,
)
from citetriads.model import JournalRegistry, ValuedGraph
from citetriads.oracle import brute_islands, random_valued_graph


def _summary(s, labels):
    return [
        (sorted(labels[m] for m in isl.members), isl.height,
         sorted((labels[a], labels[b]) for a, b, _ in isl.defining_lines))
        for isl in s
    ]


def test_island_example_bounded(island_example):
    g, names = island_example
    s = line_islands(g, smax=3, labels=names)
    assert _summary(s, names) == [
        (["J10", "J7", "J9"], 3.0, [("J7", "J10"), ("J9", "J10")]),
        (["J4", "J8"], 3.0, [("J4", "J8")]),
        (["J1", "J2"], 2.0, [("J1", "J2")]),
    ]


def test_island_example_unbounded_is_one_component(island_example):
    g, names = island_example
    s = line_islands(g, labels=names)
    assert len(s) == 1
    assert len(s.islands[0].members) == 10
    assert s.islands[0].height == 1.0


def test_two_node_island():
    g = ValuedGraph.from_lines(3, [(0, 1, 5.0), (1, 2, 1.0)])
    s = line_islands(g, smax=2)
    assert [(isl.members, isl.height) for isl in s] == [((0, 1), 5.0)]
    assert s.island_of(2) is None
    assert s.assignment().tolist() == [0, 0, -1]


def test_tied_lines_form_single_level():
    # a triangle with equal values joins in one step; no pair inside it is an island
    g = ValuedGraph.from_lines(4, [(0, 1, 2.0), (1, 2, 2.0), (0, 2, 2.0), (2, 3, 1.0)])
    s = line_islands(g, smax=3)
    assert [isl.members for isl in s] == [(0, 1, 2)]
    assert brute_islands(g, smax=3).memberships() == s.memberships()


def test_isolated_nodes_have_no_island():
    g = ValuedGraph.from_lines(5, [(0, 1, 1.0)])
    s = line_islands(g)
    assert s.memberships() == [frozenset({0, 1})]


def test_negative_heights_and_filter():
    g = ValuedGraph.from_lines(5, [(0, 1, 2.0), (2, 3, -1.0), (3, 4, -3.0)])
    s = line_islands(g, smax=2)
    assert [isl.height for isl in s] == [2.0, -1.0]
    pos = filter_positive(s)
    assert [(isl.id, isl.members) for isl in pos] == [(0, (0, 1))]


@pytest.mark.parametrize("smin,smax", [(1, 3), (4, 3)])
def test_bad_bounds(island_example, smin, smax):
    with pytest.raises(ValueError):
        line_islands(island_example[0], smin=smin, smax=smax)


def test_smin_excludes_small(island_example):
    g, names = island_example
    s = line_islands(g, smin=3, smax=3, labels=names)
    assert [sorted(names[m] for m in isl.members) for isl in s] == [["J10", "J7", "J9"]]


def test_island_lines_matches_defining(island_example):
    g, names = island_example
    s = line_islands(g, smax=3, labels=names)
    expected = {line for isl in s for line in isl.defining_lines}
    assert island_lines(g, s) == expected


@st.composite
def valued_graphs(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.floats(0.1, 1.0))
    values = draw(st.lists(st.integers(-3, 3), min_size=1, max_size=4, unique=True))
    return random_valued_graph(np.random.default_rng(seed), n, p, [float(v) for v in values])


@given(valued_graphs(), st.data())
@settings(max_examples=80, deadline=None)
def test_matches_brute_force(g, data):
    smax = data.draw(st.integers(2, max(2, g.n_nodes)))
    smin = data.draw(st.integers(2, smax))
    fast = line_islands(g, smin, smax)
    slow = brute_islands(g, smin, smax)
    assert fast.islands == slow.islands


@given(valued_graphs())
@settings(max_examples=60, deadline=None)
def test_islands_are_disjoint_and_cohesive(g):
    s = line_islands(g, smax=max(2, g.n_nodes // 2))
    seen = set()
    for isl in s:
        members = set(isl.members)
        assert not seen & members
        seen |= members
        outside = [v for a, b, v in g.lines() if (a in members) != (b in members)]
        assert all(v < isl.height for v in outside)
        assert min(v for _, _, v in isl.defining_lines) == isl.height


def test_core_linkage():
    # islands {0,1} and {2,3}; node 4 touches both; node 5 touches only one
    cn = ChangeNetwork(
        (1, 2, 3), 6,
        [0, 2, 1, 0, 3, 3],
        [1, 3, 2, 4, 4, 5],
        [[0, 2, 4], [0, 2, 4], [2, 1, 0], [0, 0, 1], [2, 1, 1], [2, 1, 1]],
        [1, 1, 2, 0, 0, 0],
    )
    s = line_islands(cn.as_valued(), smax=2)
    link = core_linkage(cn, s)
    assert link.nodes == {0: 0, 1: 0, 2: 1, 3: 1, 4: None}
    kinds = {(a, b): kind for a, b, _, kind in link.lines}
    assert kinds == {(0, 1): "core", (2, 3): "core", (1, 2): "inter", (0, 4): "bridge",
                     (3, 4): "bridge"}
    assert 5 not in link.nodes
    dot = linkage_to_dot(link, JournalRegistry("ABCDEF"))
    assert dot.startswith("graph core_linkage {")
    assert '"B" -- "C" [style=dashed, label="-1"]' in dot
    assert "penwidth=2" in dot
    assert "Helvetica-Oblique" in dot
