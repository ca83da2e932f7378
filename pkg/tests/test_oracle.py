import numpy as np
import pytest

from citetriads.model import ValuedGraph
from citetriads.oracle import (
    GenSpec,
    OracleBoundError,
    brute_islands,
    brute_triads,
    journal_names,
    random_dataset,
)
from citetriads.triads import reciprocal_graph


def test_generator_is_deterministic():
    a = random_dataset(GenSpec(50, 0.2, 0.5, 9), 3)
    b = random_dataset(GenSpec(50, 0.2, 0.5, 9), 3)
    c = random_dataset(GenSpec(50, 0.2, 0.5, 10), 3)
    assert [n == m for n, m in zip(a.years, b.years)] == [True] * 3
    assert a.years[0] != c.years[0]


def test_generator_properties():
    ds = random_dataset(GenSpec(200, 0.1, 0.3, 1), 2, first_year=2011)
    assert ds.labels == [2011, 2012]
    for net in ds.years:
        assert not net.loop_mask().any()
        w = net.weights
        assert w.min() >= 1 and w.max() <= 10


def test_generator_density_close_to_target():
    n, p_arc, p_recip = 400, 0.05, 0.4
    net = random_dataset(GenSpec(n, p_arc, p_recip, 2), 1).years[0]
    expected = n * (n - 1) / 2 * p_arc * (1 + p_recip)
    assert abs(net.n_arcs - expected) < 5 * np.sqrt(expected)
    g = reciprocal_graph(net)
    expected_recip = n * (n - 1) / 2 * p_arc * p_recip
    assert abs(g.n_edges - expected_recip) < 5 * np.sqrt(expected_recip)


@pytest.mark.parametrize("kwargs", [
    dict(n=-1, p_arc=0.1, p_recip=0.1, seed=0),
    dict(n=5, p_arc=1.5, p_recip=0.1, seed=0),
    dict(n=5, p_arc=0.1, p_recip=-0.1, seed=0),
])
def test_genspec_validation(kwargs):
    with pytest.raises(ValueError):
        GenSpec(**kwargs)


def test_journal_names_sort_numerically():
    names = journal_names(120)
    assert names == sorted(names)
    assert names[7] == "J007"


def test_bounds_enforced():
    g = reciprocal_graph(random_dataset(GenSpec(201, 0.0, 0.0, 0), 1).years[0])
    with pytest.raises(OracleBoundError):
        brute_triads(g)
    with pytest.raises(OracleBoundError):
        brute_islands(ValuedGraph(13, [], [], []))


def test_brute_islands_path():
    # path 0-1-2-3 with values 3, 1, 3: two pair islands at 3
    g = ValuedGraph.from_lines(4, [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 3.0)])
    s = brute_islands(g, smax=2)
    assert [(isl.members, isl.height) for isl in s] == [((0, 1), 3.0), ((2, 3), 3.0)]
