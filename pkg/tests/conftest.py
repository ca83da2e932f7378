from __future__ import annotations

import pytest

from citetriads.model import JournalRegistry, TemporalDataset, ValuedGraph, YearNetwork

STAR_RECIPROCAL = [
    ("J1", "J2"), ("J1", "J3"), ("J1", "J4"), ("J1", "J5"),
    ("J2", "J3"), ("J2", "J4"), ("J2", "J5"), ("J2", "J6"),
]

# Constructed so that: {J1,J2} joined at 2 with
# lower outside lines; {J4,J8} a local maximum; {J7,J9,J10} spanned at 3 with
# an internal J7-J9 line of 1 and outside lines below 3.
ISLAND_LINES = [
    ("J1", "J2", 2), ("J1", "J3", 1), ("J2", "J5", 1), ("J3", "J4", 1),
    ("J4", "J8", 3), ("J8", "J6", 1), ("J6", "J7", 2), ("J7", "J10", 3),
    ("J9", "J10", 4), ("J7", "J9", 1), ("J9", "J5", 1),
]
ISLAND_NAMES = [f"J{i}" for i in range(1, 11)]


def build_network(year, registry, arcs):
    """``arcs``: iterable of (cited name, citing name, weight)."""
    net = YearNetwork(year, registry)
    for a, b, w in arcs:
        net.add_citation(registry.register(a), registry.register(b), w)
    return net


def build_dataset(years: dict[int, list[tuple[str, str, int]]], names=()) -> TemporalDataset:
    registry = JournalRegistry(names)
    for arcs in years.values():
        for a, b, _ in arcs:
            registry.register(a)
            registry.register(b)
    nets = [build_network(y, registry, arcs) for y, arcs in sorted(years.items())]
    return TemporalDataset(registry, nets)


def mutual(pairs, weight=1):
    out = []
    for a, b in pairs:
        out.append((a, b, weight))
        out.append((b, a, weight))
    return out


@pytest.fixture
def shared_example():
    arcs = mutual(STAR_RECIPROCAL) + [("J1", "J6", 1)]
    registry = JournalRegistry([f"J{i}" for i in range(1, 7)])
    return build_network(2011, registry, arcs)


@pytest.fixture
def island_example():
    idx = {n: i for i, n in enumerate(ISLAND_NAMES)}
    g = ValuedGraph.from_lines(10, [(idx[a], idx[b], v) for a, b, v in ISLAND_LINES])
    return g, ISLAND_NAMES


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    number, title = marker.args
    prev = _CRITERIA.get(number, (title, "PASS"))[1]
    status = "FAIL" if rep.failed or prev == "FAIL" else "PASS"
    _CRITERIA[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"[{status}] AC{number}: {title}")
