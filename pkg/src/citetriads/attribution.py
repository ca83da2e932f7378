"""Which new citation arcs closed new triads around a journal pair.

A journal C becomes a newly shared neighbor of the pair {A, B} in year t
when it is reciprocally linked to both in t but not in the preceding year.
The four arcs A->C, C->A, B->C, C->B all exist in t; those absent in the
preceding year are the new arcs that created the triad.

Arcs are stored cited -> citing, so a new arc A->C means that C started
citing A.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .model import JournalRegistry, TemporalDataset, YearNetwork
from .triads import ReciprocalGraph, reciprocal_graph

__all__ = [
    "AttributionError",
    "TriadEvent",
    "TriadAttributor",
    "new_shared_neighbors",
    "triad_events",
    "CoreFlow",
    "AttributionSummary",
    "attribution_summary",
    "arc_reading",
    "events_to_dot",
]

Arc = tuple[int, int]


class AttributionError(ValueError):
    pass


@dataclass(frozen=True)
class TriadEvent:
    """One newly shared neighbor of ``pair`` in ``year``.

    ``new_arcs`` holds ``(cited, citing, weight)`` with the current-year
    weight; ``persisted_arcs`` holds the arcs present in both years.
    """

    pair: tuple[int, int]
    neighbor: int
    year: int
    new_arcs: tuple[tuple[int, int, int], ...]
    persisted_arcs: tuple[Arc, ...]
    annotation: str = ""

    def new_arc_set(self) -> set[Arc]:
        return {(a, b) for a, b, _ in self.new_arcs}


class TriadAttributor:
    """Caches per-year reciprocal graphs so many pairs can be queried cheaply."""

    def __init__(self, dataset: TemporalDataset, min_weight: int = 1) -> None:
        if min_weight < 1:
            raise ValueError("min_weight must be >= 1")
        self.dataset = dataset
        self.min_weight = min_weight
        self._graphs: dict[int, ReciprocalGraph] = {}

    def _graph(self, net: YearNetwork) -> ReciprocalGraph:
        g = self._graphs.get(net.year)
        if g is None:
            g = self._graphs[net.year] = reciprocal_graph(net, self.min_weight)
        return g

    def _years(self, year: int) -> tuple[YearNetwork, YearNetwork]:
        try:
            return self.dataset.previous(year), self.dataset.year(year)
        except KeyError as exc:
            raise AttributionError(exc.args[0]) from None

    def _exists(self, net: YearNetwork, cited: int, citing: int) -> bool:
        return net.arc_weight(cited, citing) >= self.min_weight

    def new_shared_neighbors(self, pair: tuple[int, int], year: int) -> set[int]:
        a, b = pair
        prev, cur = self._years(year)
        g_cur, g_prev = self._graph(cur), self._graph(prev)
        if a == b or not g_cur.has_edge(a, b):
            names = self.dataset.registry.names
            raise AttributionError(
                f"{names[a]} and {names[b]} are not reciprocally linked in {year}"
            )
        now = np.intersect1d(g_cur.neighbors(a), g_cur.neighbors(b), assume_unique=True)
        before = np.intersect1d(g_prev.neighbors(a), g_prev.neighbors(b), assume_unique=True)
        return set(np.setdiff1d(now, before, assume_unique=True).tolist())

    def triad_events(self, pair: tuple[int, int], year: int) -> list[TriadEvent]:
        a, b = pair
        prev, cur = self._years(year)
        events = []
        for c in sorted(self.new_shared_neighbors(pair, year)):
            new, kept = [], []
            for cited, citing in ((a, c), (c, a), (b, c), (c, b)):
                if self._exists(prev, cited, citing):
                    kept.append((cited, citing))
                else:
                    new.append((cited, citing, cur.arc_weight(cited, citing)))
            events.append(TriadEvent((a, b), c, year, tuple(new), tuple(kept)))
        return events

    def all_events(self, pair: tuple[int, int]) -> list[TriadEvent]:
        """Events for every year after the first in which the pair is reciprocal."""
        out = []
        for net in self.dataset.years[1:]:
            if self._graph(net).has_edge(*pair):
                out.extend(self.triad_events(pair, net.year))
        return out


def new_shared_neighbors(
    dataset: TemporalDataset, pair: tuple[int, int], year: int, min_weight: int = 1
) -> set[int]:
    return TriadAttributor(dataset, min_weight).new_shared_neighbors(pair, year)


def triad_events(
    dataset: TemporalDataset, pair: tuple[int, int], year: int, min_weight: int = 1
) -> list[TriadEvent]:
    return TriadAttributor(dataset, min_weight).triad_events(pair, year)


@dataclass
class CoreFlow:
    """Event counts for one core journal.

    ``cited``: events with a new arc core -> neighbor (the neighbor started
    citing the core). ``citing``: events with a new arc neighbor -> core.
    ``involved``: events with any new arc touching the core.
    """

    cited: int = 0
    citing: int = 0
    involved: int = 0

    @property
    def role(self) -> str:
        if self.cited > self.citing:
            return "attractor"
        if self.citing > self.cited:
            return "citer"
        return "mixed" if self.cited else "uninvolved"


GROUPS = ("a_only", "b_only", "both")


@dataclass
class AttributionSummary:
    pair: tuple[int, int] | None
    years: tuple[int, ...] = ()
    flows: dict[tuple[int, int], CoreFlow] = field(default_factory=dict)
    groups: dict[int, Counter] = field(default_factory=dict)
    total_events: int = 0
    dominance: float = 2.0

    def flow(self, core: int, year: int | None = None) -> CoreFlow:
        """Flow for ``core`` in one year, or summed over all years."""
        if year is not None:
            return self.flows.get((core, year), CoreFlow())
        total = CoreFlow()
        for (c, _), f in self.flows.items():
            if c == core:
                total.cited += f.cited
                total.citing += f.citing
                total.involved += f.involved
        return total

    def group_totals(self) -> Counter:
        total = Counter({g: 0 for g in GROUPS})
        for counts in self.groups.values():
            total.update(counts)
        return total

    @property
    def concentration(self) -> str:
        """``balanced``, ``focused:<core id>``, or ``none`` when there are no events.

        A pair is focused on one core when that core is involved in at least
        ``dominance`` times as many events as the other.
        """
        if self.pair is None or self.total_events == 0:
            return "none"
        a, b = self.pair
        ia, ib = self.flow(a).involved, self.flow(b).involved
        if ia >= self.dominance * ib and ia > ib:
            return f"focused:{a}"
        if ib >= self.dominance * ia and ib > ia:
            return f"focused:{b}"
        return "balanced"


def attribution_summary(
    events: Iterable[TriadEvent],
    pair: tuple[int, int] | None = None,
    dominance: float = 2.0,
) -> AttributionSummary:
    events = list(events)
    if pair is None and events:
        pair = events[0].pair
    summary = AttributionSummary(pair, dominance=dominance)
    years = set()
    for ev in events:
        if ev.pair != pair:
            raise AttributionError(f"event for pair {ev.pair} in summary of {pair}")
        years.add(ev.year)
        a, b = ev.pair
        c = ev.neighbor
        arcs = ev.new_arc_set()
        touched = []
        for core in (a, b):
            flow = summary.flows.setdefault((core, ev.year), CoreFlow())
            out_arc = (core, c) in arcs
            in_arc = (c, core) in arcs
            flow.cited += out_arc
            flow.citing += in_arc
            flow.involved += out_arc or in_arc
            touched.append(out_arc or in_arc)
        group = "both" if all(touched) else "a_only" if touched[0] else "b_only"
        summary.groups.setdefault(ev.year, Counter({g: 0 for g in GROUPS}))[group] += 1
        summary.total_events += 1
    summary.years = tuple(sorted(years))
    return summary


def arc_reading(cited: int, citing: int, names: Sequence[str]) -> str:
    return f"{names[citing]} cites {names[cited]}"


_YEAR_COLORS = ("orange", "grey40", "steelblue", "forestgreen", "purple", "firebrick")


def events_to_dot(events: Sequence[TriadEvent], registry: JournalRegistry) -> str:
    """Directed DOT graph of the new arcs, colored by year and labelled with weights."""
    names = registry.names
    years = sorted({ev.year for ev in events})
    color = {y: _YEAR_COLORS[i % len(_YEAR_COLORS)] for i, y in enumerate(years)}
    cores = sorted({c for ev in events for c in ev.pair}, key=names.__getitem__)
    neighbors = sorted({ev.neighbor for ev in events} - set(cores), key=names.__getitem__)

    def q(node: int) -> str:
        return '"' + names[node].replace('"', '\\"') + '"'

    out = ["digraph new_triads {", "  rankdir=LR;"]
    out.extend(f"  {q(c)} [shape=box, style=filled, fillcolor=lightgrey];" for c in cores)
    out.extend(f"  {q(n)} [shape=ellipse];" for n in neighbors)
    rows = []
    for ev in events:
        for cited, citing, w in ev.new_arcs:
            rows.append(
                (names[cited], names[citing], ev.year,
                 f"  {q(cited)} -> {q(citing)} [color={color[ev.year]}, "
                 f"label=\"{w}\", year={ev.year}];")
            )
    out.extend(r[3] for r in sorted(set(rows)))
    if years:
        legend = ", ".join(f"{y}={color[y]}" for y in years)
        out.append(f'  label="new arcs by year: {legend}";')
    out.append("}")
    return "\n".join(out) + "\n"
