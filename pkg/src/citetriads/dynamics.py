"""Change network over journal pairs that stay reciprocal in every year."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Sequence

import numpy as np

from .model import TemporalDataset, ValuedGraph, unpack_keys
from .triads import TriadCountGraph, reciprocal_graph, shared_neighbor_counts

__all__ = [
    "Trend",
    "ChangeRecord",
    "ChangeNetwork",
    "classify",
    "persistent_pairs",
    "change_network",
    "change_network_from_counts",
    "monotonic_filter",
]


class Trend(str, Enum):
    UP = "monotonic-up"
    DOWN = "monotonic-down"
    OTHER = "other"


def classify(counts: Sequence[int], strict: bool = True) -> tuple[float, Trend]:
    """Average yearly change and trend class of one pair's count series.

    Strict mode requires a strict change in every interval. Weak mode accepts
    ties as long as the series moves overall in one direction.
    """
    if len(counts) < 2:
        raise ValueError("need at least two observations")
    steps = [b - a for a, b in zip(counts, counts[1:])]
    avg = (counts[-1] - counts[0]) / (len(counts) - 1)
    if strict:
        up = all(s > 0 for s in steps)
        down = all(s < 0 for s in steps)
    else:
        up = all(s >= 0 for s in steps) and counts[-1] > counts[0]
        down = all(s <= 0 for s in steps) and counts[-1] < counts[0]
    return avg, Trend.UP if up else Trend.DOWN if down else Trend.OTHER


@dataclass(frozen=True)
class ChangeRecord:
    pair: tuple[int, int]
    counts: tuple[int, ...]
    avg_change: float
    trend: Trend


_TREND_CODES = (Trend.OTHER, Trend.UP, Trend.DOWN)


class ChangeNetwork:
    """Per-pair count series, average yearly change and trend, stored columnwise.

    ``trend_code`` holds 0 (other), 1 (monotonic-up) or 2 (monotonic-down).
    """

    def __init__(self, years, n_nodes, u, v, counts, trend_code) -> None:
        self.years = tuple(int(y) for y in years)
        self.n_nodes = int(n_nodes)
        self.u = np.asarray(u, dtype=np.int64)
        self.v = np.asarray(v, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64).reshape(len(self.u), len(self.years))
        self.trend_code = np.asarray(trend_code, dtype=np.int8)
        span = len(self.years) - 1
        self.avg_change = (self.counts[:, -1] - self.counts[:, 0]) / span if span else np.zeros(
            len(self.u)
        )

    def records(self) -> list[ChangeRecord]:
        return [
            ChangeRecord((a, b), tuple(c), avg, _TREND_CODES[t])
            for a, b, c, avg, t in zip(
                self.u.tolist(),
                self.v.tolist(),
                self.counts.tolist(),
                self.avg_change.tolist(),
                self.trend_code.tolist(),
            )
        ]

    def subset(self, mask: np.ndarray) -> ChangeNetwork:
        return ChangeNetwork(
            self.years, self.n_nodes, self.u[mask], self.v[mask], self.counts[mask],
            self.trend_code[mask],
        )

    def as_valued(self) -> ValuedGraph:
        """Lines valued by average yearly change."""
        return ValuedGraph(self.n_nodes, self.u, self.v, self.avg_change)

    def __len__(self) -> int:
        return len(self.u)

    def __repr__(self) -> str:
        return f"ChangeNetwork(years={self.years}, pairs={len(self)})"


def _trend_codes(counts: np.ndarray, strict: bool) -> np.ndarray:
    steps = np.diff(counts, axis=1)
    if strict:
        up = np.all(steps > 0, axis=1)
        down = np.all(steps < 0, axis=1)
    else:
        up = np.all(steps >= 0, axis=1) & (counts[:, -1] > counts[:, 0])
        down = np.all(steps <= 0, axis=1) & (counts[:, -1] < counts[:, 0])
    codes = np.zeros(len(counts), dtype=np.int8)
    codes[up] = 1
    codes[down] = 2
    return codes


def persistent_pairs(dataset: TemporalDataset) -> set[tuple[int, int]]:
    """Pairs {i, j} (as i < j tuples) reciprocal in every year."""
    if len(dataset) < 2:
        raise ValueError(f"persistent pairs need at least 2 years, got {len(dataset)}")
    keys = _intersect([reciprocal_graph(net).edge_keys for net in dataset.years])
    u, v = unpack_keys(keys)
    return set(zip(u.tolist(), v.tolist()))


def _intersect(key_sets: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(lambda a, b: np.intersect1d(a, b, assume_unique=True), key_sets)


def change_network_from_counts(
    graphs: Sequence[TriadCountGraph], strict: bool = True
) -> ChangeNetwork:
    """Build the change network from per-year counts on each full reciprocal graph."""
    if len(graphs) < 3:
        raise ValueError(
            f"the change network needs at least 3 years to judge monotonicity, got {len(graphs)}"
        )
    years = [g.year for g in graphs]
    if any(b <= a for a, b in zip(years, years[1:])):
        raise ValueError(f"year labels must be strictly ascending, got {years}")
    n_nodes = graphs[0].n_nodes
    if any(g.n_nodes != n_nodes for g in graphs):
        raise ValueError("yearly graphs disagree on node count")
    keys = _intersect([g.keys for g in graphs])
    counts = np.empty((len(keys), len(graphs)), dtype=np.int64)
    for col, g in enumerate(graphs):
        counts[:, col] = g.counts[np.searchsorted(g.keys, keys)]
    u, v = unpack_keys(keys)
    return ChangeNetwork(years, n_nodes, u, v, counts, _trend_codes(counts, strict))


def change_network(
    dataset: TemporalDataset, strict: bool = True, workers: int | None = None
) -> ChangeNetwork:
    if len(dataset) < 3:
        raise ValueError(
            f"the change network needs at least 3 years to judge monotonicity, got {len(dataset)}"
        )
    graphs = [shared_neighbor_counts(reciprocal_graph(net), workers) for net in dataset.years]
    return change_network_from_counts(graphs, strict)


def monotonic_filter(cn: ChangeNetwork) -> ChangeNetwork:
    return cn.subset(cn.trend_code != 0)
