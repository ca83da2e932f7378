"""Descriptive statistics of the yearly networks and of the change network."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .dynamics import ChangeNetwork, ChangeRecord, Trend
from .model import JournalRegistry, YearNetwork, pack_keys, unpack_keys

__all__ = [
    "YearStats",
    "OverlapCounts",
    "ChangeTaxonomy",
    "year_stats",
    "link_overlap",
    "change_summary",
]


@dataclass(frozen=True)
class YearStats:
    """Size and density of one yearly network.

    Density and the degree averages are exact fractions over the full
    registry (isolates included).
    """

    year: int
    n_journals: int
    n_active: int
    n_links: int
    density_loops: Fraction
    avg_reciprocal_degree: Fraction
    avg_unidirectional_degree: Fraction
    n_isolates: int


def year_stats(net: YearNetwork, registry: JournalRegistry | None = None) -> YearStats:
    registry = net.registry if registry is None else registry
    n = len(registry)
    keys = net.keys
    src, dst = unpack_keys(keys)
    degree = np.bincount(src, minlength=n) + np.bincount(dst, minlength=n)
    n_isolates = int(np.count_nonzero(degree == 0))

    off = src != dst
    src, dst, keys = src[off], dst[off], keys[off]
    reverse = pack_keys(dst, src)
    pos = np.searchsorted(keys, reverse)
    if len(keys):
        pos[pos == len(keys)] = 0
        mutual = keys[pos] == reverse
    else:
        mutual = np.zeros(0, dtype=bool)
    # each reciprocal pair is seen once from each side, each one-way pair once
    recip_endpoints = int(np.count_nonzero(mutual))
    uni_endpoints = 2 * int(np.count_nonzero(~mutual))

    def ratio(num: int, den: int) -> Fraction:
        return Fraction(num, den) if den else Fraction(0)

    return YearStats(
        year=net.year,
        n_journals=n,
        n_active=n - n_isolates,
        n_links=len(net.keys),
        density_loops=ratio(len(net.keys), n * n),
        avg_reciprocal_degree=ratio(recip_endpoints, n),
        avg_unidirectional_degree=ratio(uni_endpoints, n),
        n_isolates=n_isolates,
    )


@dataclass(frozen=True)
class OverlapCounts:
    """Venn regions of arc presence across three years (loops excluded)."""

    only_1: int
    only_2: int
    only_3: int
    only_12: int
    only_13: int
    only_23: int
    all_three: int
    total: int

    REGIONS = ("only_1", "only_2", "only_3", "only_12", "only_13", "only_23", "all_three")

    def regions(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in self.REGIONS}


# presence bitmask (bit 0 = first year) -> region name
_REGION_OF_MASK = {
    0b001: "only_1",
    0b010: "only_2",
    0b100: "only_3",
    0b011: "only_12",
    0b101: "only_13",
    0b110: "only_23",
    0b111: "all_three",
}


def link_overlap(d1: YearNetwork, d2: YearNetwork, d3: YearNetwork) -> OverlapCounts:
    key_sets = []
    for net in (d1, d2, d3):
        keys = net.keys
        key_sets.append(keys[~net.loop_mask()])
    union = np.unique(np.concatenate(key_sets))
    mask = np.zeros(len(union), dtype=np.int64)
    for bit, keys in enumerate(key_sets):
        mask |= np.isin(union, keys, assume_unique=True).astype(np.int64) << bit
    tally = np.bincount(mask, minlength=8)
    counts = {name: int(tally[m]) for m, name in _REGION_OF_MASK.items()}
    return OverlapCounts(total=len(union), **counts)


@dataclass(frozen=True)
class ChangeTaxonomy:
    """Counts by sign of average yearly change, with the monotonic subsets."""

    net_increase: int
    monotonic_up: int
    net_neutral: int
    net_decrease: int
    monotonic_down: int
    total: int

    def rows(self) -> list[tuple[str, int]]:
        return [
            ("net_increase", self.net_increase),
            ("monotonic_up", self.monotonic_up),
            ("net_neutral", self.net_neutral),
            ("net_decrease", self.net_decrease),
            ("monotonic_down", self.monotonic_down),
            ("total", self.total),
        ]


def change_summary(records: ChangeNetwork | Iterable[ChangeRecord]) -> ChangeTaxonomy:
    if isinstance(records, ChangeNetwork):
        avg, codes = records.avg_change, records.trend_code
        return ChangeTaxonomy(
            net_increase=int(np.count_nonzero(avg > 0)),
            monotonic_up=int(np.count_nonzero(codes == 1)),
            net_neutral=int(np.count_nonzero(avg == 0)),
            net_decrease=int(np.count_nonzero(avg < 0)),
            monotonic_down=int(np.count_nonzero(codes == 2)),
            total=len(records),
        )
    inc = up = neutral = dec = down = total = 0
    for rec in records:
        total += 1
        if rec.avg_change > 0:
            inc += 1
        elif rec.avg_change < 0:
            dec += 1
        else:
            neutral += 1
        up += rec.trend is Trend.UP
        down += rec.trend is Trend.DOWN
    return ChangeTaxonomy(inc, up, neutral, dec, down, total)
