"""Brute-force reference implementations and a seeded random-instance generator.

Nothing here is used on the production path. Each oracle follows the plain
definition with no shortcuts, and refuses inputs above a hard size bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .islands import Island, IslandSet
from .model import JournalRegistry, TemporalDataset, ValuedGraph, YearNetwork
from .triads import ReciprocalGraph, TriadCountGraph

__all__ = [
    "OracleBoundError",
    "GenSpec",
    "brute_triads",
    "brute_islands",
    "brute_new_shared_neighbors",
    "brute_triad_events",
    "random_dataset",
    "random_valued_graph",
    "journal_names",
]


class OracleBoundError(ValueError):
    pass


def brute_triads(g: ReciprocalGraph, bound: int = 200) -> TriadCountGraph:
    """Per-edge triangle counts by enumerating every vertex triple."""
    if g.n_nodes > bound:
        raise OracleBoundError(f"brute_triads limited to {bound} nodes, got {g.n_nodes}")
    edges = set(zip(g.u.tolist(), g.v.tolist()))
    counts = {e: 0 for e in edges}
    for i, j, k in combinations(range(g.n_nodes), 3):
        if (i, j) in edges and (i, k) in edges and (j, k) in edges:
            counts[(i, j)] += 1
            counts[(i, k)] += 1
            counts[(j, k)] += 1
    ordered = sorted(counts)
    return TriadCountGraph(
        g.year,
        g.n_nodes,
        [e[0] for e in ordered],
        [e[1] for e in ordered],
        [counts[e] for e in ordered],
    )


def _connected(mask: int, adjacency: Sequence[int]) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        nxt = adjacency[low.bit_length() - 1] & mask & ~seen
        seen |= nxt
        frontier |= nxt
    return seen == mask


def brute_islands(
    g: ValuedGraph,
    smin: int = 2,
    smax: int | None = None,
    labels: Sequence[str] | None = None,
    bound: int = 12,
) -> IslandSet:
    """Check the island condition on every vertex subset within the size bounds.

    A subset S qualifies when, for some h, the lines inside S with value >= h
    connect all of S while every line with one endpoint in S is below h. The
    largest such h is the height. Only subsets not strictly contained in
    another qualifying subset are returned.
    """
    n = g.n_nodes
    if n > bound:
        raise OracleBoundError(f"brute_islands limited to {bound} nodes, got {n}")
    smax = n if smax is None else smax
    if smin < 2 or smin > smax:
        raise ValueError(f"invalid size bounds [{smin}, {smax}]")
    lines = list(g.lines())
    found: dict[int, float] = {}
    for mask in range(1, 1 << n):
        size = bin(mask).count("1")
        if not smin <= size <= smax:
            continue
        inside, outgoing = [], []
        for a, b, val in lines:
            ina, inb = (mask >> a) & 1, (mask >> b) & 1
            if ina and inb:
                inside.append((a, b, val))
            elif ina or inb:
                outgoing.append(val)
        boundary = max(outgoing, default=float("-inf"))
        height = None
        for h in sorted({val for _, _, val in inside}, reverse=True):
            adjacency = [0] * n
            for a, b, val in inside:
                if val >= h:
                    adjacency[a] |= 1 << b
                    adjacency[b] |= 1 << a
            if _connected(mask, adjacency):
                height = h
                break
        if height is not None and height > boundary:
            found[mask] = height
    maximal = [
        m for m in found if not any(o != m and (m & o) == m for o in found)
    ]

    def members(mask: int) -> list[int]:
        return [i for i in range(n) if (mask >> i) & 1]

    def sort_key(mask: int):
        ms = members(mask)
        first = min(labels[i] for i in ms) if labels is not None else ms[0]
        return (-found[mask], first)

    islands = []
    for i, mask in enumerate(sorted(maximal, key=sort_key)):
        h = found[mask]
        defining = tuple(
            (a, b, val) for a, b, val in lines if (mask >> a) & 1 and (mask >> b) & 1 and val >= h
        )
        islands.append(Island(i, tuple(members(mask)), h, defining))
    return IslandSet(n, tuple(islands))


def _arc_sets(dataset: TemporalDataset, min_weight: int = 1) -> dict[int, dict[tuple[int, int], int]]:
    return {
        net.year: {(a, b): w for a, b, w in net.arcs() if w >= min_weight}
        for net in dataset.years
    }


def _shared(arcs: dict[tuple[int, int], int], a: int, b: int, n: int) -> set[int]:
    def mutual(x: int, y: int) -> bool:
        return x != y and (x, y) in arcs and (y, x) in arcs

    return {c for c in range(n) if c not in (a, b) and mutual(a, c) and mutual(b, c)}


def brute_new_shared_neighbors(
    dataset: TemporalDataset, pair: tuple[int, int], year: int, min_weight: int = 1
) -> set[int]:
    arcs = _arc_sets(dataset, min_weight)
    labels = dataset.labels
    prev = labels[labels.index(year) - 1]
    n = len(dataset.registry)
    a, b = pair
    return _shared(arcs[year], a, b, n) - _shared(arcs[prev], a, b, n)


def brute_triad_events(
    dataset: TemporalDataset, pair: tuple[int, int], year: int, min_weight: int = 1
) -> list[tuple[int, dict[tuple[int, int], int], set[tuple[int, int]]]]:
    """(neighbor, {new arc: weight}, {persisted arcs}) per newly shared neighbor."""
    arcs = _arc_sets(dataset, min_weight)
    labels = dataset.labels
    prev = labels[labels.index(year) - 1]
    a, b = pair
    out = []
    for c in sorted(brute_new_shared_neighbors(dataset, pair, year, min_weight)):
        new, kept = {}, set()
        for arc in ((a, c), (c, a), (b, c), (c, b)):
            if arc in arcs[prev]:
                kept.add(arc)
            else:
                new[arc] = arcs[year][arc]
        out.append((c, new, kept))
    return out


@dataclass(frozen=True)
class GenSpec:
    """Parameters of the independent random digraph generator.

    Each unordered pair receives an arc with probability ``p_arc`` in a
    random direction; the reverse arc is then added with probability
    ``p_recip``.
    """

    n: int
    p_arc: float
    p_recip: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("n must be non-negative")
        for name in ("p_arc", "p_recip"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


def journal_names(n: int) -> list[str]:
    """Zero-padded labels whose lexicographic order equals numeric order."""
    width = len(str(max(n - 1, 0)))
    return [f"J{i:0{width}d}" for i in range(n)]


def _random_year(
    spec: GenSpec, year: int, registry: JournalRegistry, rng: np.random.Generator
) -> YearNetwork:
    n = spec.n
    rows, cols = [], []
    block = max(1, 2_000_000 // max(n, 1))
    for start in range(0, n, block):
        stop = min(n, start + block)
        draw = rng.random((stop - start, n))
        hit = draw < spec.p_arc
        hit &= np.arange(n)[None, :] > np.arange(start, stop)[:, None]
        r, c = np.nonzero(hit)
        rows.append(r + start)
        cols.append(c)
    i = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    j = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    flip = rng.random(len(i)) < 0.5
    src = np.where(flip, j, i)
    dst = np.where(flip, i, j)
    recip = rng.random(len(i)) < spec.p_recip
    cited = np.concatenate([src, dst[recip]])
    citing = np.concatenate([dst, src[recip]])
    weights = rng.integers(1, 11, size=len(cited))
    return YearNetwork.from_arrays(year, registry, cited, citing, weights)


def random_dataset(spec: GenSpec, years: int, first_year: int = 1) -> TemporalDataset:
    """Independent yearly digraphs, deterministic in ``spec.seed``."""
    if years < 1:
        raise ValueError("years must be >= 1")
    rng = np.random.default_rng(spec.seed)
    registry = JournalRegistry(journal_names(spec.n))
    nets = [_random_year(spec, first_year + k, registry, rng) for k in range(years)]
    return TemporalDataset(registry, nets)


def random_valued_graph(
    rng: np.random.Generator,
    n: int,
    p_line: float,
    values: Sequence[float],
) -> ValuedGraph:
    """Random simple graph with line values drawn from ``values`` (ties likely)."""
    lines = [
        (a, b, float(rng.choice(values)))
        for a, b in combinations(range(n), 2)
        if rng.random() < p_line
    ]
    return ValuedGraph.from_lines(n, lines)
