"""Reciprocal-graph reduction and per-edge shared-neighbor (3-ring) counts."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

from .model import ValuedGraph, YearNetwork, pack_keys, unpack_keys

__all__ = [
    "ReciprocalGraph",
    "TriadCountGraph",
    "reciprocal_graph",
    "shared_neighbor_counts",
    "triangle_total",
    "default_workers",
]


def default_workers() -> int:
    return os.cpu_count() or 1


class ReciprocalGraph:
    """Undirected, loop-free graph of reciprocated citation pairs.

    Stored as CSR with ascending neighbor lists, plus the edge list with
    ``u < v`` sorted by (u, v).
    """

    def __init__(self, year: int, n_nodes: int, u: np.ndarray, v: np.ndarray) -> None:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        keys = np.unique(pack_keys(np.minimum(u, v), np.maximum(u, v)))
        lo, hi = unpack_keys(keys)
        if np.any(lo == hi):
            raise ValueError("reciprocal graph cannot contain loops")
        self.year = int(year)
        self.n_nodes = int(n_nodes)
        self.edge_keys = keys
        self.u = lo
        self.v = hi
        both = np.unique(np.concatenate([keys, pack_keys(hi, lo)]))
        src, dst = unpack_keys(both)
        self.indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n_nodes), out=self.indptr[1:])
        self.indices = dst

    def neighbors(self, node: int) -> np.ndarray:
        return self.indices[self.indptr[node] : self.indptr[node + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, a: int, b: int) -> bool:
        nb = self.neighbors(a)
        pos = int(np.searchsorted(nb, b))
        return pos < len(nb) and nb[pos] == b

    @property
    def n_edges(self) -> int:
        return len(self.edge_keys)

    def __repr__(self) -> str:
        return f"ReciprocalGraph(year={self.year}, nodes={self.n_nodes}, edges={self.n_edges})"


class TriadCountGraph:
    """Every reciprocal edge with the number of its shared neighbors.

    Edges without shared neighbors are kept with count 0.
    """

    def __init__(self, year: int, n_nodes: int, u, v, counts) -> None:
        self.year = int(year)
        self.n_nodes = int(n_nodes)
        self.u = np.asarray(u, dtype=np.int64)
        self.v = np.asarray(v, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.keys = pack_keys(self.u, self.v)
        if len(self.keys) > 1 and np.any(np.diff(self.keys) <= 0):
            raise ValueError("triad-count edges must be unique and sorted with u < v")

    def count(self, a: int, b: int) -> int | None:
        """Shared-neighbor count of edge {a, b}, or None if it is not an edge."""
        key = (min(a, b) << 32) | max(a, b)
        pos = int(np.searchsorted(self.keys, key))
        if pos < len(self.keys) and self.keys[pos] == key:
            return int(self.counts[pos])
        return None

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(zip(zip(self.u.tolist(), self.v.tolist()), self.counts.tolist()))

    def as_valued(self) -> ValuedGraph:
        return ValuedGraph(self.n_nodes, self.u, self.v, self.counts)

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TriadCountGraph):
            return NotImplemented
        return (
            self.year == other.year
            and self.n_nodes == other.n_nodes
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.counts, other.counts)
        )

    def __repr__(self) -> str:
        return f"TriadCountGraph(year={self.year}, edges={len(self)})"


def reciprocal_graph(net: YearNetwork, min_weight: int = 1) -> ReciprocalGraph:
    """Keep pairs {i, j}, i != j, with both arcs i->j and j->i of weight >= ``min_weight``.

    Citation weights are dropped.
    """
    keys = net.keys[net.weights >= min_weight]
    src, dst = unpack_keys(keys)
    keep = src < dst
    forward = keys[keep]
    backward = pack_keys(dst[keep], src[keep])
    pos = np.searchsorted(keys, backward)
    pos[pos == len(keys)] = 0
    mutual = keys[pos] == backward if len(keys) else np.zeros(0, dtype=bool)
    u, v = unpack_keys(forward[mutual])
    return ReciprocalGraph(net.year, len(net.registry), u, v)


@njit(nogil=True, cache=True)
def _count_edges(indptr, indices, eu, ev, out, start, stop):  # pragma: no cover - jitted
    for e in range(start, stop):
        a = eu[e]
        b = ev[e]
        da = indptr[a + 1] - indptr[a]
        db = indptr[b + 1] - indptr[b]
        # scan the lower-degree endpoint; ties by id
        if da > db or (da == db and a > b):
            a, b = b, a
        lo = indptr[b]
        hi = indptr[b + 1]
        c = 0
        for k in range(indptr[a], indptr[a + 1]):
            x = indices[k]
            left = lo
            right = hi
            while left < right:
                mid = (left + right) >> 1
                if indices[mid] < x:
                    left = mid + 1
                else:
                    right = mid
            if left == hi:
                break
            if indices[left] == x:
                c += 1
            lo = left
        out[e] = c


def shared_neighbor_counts(g: ReciprocalGraph, workers: int | None = None) -> TriadCountGraph:
    """Count |adj(i) & adj(j)| for every edge {i, j} of ``g``.

    Edges are split into ``workers`` contiguous blocks counted on separate
    threads; each edge writes only its own slot, so the result does not depend
    on the worker count.
    """
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    m = g.n_edges
    out = np.zeros(m, dtype=np.int64)
    if m:
        bounds = np.linspace(0, m, min(workers, m) + 1).astype(np.int64)
        blocks = list(zip(bounds[:-1].tolist(), bounds[1:].tolist()))
        if len(blocks) == 1:
            _count_edges(g.indptr, g.indices, g.u, g.v, out, 0, m)
        else:
            with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
                futures = [
                    pool.submit(_count_edges, g.indptr, g.indices, g.u, g.v, out, lo, hi)
                    for lo, hi in blocks
                ]
                for fut in futures:
                    fut.result()
    return TriadCountGraph(g.year, g.n_nodes, g.u, g.v, out)


def triangle_total(t: TriadCountGraph) -> int:
    total = int(t.counts.sum())
    if total % 3:
        raise RuntimeError(f"shared-neighbor counts sum to {total}, not a multiple of 3")
    return total // 3
