"""Core data structures: the journal registry and yearly citation networks.

Arcs point from the cited journal to the citing journal and carry integer
citation counts. Journals are addressed by dense integer ids handed out by a
:class:`JournalRegistry`; everything downstream of ingestion works on ids.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "JournalRegistry",
    "YearNetwork",
    "TemporalDataset",
    "ValuedGraph",
    "pack_keys",
    "unpack_keys",
]

_SHIFT = np.int64(32)
_MASK = np.int64(0xFFFFFFFF)


def pack_keys(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Encode (src, dst) id pairs as sortable int64 keys, ordered by src then dst."""
    return (np.asarray(src, dtype=np.int64) << _SHIFT) | np.asarray(dst, dtype=np.int64)


def unpack_keys(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = np.asarray(keys, dtype=np.int64)
    return keys >> _SHIFT, keys & _MASK


class JournalRegistry:
    """Bidirectional mapping between canonical journal names and dense ids.

    Ids are assigned contiguously from 0 in first-seen order.
    """

    def __init__(self, names: Iterable[str] = ()) -> None:
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        for name in names:
            self.register(name)

    def register(self, name: str) -> int:
        key = name.strip()
        if not key:
            raise ValueError("journal name is empty")
        found = self._index.get(key)
        if found is not None:
            return found
        jid = len(self._names)
        self._names.append(key)
        self._index[key] = jid
        return jid

    def id_of(self, name: str) -> int:
        try:
            return self._index[name.strip()]
        except KeyError:
            raise KeyError(f"unknown journal {name!r}") from None

    def name_of(self, jid: int) -> str:
        self.check(jid)
        return self._names[jid]

    def check(self, jid: int) -> None:
        if not 0 <= jid < len(self._names):
            raise IndexError(f"journal id {jid} not in registry of size {len(self._names)}")

    @property
    def names(self) -> Sequence[str]:
        return tuple(self._names)

    def name_rank(self) -> np.ndarray:
        """Rank of every id when names are sorted lexicographically."""
        order = sorted(range(len(self._names)), key=self._names.__getitem__)
        rank = np.empty(len(order), dtype=np.int64)
        rank[order] = np.arange(len(order), dtype=np.int64)
        return rank

    def __contains__(self, name: object) -> bool:
        return isinstance(name, str) and name.strip() in self._index

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JournalRegistry):
            return NotImplemented
        return self._names == other._names

    def __repr__(self) -> str:
        return f"JournalRegistry({len(self)} journals)"


class YearNetwork:
    """One year's directed weighted citation graph.

    Arcs run cited -> citing. Loops (journal self-citation) are kept. Citations
    may be added one at a time with :meth:`add_citation`; they are accumulated
    into a sorted array representation on first read, so bulk construction
    through :meth:`from_arrays` and incremental construction behave the same.
    """

    def __init__(self, year: int, registry: JournalRegistry) -> None:
        self.year = int(year)
        self.registry = registry
        self._keys = np.empty(0, dtype=np.int64)
        self._weights = np.empty(0, dtype=np.int64)
        self._pending_src: list[int] = []
        self._pending_dst: list[int] = []
        self._pending_w: list[int] = []

    @classmethod
    def from_arrays(
        cls,
        year: int,
        registry: JournalRegistry,
        cited: np.ndarray,
        citing: np.ndarray,
        weights: np.ndarray,
    ) -> YearNetwork:
        cited = np.asarray(cited, dtype=np.int64)
        citing = np.asarray(citing, dtype=np.int64)
        weights = np.asarray(weights, dtype=np.int64)
        if not (len(cited) == len(citing) == len(weights)):
            raise ValueError("cited, citing and weights must have equal length")
        n = len(registry)
        if len(cited) and (
            cited.min() < 0 or citing.min() < 0 or cited.max() >= n or citing.max() >= n
        ):
            raise IndexError("arc endpoint outside registry")
        if len(weights) and weights.min() < 1:
            raise ValueError("citation counts must be >= 1")
        net = cls(year, registry)
        net._keys, net._weights = _accumulate(pack_keys(cited, citing), weights)
        return net

    @classmethod
    def from_dict(
        cls, year: int, registry: JournalRegistry, arcs: dict[tuple[int, int], int]
    ) -> YearNetwork:
        if not arcs:
            return cls(year, registry)
        pairs = np.array(list(arcs.keys()), dtype=np.int64).reshape(-1, 2)
        weights = np.fromiter(arcs.values(), dtype=np.int64, count=len(arcs))
        return cls.from_arrays(year, registry, pairs[:, 0], pairs[:, 1], weights)

    def add_citation(self, cited: int, citing: int, count: int = 1) -> None:
        self.registry.check(cited)
        self.registry.check(citing)
        if count < 1:
            raise ValueError(f"citation count must be >= 1, got {count}")
        self._pending_src.append(cited)
        self._pending_dst.append(citing)
        self._pending_w.append(count)

    def _flush(self) -> None:
        if not self._pending_w:
            return
        keys = np.concatenate([self._keys, pack_keys(self._pending_src, self._pending_dst)])
        weights = np.concatenate([self._weights, np.asarray(self._pending_w, dtype=np.int64)])
        self._keys, self._weights = _accumulate(keys, weights)
        self._pending_src.clear()
        self._pending_dst.clear()
        self._pending_w.clear()

    @property
    def keys(self) -> np.ndarray:
        """Sorted packed arc keys (see :func:`pack_keys`)."""
        self._flush()
        return self._keys

    @property
    def weights(self) -> np.ndarray:
        self._flush()
        return self._weights

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (cited, citing, weight) arrays sorted by (cited, citing)."""
        cited, citing = unpack_keys(self.keys)
        return cited, citing, self.weights

    def arc_weight(self, cited: int, citing: int) -> int:
        self.registry.check(cited)
        self.registry.check(citing)
        keys = self.keys
        key = (int(cited) << 32) | int(citing)
        pos = int(np.searchsorted(keys, key))
        if pos < len(keys) and keys[pos] == key:
            return int(self._weights[pos])
        return 0

    def has_arc(self, cited: int, citing: int) -> bool:
        return self.arc_weight(cited, citing) > 0

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        cited, citing, weights = self.arrays()
        return zip(cited.tolist(), citing.tolist(), weights.tolist())

    def loop_mask(self) -> np.ndarray:
        cited, citing = unpack_keys(self.keys)
        return cited == citing

    @property
    def n_arcs(self) -> int:
        return len(self.keys)

    def total_citations(self) -> int:
        return int(self.weights.sum())

    def __len__(self) -> int:
        return self.n_arcs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, YearNetwork):
            return NotImplemented
        return (
            self.year == other.year
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self) -> str:
        return f"YearNetwork(year={self.year}, arcs={self.n_arcs})"


def _accumulate(keys: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(keys) == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    uniq, inverse = np.unique(keys, return_inverse=True)
    summed = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(summed, inverse.ravel(), weights)
    return uniq, summed


@dataclass
class TemporalDataset:
    """A registry shared by an ascending sequence of yearly networks."""

    registry: JournalRegistry
    years: list[YearNetwork]

    def __post_init__(self) -> None:
        labels = [net.year for net in self.years]
        if any(b <= a for a, b in zip(labels, labels[1:])):
            raise ValueError(f"year labels must be strictly ascending, got {labels}")
        for net in self.years:
            if net.registry is not self.registry:
                raise ValueError(f"year {net.year} does not share the dataset registry")

    @property
    def labels(self) -> list[int]:
        return [net.year for net in self.years]

    def year(self, label: int) -> YearNetwork:
        for net in self.years:
            if net.year == label:
                return net
        raise KeyError(f"year {label} not in dataset (have {self.labels})")

    def previous(self, label: int) -> YearNetwork:
        """The year ingested immediately before ``label``."""
        labels = self.labels
        if label not in labels:
            raise KeyError(f"year {label} not in dataset (have {labels})")
        pos = labels.index(label)
        if pos == 0:
            raise KeyError(f"year {label} has no preceding year in the dataset")
        return self.years[pos - 1]

    def __len__(self) -> int:
        return len(self.years)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalDataset):
            return NotImplemented
        return self.registry == other.registry and self.years == other.years


class ValuedGraph:
    """Simple undirected graph on ``n_nodes`` vertices with a real value per line.

    Lines are stored once with ``u < v``, sorted by (u, v). Loops and duplicate
    lines are rejected.
    """

    def __init__(self, n_nodes: int, u, v, values) -> None:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if not (len(u) == len(v) == len(values)):
            raise ValueError("u, v and values must have equal length")
        if np.any(u == v):
            raise ValueError("loops are not allowed in a valued graph")
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n_nodes):
            raise IndexError("line endpoint outside 0..n_nodes-1")
        if not np.all(np.isfinite(values)):
            raise ValueError("line values must be finite")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = pack_keys(lo, hi)
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
            raise ValueError("duplicate line in valued graph")
        self.n_nodes = int(n_nodes)
        self.keys = keys
        self.u = lo[order]
        self.v = hi[order]
        self.values = values[order]

    @classmethod
    def from_lines(cls, n_nodes: int, lines: Iterable[tuple[int, int, float]]) -> ValuedGraph:
        rows = list(lines)
        if not rows:
            return cls(n_nodes, [], [], [])
        u, v, w = zip(*rows)
        return cls(n_nodes, u, v, w)

    def value(self, a: int, b: int) -> float | None:
        key = (min(a, b) << 32) | max(a, b)
        pos = int(np.searchsorted(self.keys, key))
        if pos < len(self.keys) and self.keys[pos] == key:
            return float(self.values[pos])
        return None

    def lines(self) -> Iterator[tuple[int, int, float]]:
        return zip(self.u.tolist(), self.v.tolist(), self.values.tolist())

    def shifted(self, delta: float) -> ValuedGraph:
        return ValuedGraph(self.n_nodes, self.u, self.v, self.values + delta)

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValuedGraph):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"ValuedGraph(n_nodes={self.n_nodes}, lines={len(self)})"
