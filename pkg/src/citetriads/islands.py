"""Line islands of a valued undirected graph and the core-linkage view.

A line island is a vertex set connected by lines whose values all exceed
every line leaving the set. The islands of a graph are exactly the
connected components of the thresholded graphs ``value >= h``; they nest
into a dendrogram built by merging lines in descending value order. An
island's height is the level at which its component formed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import ChangeNetwork
from .ingest import format_value
from .model import JournalRegistry, ValuedGraph

__all__ = [
    "Island",
    "IslandSet",
    "line_islands",
    "filter_positive",
    "island_lines",
    "CoreLinkage",
    "core_linkage",
    "linkage_to_dot",
]

Line = tuple[int, int, float]


@dataclass(frozen=True)
class Island:
    id: int
    members: tuple[int, ...]
    height: float
    defining_lines: tuple[Line, ...]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class IslandSet:
    n_nodes: int
    islands: tuple[Island, ...]

    def assignment(self) -> np.ndarray:
        """Island id per node, -1 for nodes outside every island."""
        out = np.full(self.n_nodes, -1, dtype=np.int64)
        for isl in self.islands:
            out[list(isl.members)] = isl.id
        return out

    def island_of(self, node: int) -> int | None:
        for isl in self.islands:
            if node in isl.members:
                return isl.id
        return None

    def memberships(self) -> list[frozenset[int]]:
        return [frozenset(isl.members) for isl in self.islands]

    def __len__(self) -> int:
        return len(self.islands)

    def __iter__(self):
        return iter(self.islands)


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


@dataclass
class _Cluster:
    height: float
    size: int
    children: list[int] = field(default_factory=list)
    leaves: list[int] = field(default_factory=list)
    parent: int | None = None


def _dendrogram(g: ValuedGraph) -> list[_Cluster]:
    """Merge lines level by level in descending value order.

    All lines of one value are applied as a batch, so a component that
    gains several members at the same level is recorded once.
    """
    uf = _UnionFind(g.n_nodes)
    clusters: list[_Cluster] = []
    cluster_at: dict[int, int] = {}
    order = np.argsort(-g.values, kind="stable")
    values = g.values[order]
    us = g.u[order].tolist()
    vs = g.v[order].tolist()
    starts = np.flatnonzero(np.r_[True, values[1:] != values[:-1]]).tolist() if len(values) else []
    bounds = starts + [len(values)]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        level = float(values[lo])
        before = {}
        for a, b in zip(us[lo:hi], vs[lo:hi]):
            for x in (a, b):
                if x not in before:
                    before[x] = uf.find(x)
        for a, b in zip(us[lo:hi], vs[lo:hi]):
            uf.union(a, b)
        groups: dict[int, set[int]] = {}
        for old_root in before.values():
            groups.setdefault(uf.find(old_root), set()).add(old_root)
        for root, olds in groups.items():
            if len(olds) < 2:
                continue
            node = _Cluster(level, uf.size[root])
            idx = len(clusters)
            for old in sorted(olds):
                child = cluster_at.pop(old, None)
                if child is None:
                    node.leaves.append(old)
                else:
                    node.children.append(child)
                    clusters[child].parent = idx
            clusters.append(node)
            cluster_at[root] = idx
    return clusters


def _members(clusters: list[_Cluster], idx: int) -> list[int]:
    out: list[int] = []
    stack = [idx]
    while stack:
        c = clusters[stack.pop()]
        out.extend(c.leaves)
        stack.extend(c.children)
    return sorted(out)


def line_islands(
    g: ValuedGraph,
    smin: int = 2,
    smax: int | None = None,
    labels: Sequence[str] | None = None,
) -> IslandSet:
    """Maximal line islands with between ``smin`` and ``smax`` members.

    Island ids follow descending height, ties broken by the smallest member
    (by ``labels`` when given, else by id).
    """
    smax = g.n_nodes if smax is None else smax
    if smin < 2:
        raise ValueError(f"smin must be at least 2, got {smin}")
    if smin > smax:
        raise ValueError(f"smin ({smin}) exceeds smax ({smax})")
    clusters = _dendrogram(g)
    chosen = []
    for idx, c in enumerate(clusters):
        if not smin <= c.size <= smax:
            continue
        if c.parent is not None and clusters[c.parent].size <= smax:
            continue
        chosen.append((c.height, _members(clusters, idx)))

    def sort_key(item):
        height, members = item
        first = min(labels[m] for m in members) if labels is not None else members[0]
        return (-height, first)

    chosen.sort(key=sort_key)
    owner = np.full(g.n_nodes, -1, dtype=np.int64)
    for i, (_, members) in enumerate(chosen):
        owner[members] = i
    defining: list[list[Line]] = [[] for _ in chosen]
    for a, b, val in g.lines():
        i = owner[a]
        if i >= 0 and owner[b] == i and val >= chosen[i][0]:
            defining[i].append((a, b, val))
    islands = tuple(
        Island(i, tuple(members), height, tuple(defining[i]))
        for i, (height, members) in enumerate(chosen)
    )
    return IslandSet(g.n_nodes, islands)


def filter_positive(s: IslandSet) -> IslandSet:
    """Drop islands whose height is not above zero (disintegrating cores).

    Remaining islands are renumbered densely in their original order.
    """
    kept = [isl for isl in s.islands if isl.height > 0]
    return IslandSet(
        s.n_nodes,
        tuple(Island(i, isl.members, isl.height, isl.defining_lines) for i, isl in enumerate(kept)),
    )


def island_lines(g: ValuedGraph, s: IslandSet) -> set[Line]:
    owner = s.assignment()
    heights = {isl.id: isl.height for isl in s.islands}
    return {
        (a, b, val)
        for a, b, val in g.lines()
        if owner[a] >= 0 and owner[a] == owner[b] and val >= heights[owner[a]]
    }


@dataclass(frozen=True)
class CoreLinkage:
    """Islands, their inter-island lines, and bridging non-core journals.

    ``nodes`` maps a journal to its island id, or to None for a bridging
    journal. Each line is ``(a, b, value, kind)`` with kind ``core`` (an
    island's defining line), ``inter`` (between two islands) or ``bridge``
    (between a bridging journal and an island member).
    """

    nodes: dict[int, int | None]
    lines: list[tuple[int, int, float, str]]


def core_linkage(cn: ChangeNetwork, s: IslandSet, min_contacts: int = 2) -> CoreLinkage:
    owner = s.assignment()
    nodes: dict[int, int | None] = {}
    for isl in s.islands:
        for m in isl.members:
            nodes[m] = isl.id
    lines: list[tuple[int, int, float, str]] = []
    for isl in s.islands:
        lines.extend((a, b, val, "core") for a, b, val in isl.defining_lines)

    contacts: dict[int, list[tuple[int, int, float]]] = {}
    for a, b, val in cn.as_valued().lines():
        ia, ib = owner[a], owner[b]
        if ia >= 0 and ib >= 0:
            if ia != ib:
                lines.append((a, b, val, "inter"))
        elif ia >= 0:
            contacts.setdefault(b, []).append((a, b, val))
        elif ib >= 0:
            contacts.setdefault(a, []).append((a, b, val))
    for outsider in sorted(contacts):
        linked = contacts[outsider]
        if len(linked) >= min_contacts:
            nodes[outsider] = None
            lines.extend((a, b, val, "bridge") for a, b, val in linked)
    lines.sort(key=lambda line: (line[0], line[1]))
    return CoreLinkage(dict(sorted(nodes.items())), lines)


_PALETTE = (
    "lightpink", "lightblue", "palegreen", "gold", "plum", "lightsalmon", "khaki",
    "aquamarine", "thistle", "lightcoral", "powderblue", "wheat", "lightgreen", "orchid",
)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def linkage_to_dot(linkage: CoreLinkage, registry: JournalRegistry) -> str:
    """Render as Graphviz DOT: one fill color per island, white bridging nodes,
    solid lines for integration and dashed lines for disintegration."""
    names = registry.names
    out = ["graph core_linkage {", "  node [style=filled, shape=ellipse];"]
    by_name = sorted(linkage.nodes.items(), key=lambda item: names[item[0]])
    for node, isl in by_name:
        if isl is None:
            out.append(f"  {_quote(names[node])} [fillcolor=white, fontname=\"Helvetica-Oblique\"];")
        else:
            color = _PALETTE[isl % len(_PALETTE)]
            out.append(f"  {_quote(names[node])} [fillcolor={color}, island={isl}];")
    rows = []
    for a, b, val, kind in linkage.lines:
        x, y = sorted((names[a], names[b]))
        style = "solid" if val > 0 else "dashed"
        width = ", penwidth=2" if kind == "core" else ""
        rows.append(
            f"  {_quote(x)} -- {_quote(y)} [style={style}, label={_quote(format_value(val))}{width}];"
        )
    out.extend(sorted(rows))
    out.append("}")
    return "\n".join(out) + "\n"
