"""Reading and writing edge lists, alias lists and Pajek networks.

Edge files are headerless TSV with one ``cited<TAB>citing<TAB>count`` row per
line; ``#`` lines are comments. Alias files map an old journal name to its
newest name, one ``old<TAB>new`` row per line.
"""
from __future__ import annotations

import io
import re
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from .model import JournalRegistry, TemporalDataset, ValuedGraph, YearNetwork

__all__ = [
    "IngestError",
    "AliasMap",
    "parse_edge_file",
    "parse_alias_map",
    "canonicalize",
    "load_dataset",
    "write_edge_file",
    "write_pajek",
    "parse_pajek",
    "format_value",
]


class IngestError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class AliasMap(dict):
    """Resolved old-name -> newest-name mapping (chains already collapsed)."""

    def resolve(self, name: str) -> str:
        return self.get(name, name)


def _as_stream(source: TextIO | str) -> TextIO:
    return io.StringIO(source) if isinstance(source, str) else source


def parse_edge_file(
    source: TextIO | str, year: int, registry: JournalRegistry | None = None
) -> YearNetwork:
    """Parse one year's edge list into a :class:`YearNetwork`.

    Names are registered into ``registry`` (a fresh one when omitted) in
    first-seen order. Repeated (cited, citing) rows accumulate.
    """
    registry = JournalRegistry() if registry is None else registry
    register = registry.register
    src: list[int] = []
    dst: list[int] = []
    weights: list[int] = []
    for lineno, raw in enumerate(_as_stream(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise IngestError(f"expected 3 tab-separated fields, got {len(fields)}", lineno)
        cited, citing, count = fields
        try:
            value = int(count)
        except ValueError:
            raise IngestError(f"non-integer count {count!r}", lineno) from None
        if value < 1:
            raise IngestError(f"non-positive count {value}", lineno)
        try:
            src.append(register(cited))
            dst.append(register(citing))
        except ValueError as exc:
            raise IngestError(str(exc), lineno) from None
        weights.append(value)
    return YearNetwork.from_arrays(year, registry, np.array(src), np.array(dst), np.array(weights))


def parse_alias_map(source: TextIO | str) -> AliasMap:
    """Parse ``old<TAB>new`` rows and collapse chains to their final names.

    Raises :class:`IngestError` on a cycle or on an old name with two different
    targets (journal splits are not supported). Rows mapping a name to itself
    are ignored.
    """
    direct: dict[str, str] = {}
    for lineno, raw in enumerate(_as_stream(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise IngestError(f"expected 2 tab-separated fields, got {len(fields)}", lineno)
        old, new = fields[0].strip(), fields[1].strip()
        if not old or not new:
            raise IngestError("empty journal name", lineno)
        if old == new:
            continue
        if old in direct and direct[old] != new:
            raise IngestError(
                f"{old!r} maps to both {direct[old]!r} and {new!r}; splits are not supported",
                lineno,
            )
        direct[old] = new

    resolved = AliasMap()
    for start in direct:
        seen = [start]
        name = direct[start]
        while name in direct:
            if name in seen:
                cycle = " -> ".join(seen + [name])
                raise IngestError(f"alias cycle: {cycle}")
            seen.append(name)
            name = direct[name]
        resolved[start] = name
    return resolved


def canonicalize(dataset: TemporalDataset, aliases: Mapping[str, str]) -> TemporalDataset:
    """Merge renamed journals into their newest names.

    The result uses a new registry whose ids follow lexicographic name order.
    Arcs whose endpoints collapse onto the same canonical pair are summed;
    an arc between two merged journals becomes a loop.
    """
    old_names = dataset.registry.names
    canonical = [aliases.get(name, name) for name in old_names]
    registry = JournalRegistry(sorted(set(canonical)))
    remap = np.array([registry.id_of(name) for name in canonical], dtype=np.int64)
    years = []
    for net in dataset.years:
        cited, citing, weights = net.arrays()
        years.append(
            YearNetwork.from_arrays(net.year, registry, remap[cited], remap[citing], weights)
        )
    return TemporalDataset(registry, years)


def year_from_path(path: str | Path) -> int:
    """Take the last integer in a file stem as its year label."""
    found = re.findall(r"\d+", Path(path).stem)
    if not found:
        raise ValueError(f"cannot infer a year label from {str(path)!r}; use YEAR=PATH")
    return int(found[-1])


def load_dataset(
    paths: Mapping[int, str | Path] | Iterable[tuple[int, str | Path]],
    aliases: Mapping[str, str] | None = None,
    journals: Iterable[str] = (),
) -> TemporalDataset:
    """Read yearly edge files into one canonicalized dataset.

    ``journals`` pre-registers names that may not occur in any edge file
    (inactive journals still count toward registry size).
    """
    items = sorted(dict(paths).items())
    registry = JournalRegistry(journals)
    years = []
    for year, path in items:
        with open(path, encoding="utf-8", newline="") as fh:
            try:
                years.append(parse_edge_file(fh, year, registry))
            except IngestError as exc:
                raise IngestError(f"{path}: {exc}") from None
    return canonicalize(TemporalDataset(registry, years), aliases or {})


def write_edge_file(net: YearNetwork, out: TextIO) -> None:
    """Write ``net`` as an edge list, rows sorted by (cited, citing) name."""
    names = net.registry.names
    rank = net.registry.name_rank()
    cited, citing, weights = net.arrays()
    order = np.lexsort((rank[citing], rank[cited]))
    for a, b, w in zip(cited[order].tolist(), citing[order].tolist(), weights[order].tolist()):
        out.write(f"{names[a]}\t{names[b]}\t{w}\n")


def format_value(value: float) -> str:
    """Shortest text that reads back to the same float; integral values print without '.0'."""
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def write_pajek(graph: YearNetwork | ValuedGraph, registry: JournalRegistry) -> str:
    lines = [f"*Vertices {len(registry)}"]
    lines.extend(f'{i} "{name}"' for i, name in enumerate(registry.names, start=1))
    if isinstance(graph, YearNetwork):
        lines.append("*Arcs")
        lines.extend(f"{a + 1} {b + 1} {w}" for a, b, w in graph.arcs())
    else:
        if graph.n_nodes != len(registry):
            raise ValueError("graph and registry sizes differ")
        lines.append("*Edges")
        lines.extend(f"{a + 1} {b + 1} {format_value(w)}" for a, b, w in graph.lines())
    return "\n".join(lines) + "\n"


_VERTEX = re.compile(r'^\s*(\d+)\s+"(.*)"\s*$')


def parse_pajek(
    text: str, year: int = 0
) -> tuple[YearNetwork | ValuedGraph, JournalRegistry]:
    """Read the Pajek subset produced by :func:`write_pajek`.

    ``*Arcs`` yields a :class:`YearNetwork` labelled ``year``; ``*Edges``
    yields a :class:`ValuedGraph`.
    """
    rows = [(i, line.strip()) for i, line in enumerate(text.splitlines(), start=1)]
    rows = [(i, line) for i, line in rows if line and not line.startswith("%")]
    if not rows or not rows[0][1].lower().startswith("*vertices"):
        raise IngestError("missing *Vertices header", rows[0][0] if rows else None)
    lineno, header = rows[0]
    try:
        n = int(header.split()[1])
    except (IndexError, ValueError):
        raise IngestError(f"bad *Vertices header {header!r}", lineno) from None
    if len(rows) < n + 2:
        raise IngestError("file truncated before the *Arcs/*Edges section")
    names = []
    for k, (lineno, line) in enumerate(rows[1 : n + 1], start=1):
        m = _VERTEX.match(line)
        if m is None or int(m.group(1)) != k:
            raise IngestError(f"expected vertex {k}, got {line!r}", lineno)
        names.append(m.group(2))
    registry = JournalRegistry(names)
    if len(registry) != n:
        raise IngestError("duplicate vertex labels")
    lineno, section = rows[n + 1]
    kind = section.lower()
    if kind not in ("*arcs", "*edges"):
        raise IngestError(f"expected *Arcs or *Edges, got {section!r}", lineno)
    src, dst, vals = [], [], []
    for lineno, line in rows[n + 2 :]:
        parts = line.split()
        if len(parts) != 3 or line.startswith("*"):
            raise IngestError(f"bad line {line!r}", lineno)
        try:
            a, b = int(parts[0]) - 1, int(parts[1]) - 1
            value = int(parts[2]) if kind == "*arcs" else float(parts[2])
        except ValueError:
            raise IngestError(f"bad line {line!r}", lineno) from None
        src.append(a)
        dst.append(b)
        vals.append(value)
    try:
        if kind == "*arcs":
            graph = YearNetwork.from_arrays(
                year, registry, np.array(src), np.array(dst), np.array(vals)
            )
        else:
            graph = ValuedGraph(n, src, dst, vals)
    except (ValueError, IndexError) as exc:
        raise IngestError(str(exc)) from None
    return graph, registry
