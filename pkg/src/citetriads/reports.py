"""TSV formats of every stage output, with readers for the ones later stages consume.

All rows are sorted by journal name so output bytes depend only on the data.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .attribution import GROUPS, AttributionSummary, TriadEvent, arc_reading
from .dynamics import ChangeNetwork, Trend
from .ingest import IngestError, format_value
from .islands import IslandSet
from .metrics import ChangeTaxonomy, OverlapCounts, YearStats
from .model import JournalRegistry, YearNetwork
from .triads import TriadCountGraph

__all__ = [
    "atomic_write",
    "stats_tsv",
    "overlap_tsv",
    "taxonomy_tsv",
    "triads_tsv",
    "read_triads_tsv",
    "change_tsv",
    "read_change_tsv",
    "islands_tsv",
    "island_lines_tsv",
    "read_islands_tsv",
    "events_tsv",
    "summary_tsv",
    "journals_tsv",
    "read_journals",
    "registry_from_names",
]


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write(path: str | Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temp file in the same directory."""
    path = Path(path)
    mode = 0o666 & ~_umask()
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, mode)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(str(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def _ordered_pairs(
    registry: JournalRegistry, u: np.ndarray, v: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orient each pair so the first name sorts first; return (a, b, row order)."""
    rank = registry.name_rank()
    swap = rank[u] > rank[v]
    a = np.where(swap, v, u)
    b = np.where(swap, u, v)
    order = np.lexsort((rank[b], rank[a]))
    return a, b, order


def journals_tsv(registry: JournalRegistry) -> str:
    return _table(["journal"], ([name] for name in sorted(registry.names)))


def read_journals(stream: TextIO) -> list[str]:
    lines = [line.rstrip("\r\n") for line in stream]
    if not lines or lines[0] != "journal":
        raise IngestError("journals file must start with a 'journal' header", 1)
    return [line for line in lines[1:] if line.strip()]


def registry_from_names(names: Iterable[str]) -> JournalRegistry:
    return JournalRegistry(sorted({n.strip() for n in names if n.strip()}))


def stats_tsv(stats: Sequence[YearStats]) -> str:
    header = [
        "year", "n_journals", "n_active", "n_links", "density_loops",
        "avg_reciprocal_degree", "avg_unidirectional_degree", "n_isolates",
    ]
    rows = [
        (
            s.year, s.n_journals, s.n_active, s.n_links,
            f"{float(s.density_loops):.6f}",
            f"{float(s.avg_reciprocal_degree):.4f}",
            f"{float(s.avg_unidirectional_degree):.4f}",
            s.n_isolates,
        )
        for s in stats
    ]
    return _table(header, rows)


def overlap_tsv(counts: OverlapCounts, years: Sequence[int]) -> str:
    y1, y2, y3 = years
    labels = {
        "only_1": f"{y1}", "only_2": f"{y2}", "only_3": f"{y3}",
        "only_12": f"{y1}+{y2}", "only_13": f"{y1}+{y3}", "only_23": f"{y2}+{y3}",
        "all_three": f"{y1}+{y2}+{y3}",
    }
    rows = [(name, labels[name], value) for name, value in counts.regions().items()]
    rows.append(("total", "union", counts.total))
    return _table(["region", "years", "count"], rows)


def taxonomy_tsv(tax: ChangeTaxonomy) -> str:
    rows = []
    for name, value in tax.rows():
        pct = f"{100.0 * value / tax.total:.1f}" if tax.total else "0.0"
        rows.append((name, value, pct))
    return _table(["class", "count", "percent"], rows)


def triads_tsv(t: TriadCountGraph, registry: JournalRegistry) -> str:
    names = registry.names
    a, b, order = _ordered_pairs(registry, t.u, t.v)
    rows = zip(a[order].tolist(), b[order].tolist(), t.counts[order].tolist())
    return _table(
        ["journal_a", "journal_b", "count"], ((names[x], names[y], c) for x, y, c in rows)
    )


def _read_rows(stream: TextIO, header: Sequence[str] | None = None) -> tuple[list[str], list[list[str]]]:
    lines = [line.rstrip("\r\n") for line in stream]
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise IngestError("empty file: missing header")
    head = lines[0].split("\t")
    if header is not None and head != list(header):
        raise IngestError(f"unexpected header {head}, expected {list(header)}", 1)
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(head):
            raise IngestError(f"expected {len(head)} fields, got {len(fields)}", i)
        rows.append(fields)
    return head, rows


def read_triads_tsv(stream: TextIO, year: int, registry: JournalRegistry) -> TriadCountGraph:
    _, rows = _read_rows(stream, ["journal_a", "journal_b", "count"])
    data = {}
    for i, (x, y, c) in enumerate(rows, start=2):
        try:
            a, b, count = registry.id_of(x), registry.id_of(y), int(c)
        except (KeyError, ValueError) as exc:
            raise IngestError(str(exc), i) from None
        data[(min(a, b), max(a, b))] = count
    keys = sorted(data)
    return TriadCountGraph(
        year, len(registry), [k[0] for k in keys], [k[1] for k in keys], [data[k] for k in keys]
    )


def change_tsv(cn: ChangeNetwork, registry: JournalRegistry) -> str:
    names = registry.names
    a, b, order = _ordered_pairs(registry, cn.u, cn.v)
    header = ["journal_a", "journal_b"] + [f"c_{y}" for y in cn.years] + ["avg_change", "trend"]
    trends = [t.value for t in (Trend.OTHER, Trend.UP, Trend.DOWN)]

    def rows():
        for i in order.tolist():
            yield (
                names[a[i]], names[b[i]], *cn.counts[i].tolist(),
                format_value(cn.avg_change[i]), trends[cn.trend_code[i]],
            )

    return _table(header, rows())


def read_change_tsv(stream: TextIO, registry: JournalRegistry) -> ChangeNetwork:
    head, rows = _read_rows(stream)
    if head[:2] != ["journal_a", "journal_b"] or head[-2:] != ["avg_change", "trend"]:
        raise IngestError(f"not a change-network header: {head}", 1)
    try:
        years = [int(col[2:]) for col in head[2:-2]]
    except ValueError:
        raise IngestError(f"bad count columns in header {head}", 1) from None
    codes = {Trend.OTHER.value: 0, Trend.UP.value: 1, Trend.DOWN.value: 2}
    u, v, counts, trend = [], [], [], []
    for i, fields in enumerate(rows, start=2):
        try:
            a, b = registry.id_of(fields[0]), registry.id_of(fields[1])
            counts.append([int(x) for x in fields[2:-2]])
            trend.append(codes[fields[-1]])
        except (KeyError, ValueError) as exc:
            raise IngestError(f"bad row: {exc}", i) from None
        u.append(min(a, b))
        v.append(max(a, b))
    order = np.argsort(np.array(u, dtype=np.int64) * (1 << 32) + np.array(v, dtype=np.int64))
    counts_arr = np.array(counts, dtype=np.int64).reshape(len(u), len(years))
    return ChangeNetwork(
        years, len(registry),
        np.array(u, dtype=np.int64)[order], np.array(v, dtype=np.int64)[order],
        counts_arr[order], np.array(trend, dtype=np.int8)[order],
    )


def islands_tsv(s: IslandSet, registry: JournalRegistry) -> str:
    names = registry.names
    rows = []
    for isl in s.islands:
        for m in sorted(isl.members, key=names.__getitem__):
            rows.append((names[m], isl.id, format_value(isl.height)))
    return _table(["journal", "island_id", "height"], rows)


def island_lines_tsv(s: IslandSet, registry: JournalRegistry) -> str:
    names = registry.names
    rows = []
    for isl in s.islands:
        lines = []
        for a, b, val in isl.defining_lines:
            x, y = sorted((names[a], names[b]))
            lines.append((isl.id, x, y, format_value(val)))
        rows.extend(sorted(lines))
    return _table(["island_id", "journal_a", "journal_b", "value"], rows)


def read_islands_tsv(stream: TextIO, registry: JournalRegistry) -> dict[int, set[int]]:
    """Island id -> member ids."""
    _, rows = _read_rows(stream, ["journal", "island_id", "height"])
    out: dict[int, set[int]] = {}
    for i, (name, isl, _) in enumerate(rows, start=2):
        try:
            out.setdefault(int(isl), set()).add(registry.id_of(name))
        except (KeyError, ValueError) as exc:
            raise IngestError(str(exc), i) from None
    return out


def _event_rows(events: Sequence[TriadEvent], cur_weight, names: Sequence[str]):
    for ev in events:
        new = {(a, b): w for a, b, w in ev.new_arcs}
        arcs = [(a, b, "new", w) for (a, b), w in new.items()]
        arcs += [(a, b, "persisted", cur_weight(ev.year, a, b)) for a, b in ev.persisted_arcs]
        arcs.sort(key=lambda r: (names[r[0]], names[r[1]]))
        for a, b, status, w in arcs:
            yield (
                ev.year, names[ev.neighbor], f"{names[a]}->{names[b]}", status, w,
                arc_reading(a, b, names),
            )


def events_tsv(
    events: Sequence[TriadEvent],
    registry: JournalRegistry,
    networks: dict[int, YearNetwork],
    prefix: Sequence[str] = (),
    prefix_values: Sequence[object] = (),
    header: bool = True,
) -> str:
    """One row per arc of every event: new arcs and the arcs that persisted."""
    names = registry.names

    def weight(year: int, a: int, b: int) -> int:
        return networks[year].arc_weight(a, b)

    ordered = sorted(events, key=lambda ev: (ev.year, names[ev.neighbor]))
    body = [
        "\t".join(str(x) for x in (*prefix_values, *row))
        for row in _event_rows(ordered, weight, names)
    ]
    cols = [*prefix, "year", "neighbor", "arc", "status", "weight", "reading"]
    lines = (["\t".join(cols)] if header else []) + body
    return "\n".join(lines) + ("\n" if lines else "")


def summary_tsv(
    summary: AttributionSummary,
    registry: JournalRegistry,
    prefix: Sequence[str] = (),
    prefix_values: Sequence[object] = (),
    header: bool = True,
) -> str:
    """Per-core flows by year and in total, then the neighbor groups and concentration."""
    names = registry.names
    cols = [*prefix, "scope", "year", "journal", "cited_by_new", "citing_new", "involved", "role"]
    rows = []
    if summary.pair is not None:
        for core in summary.pair:
            for year in summary.years:
                f = summary.flow(core, year)
                rows.append(("core", year, names[core], f.cited, f.citing, f.involved, f.role))
            f = summary.flow(core)
            rows.append(("core", "all", names[core], f.cited, f.citing, f.involved, f.role))
        a, b = summary.pair
        group_names = {"a_only": f"new_with:{names[a]}", "b_only": f"new_with:{names[b]}",
                       "both": "new_with:both"}
        for year in summary.years:
            g = summary.groups[year]
            for key in GROUPS:
                rows.append(("group", year, group_names[key], g[key], "", "", ""))
        totals = summary.group_totals()
        for key in GROUPS:
            rows.append(("group", "all", group_names[key], totals[key], "", "", ""))
        conc = summary.concentration
        if conc.startswith("focused:"):
            conc = f"focused:{names[int(conc.split(':', 1)[1])]}"
        rows.append(("pair", "all", f"{names[a]}|{names[b]}", summary.total_events, "", "", conc))
    lines = (["\t".join(cols)] if header else []) + [
        "\t".join(str(x) for x in (*prefix_values, *row)) for row in rows
    ]
    return "\n".join(lines) + ("\n" if lines else "")
