"""End-to-end run: ingest, statistics, triad counts, change network, islands, attribution."""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from .attribution import TriadAttributor, attribution_summary
from .dynamics import change_network_from_counts, monotonic_filter
from .ingest import load_dataset, parse_alias_map, write_edge_file, write_pajek
from .islands import core_linkage, filter_positive, line_islands, linkage_to_dot
from .metrics import change_summary, link_overlap, year_stats
from .model import TemporalDataset
from .reports import (
    atomic_write,
    change_tsv,
    events_tsv,
    island_lines_tsv,
    islands_tsv,
    journals_tsv,
    overlap_tsv,
    stats_tsv,
    summary_tsv,
    taxonomy_tsv,
    triads_tsv,
)
from .triads import reciprocal_graph, shared_neighbor_counts

__all__ = ["PipelineConfig", "StageError", "run_pipeline", "MIN_YEARS"]

log = logging.getLogger(__name__)

MIN_YEARS = 3
FORMATS = ("tsv", "pajek", "dot")


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass
class PipelineConfig:
    edges: Mapping[int, Path]
    out_dir: Path
    aliases: Path | None = None
    smin: int = 2
    smax: int | None = None
    strict: bool = True
    workers: int | None = None
    formats: tuple[str, ...] = ("tsv", "dot")
    min_contacts: int = 2
    min_weight: int = 1

    def __post_init__(self) -> None:
        self.edges = {int(y): Path(p) for y, p in dict(self.edges).items()}
        self.out_dir = Path(self.out_dir)
        if len(self.edges) < MIN_YEARS:
            raise ValueError(
                f"the pipeline needs at least {MIN_YEARS} yearly edge files "
                f"(monotonic change is judged over three years), got {len(self.edges)}"
            )
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise ValueError(f"unknown export format(s): {sorted(unknown)}")


@dataclass
class PipelineReport:
    out_dir: Path
    files: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)


def run_pipeline(config: PipelineConfig) -> PipelineReport:
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    report = PipelineReport(out)

    def write(name: str, text: str) -> None:
        atomic_write(out / name, text)
        report.files.append(name)

    def stage(name: str, fn: Callable[[], object]):
        log.info("stage %s", name)
        try:
            return fn()
        except Exception as exc:
            raise StageError(name, exc) from exc

    def ingest() -> TemporalDataset:
        ds = _ingest(config)
        write("journals.tsv", journals_tsv(ds.registry))
        for net in ds.years:
            buf = io.StringIO()
            write_edge_file(net, buf)
            write(f"edges_{net.year}.tsv", buf.getvalue())
        rows = [
            "key\tvalue",
            f"n_journals\t{len(ds.registry)}",
            f"years\t{','.join(map(str, ds.labels))}",
        ]
        for net in ds.years:
            rows.append(f"arcs_{net.year}\t{net.n_arcs}")
            rows.append(f"citations_{net.year}\t{net.total_citations()}")
            rows.append(f"loops_{net.year}\t{int(net.loop_mask().sum())}")
        write("dataset_summary.tsv", "\n".join(rows) + "\n")
        return ds

    dataset: TemporalDataset = stage("ingest", ingest)
    registry = dataset.registry
    names = registry.names

    stage("stats", lambda: write("stats.tsv", stats_tsv([year_stats(n) for n in dataset.years])))

    def overlaps() -> None:
        blocks = []
        for k in range(len(dataset) - 2):
            trio = dataset.years[k : k + 3]
            text = overlap_tsv(link_overlap(*trio), [n.year for n in trio])
            blocks.append(text if k == 0 else text.split("\n", 1)[1])
        write("overlap.tsv", "".join(blocks))

    stage("overlap", overlaps)

    def triads():
        graphs = []
        for net in dataset.years:
            t = shared_neighbor_counts(reciprocal_graph(net), config.workers)
            write(f"triads_{net.year}.tsv", triads_tsv(t, registry))
            graphs.append(t)
        return graphs

    graphs = stage("triads", triads)

    def change():
        cn = change_network_from_counts(graphs, config.strict)
        write("change.tsv", change_tsv(cn, registry))
        write("change_summary.tsv", taxonomy_tsv(change_summary(cn)))
        report.counts["persistent_pairs"] = len(cn)
        return monotonic_filter(cn)

    mono = stage("change", change)
    report.counts["monotonic_pairs"] = len(mono)

    def islands():
        found = line_islands(mono.as_valued(), config.smin, config.smax, labels=names)
        write("islands.tsv", islands_tsv(found, registry))
        write("island_lines.tsv", island_lines_tsv(found, registry))
        report.counts["islands"] = len(found)
        cores = filter_positive(found)
        report.counts["positive_islands"] = len(cores)
        return cores

    cores = stage("islands", islands)
    stage(
        "linkage",
        lambda: write(
            "core_linkage.dot",
            linkage_to_dot(core_linkage(mono, cores, config.min_contacts), registry),
        ),
    )

    def attribution() -> None:
        attributor = TriadAttributor(dataset, config.min_weight)
        networks = {net.year: net for net in dataset.years}
        prefix = ("island_id", "journal_a", "journal_b")
        ev_parts = ["\t".join([*prefix, "year", "neighbor", "arc", "status", "weight", "reading"]) + "\n"]
        sum_parts = [
            "\t".join([*prefix, "scope", "year", "journal", "cited_by_new", "citing_new",
                       "involved", "role"]) + "\n"
        ]
        n_events = 0
        for isl in cores.islands:
            pairs = sorted(
                tuple(sorted((a, b), key=names.__getitem__)) for a, b, _ in isl.defining_lines
            )
            pairs.sort(key=lambda p: (names[p[0]], names[p[1]]))
            for a, b in pairs:
                events = attributor.all_events((a, b))
                n_events += len(events)
                values = (isl.id, names[a], names[b])
                ev_parts.append(events_tsv(events, registry, networks, prefix, values, header=False))
                summ = attribution_summary(events, pair=(a, b))
                sum_parts.append(summary_tsv(summ, registry, prefix, values, header=False))
        write("attribution.tsv", "".join(ev_parts))
        write("attribution_summary.tsv", "".join(sum_parts))
        report.counts["triad_events"] = n_events

    stage("attribution", attribution)

    if "pajek" in config.formats:
        def pajek() -> None:
            for net in dataset.years:
                write(f"network_{net.year}.net", write_pajek(net, registry))
            write("change_monotonic.net", write_pajek(mono.as_valued(), registry))

        stage("pajek", pajek)

    rows = ["key\tvalue"] + [f"{k}\t{v}" for k, v in sorted(report.counts.items())]
    write("pipeline_summary.tsv", "\n".join(rows) + "\n")
    return report


def _ingest(config: PipelineConfig) -> TemporalDataset:
    aliases = {}
    if config.aliases is not None:
        with open(config.aliases, encoding="utf-8", newline="") as fh:
            aliases = parse_alias_map(fh)
    return load_dataset(config.edges, aliases)
