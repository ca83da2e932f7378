"""Command-line interface.

Yearly edge files are given as ``YEAR=PATH``; a bare path takes its year
from the last number in the file name (``edges_2012.tsv`` -> 2012).
"""
from __future__ import annotations

import argparse
import io
import logging
import sys
from pathlib import Path
from typing import Sequence

from .attribution import TriadAttributor, attribution_summary, events_to_dot
from .dynamics import change_network_from_counts, monotonic_filter
from .ingest import (
    IngestError,
    load_dataset,
    parse_alias_map,
    write_edge_file,
    write_pajek,
    year_from_path,
)
from .islands import core_linkage, filter_positive, line_islands, linkage_to_dot
from .metrics import change_summary, link_overlap, year_stats
from .oracle import GenSpec, random_dataset
from .pipeline import MIN_YEARS, PipelineConfig, StageError, run_pipeline
from .reports import (
    atomic_write,
    change_tsv,
    events_tsv,
    island_lines_tsv,
    islands_tsv,
    journals_tsv,
    overlap_tsv,
    read_change_tsv,
    read_islands_tsv,
    read_journals,
    read_triads_tsv,
    registry_from_names,
    stats_tsv,
    summary_tsv,
    taxonomy_tsv,
    triads_tsv,
)
from .triads import reciprocal_graph, shared_neighbor_counts

log = logging.getLogger("citetriads")


def year_path(text: str) -> tuple[int, Path]:
    if "=" in text:
        year, path = text.split("=", 1)
        try:
            return int(year), Path(path)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad year label in {text!r}") from None
    try:
        return year_from_path(text), Path(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _year_map(items: Sequence[tuple[int, Path]], parser: argparse.ArgumentParser) -> dict[int, Path]:
    years = [y for y, _ in items]
    if len(set(years)) != len(years):
        parser.error(f"duplicate year labels: {sorted(years)}")
    return dict(sorted(items))


def _aliases(path: Path | None):
    if path is None:
        return {}
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_alias_map(fh)


def _journals(path: Path | None) -> list[str]:
    if path is None:
        return []
    with open(path, encoding="utf-8") as fh:
        return read_journals(fh)


def _emit(args, name: str, text: str) -> None:
    """Write to ``--out/name`` when an output directory is set, else to stdout."""
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.mkdir(parents=True, exist_ok=True)
        atomic_write(args.out / name, text)


def _require_out(args, parser: argparse.ArgumentParser) -> Path:
    if args.out is None:
        parser.error(f"{args.command} writes several files; give --out DIR")
    args.out.mkdir(parents=True, exist_ok=True)
    return args.out


def cmd_ingest(args, parser) -> None:
    out = _require_out(args, parser)
    ds = load_dataset(_year_map(args.edges, parser), _aliases(args.aliases), _journals(args.journals))
    atomic_write(out / "journals.tsv", journals_tsv(ds.registry))
    for net in ds.years:
        buf = io.StringIO()
        write_edge_file(net, buf)
        atomic_write(out / f"edges_{net.year}.tsv", buf.getvalue())
        if args.format == "pajek":
            atomic_write(out / f"network_{net.year}.net", write_pajek(net, ds.registry))


def cmd_stats(args, parser) -> None:
    ds = load_dataset(_year_map(args.edges, parser), _aliases(args.aliases), _journals(args.journals))
    _emit(args, "stats.tsv", stats_tsv([year_stats(net) for net in ds.years]))


def cmd_overlap(args, parser) -> None:
    if len(args.edges) != 3:
        parser.error("overlap takes exactly three yearly edge files")
    ds = load_dataset(_year_map(args.edges, parser), _aliases(args.aliases))
    _emit(args, "overlap.tsv", overlap_tsv(link_overlap(*ds.years), ds.labels))


def cmd_triads(args, parser) -> None:
    ds = load_dataset(_year_map(args.edges, parser), _aliases(args.aliases), _journals(args.journals))
    if args.out is None and len(ds) > 1:
        parser.error("several years need --out DIR")
    for net in ds.years:
        t = shared_neighbor_counts(reciprocal_graph(net), args.workers)
        if args.format == "pajek":
            _emit(args, f"triads_{net.year}.net", write_pajek(t.as_valued(), ds.registry))
        else:
            _emit(args, f"triads_{net.year}.tsv", triads_tsv(t, ds.registry))


def _read_text(path: Path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def cmd_change(args, parser) -> None:
    items = _year_map(args.triads, parser)
    if len(items) < MIN_YEARS:
        parser.error(f"change needs at least {MIN_YEARS} yearly triad files, got {len(items)}")
    texts = {year: _read_text(path) for year, path in items.items()}
    names = list(_journals(args.journals))
    for text in texts.values():
        for line in text.splitlines()[1:]:
            names.extend(line.split("\t")[:2])
    registry = registry_from_names(names)
    graphs = [read_triads_tsv(io.StringIO(t), y, registry) for y, t in texts.items()]
    cn = change_network_from_counts(graphs, strict=not args.weak)
    if args.monotonic_only:
        cn = monotonic_filter(cn)
    _emit(args, "change.tsv", change_tsv(cn, registry))
    if args.out is not None:
        _emit(args, "change_summary.tsv", taxonomy_tsv(change_summary(cn)))


def cmd_islands(args, parser) -> None:
    text = _read_text(args.change)
    names = list(_journals(args.journals))
    names.extend(n for line in text.splitlines()[1:] for n in line.split("\t")[:2])
    registry = registry_from_names(names)
    mono = monotonic_filter(read_change_tsv(io.StringIO(text), registry))
    found = line_islands(mono.as_valued(), args.smin, args.smax, labels=registry.names)
    if args.positive_only:
        found = filter_positive(found)
    _emit(args, "islands.tsv", islands_tsv(found, registry))
    if args.out is not None:
        _emit(args, "island_lines.tsv", island_lines_tsv(found, registry))
        dot = linkage_to_dot(core_linkage(mono, filter_positive(found), args.min_contacts), registry)
        _emit(args, "core_linkage.dot", dot)
        if args.format == "pajek":
            _emit(args, "change_monotonic.net", write_pajek(mono.as_valued(), registry))


def cmd_attribute(args, parser) -> None:
    ds = load_dataset(_year_map(args.edges, parser), _aliases(args.aliases), _journals(args.journals))
    reg = ds.registry
    try:
        a, b = (reg.id_of(n) for n in args.pair.split(",", 1))
    except (KeyError, ValueError) as exc:
        parser.error(f"--pair must name two known journals as A,B: {exc}")
    attributor = TriadAttributor(ds, args.min_weight)
    events = (
        attributor.triad_events((a, b), args.year)
        if args.year is not None
        else attributor.all_events((a, b))
    )
    if args.within_island is not None:
        with open(args.within_island, encoding="utf-8") as fh:
            islands = read_islands_tsv(fh, reg)
        home = next((m for m in islands.values() if a in m and b in m), None)
        if home is None:
            parser.error("the pair does not belong to one island in --within-island")
        events = [ev for ev in events if ev.neighbor in home]
    if args.dot:
        _emit(args, "attribution.dot", events_to_dot(events, reg))
        return
    networks = {net.year: net for net in ds.years}
    table = events_tsv(events, reg, networks)
    summary = summary_tsv(attribution_summary(events, pair=(a, b)), reg)
    if args.out is None:
        sys.stdout.write(table)
        sys.stdout.write("".join(f"# {line}\n" for line in summary.splitlines()))
    else:
        _emit(args, "attribution.tsv", table)
        _emit(args, "attribution_summary.tsv", summary)


def cmd_gen(args, parser) -> None:
    out = _require_out(args, parser)
    spec = GenSpec(args.nodes, args.p_arc, args.p_recip, args.seed)
    ds = random_dataset(spec, args.years, first_year=args.start_year)
    for net in ds.years:
        buf = io.StringIO()
        write_edge_file(net, buf)
        atomic_write(out / f"edges_{net.year}.tsv", buf.getvalue())


def cmd_pipeline(args, parser) -> None:
    out = _require_out(args, parser)
    edges = _year_map(args.edges, parser)
    if len(edges) < MIN_YEARS:
        parser.error(
            f"pipeline needs at least {MIN_YEARS} yearly edge files "
            f"(monotonic change is judged over three years), got {len(edges)}"
        )
    formats = ("tsv", "dot") + (("pajek",) if args.format == "pajek" else ())
    config = PipelineConfig(
        edges=edges,
        out_dir=out,
        aliases=args.aliases,
        smin=args.smin,
        smax=args.smax,
        strict=not args.weak,
        workers=args.workers,
        formats=formats,
        min_contacts=args.min_contacts,
        min_weight=args.min_weight,
    )
    report = run_pipeline(config)
    for key, value in sorted(report.counts.items()):
        log.info("%s: %s", key, value)


def build_parser() -> argparse.ArgumentParser:
    glob = argparse.ArgumentParser(add_help=False)
    glob.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output directory")
    glob.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                      help="threads for triad counting (default: all cores)")
    glob.add_argument("--format", choices=("tsv", "pajek", "dot"), default=argparse.SUPPRESS)
    glob.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="citetriads",
        description="Integration and disintegration hot-spots in yearly citation networks.",
        parents=[glob],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, handler, edges: str | None = "+"):
        p = sub.add_parser(name, help=help_, parents=[glob])
        if edges:
            p.add_argument("edges", nargs=edges, type=year_path, metavar="YEAR=EDGES")
        p.set_defaults(handler=handler)
        return p

    def ingest_opts(p):
        p.add_argument("--aliases", type=Path, help="TSV of old<TAB>new journal names")
        p.add_argument("--journals", type=Path, help="journals.tsv listing the full registry")

    p = add("ingest", "canonicalize edge files and write them back", cmd_ingest)
    ingest_opts(p)
    p = add("stats", "per-year size, density and degree table", cmd_stats)
    ingest_opts(p)
    p = add("overlap", "three-year overlap of citation links", cmd_overlap)
    ingest_opts(p)
    p = add("triads", "shared-neighbor count of every reciprocal pair", cmd_triads)
    ingest_opts(p)

    p = add("change", "change network from yearly triad files", cmd_change, edges=None)
    p.add_argument("triads", nargs="+", type=year_path, metavar="YEAR=TRIADS")
    p.add_argument("--journals", type=Path)
    p.add_argument("--weak", action="store_true", help="accept ties in monotonic trends")
    p.add_argument("--monotonic-only", action="store_true")

    p = add("islands", "line islands of the monotonic change network", cmd_islands, edges=None)
    p.add_argument("change", type=Path, metavar="CHANGE_TSV")
    p.add_argument("--journals", type=Path)
    p.add_argument("--smin", type=int, default=2)
    p.add_argument("--smax", type=int, default=None)
    p.add_argument("--positive-only", action="store_true", help="drop disintegrating islands")
    p.add_argument("--min-contacts", type=int, default=2)

    p = add("attribute", "new arcs that created newly shared neighbors", cmd_attribute)
    ingest_opts(p)
    p.add_argument("--pair", required=True, help="two journal names, A,B")
    p.add_argument("--year", type=int)
    p.add_argument("--min-weight", type=int, default=1)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--within-island", type=Path, metavar="ISLANDS_TSV",
                   help="keep only neighbors in the pair's island")

    p = add("gen", "write random yearly edge files", cmd_gen, edges=None)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--p-arc", type=float, required=True)
    p.add_argument("--p-recip", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--years", type=int, default=3)
    p.add_argument("--start-year", type=int, default=1)

    p = add("pipeline", "run every stage and write the report bundle", cmd_pipeline)
    p.add_argument("--aliases", type=Path)
    p.add_argument("--smin", type=int, default=2)
    p.add_argument("--smax", type=int, default=None)
    p.add_argument("--weak", action="store_true")
    p.add_argument("--min-contacts", type=int, default=2)
    p.add_argument("--min-weight", type=int, default=1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("out", None), ("workers", None), ("format", "tsv"), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.workers is not None and args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        args.handler(args, parser)
    except StageError as exc:
        print(f"citetriads: error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return 1
    except (IngestError, ValueError, KeyError, OSError) as exc:
        print(f"citetriads: error in {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
