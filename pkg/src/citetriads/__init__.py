"""Triadic closure dynamics in yearly journal citation networks.

Typical flow: load yearly edge files into a :class:`TemporalDataset`, count
shared neighbors of every reciprocal pair per year, keep pairs whose counts
change monotonically, extract line islands of that change network, and
attribute new triads to the citation arcs that created them.
"""
from .attribution import (
    TriadAttributor,
    TriadEvent,
    attribution_summary,
    new_shared_neighbors,
    triad_events,
)
from .dynamics import (
    ChangeNetwork,
    ChangeRecord,
    Trend,
    change_network,
    monotonic_filter,
    persistent_pairs,
)
from .ingest import (
    canonicalize,
    load_dataset,
    parse_alias_map,
    parse_edge_file,
    parse_pajek,
    write_pajek,
)
from .islands import IslandSet, core_linkage, filter_positive, island_lines, line_islands
from .metrics import change_summary, link_overlap, year_stats
from .model import JournalRegistry, TemporalDataset, ValuedGraph, YearNetwork
from .triads import (
    ReciprocalGraph,
    TriadCountGraph,
    reciprocal_graph,
    shared_neighbor_counts,
    triangle_total,
)

__version__ = "0.1.0"
