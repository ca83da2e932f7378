import io
import os
import stat

import pytest

from citetriads.cli import main
from citetriads.dynamics import change_network
from citetriads.ingest import load_dataset
from citetriads.oracle import GenSpec, random_dataset
from citetriads.pipeline import PipelineConfig, StageError, run_pipeline
from citetriads.reports import (
    atomic_write,
    change_tsv,
    read_change_tsv,
    read_triads_tsv,
    triads_tsv,
)
from citetriads.triads import reciprocal_graph, shared_neighbor_counts


@pytest.fixture
def edges(tmp_path):
    d = tmp_path / "gen"
    assert main(["gen", "--nodes", "40", "--p-arc", "0.35", "--p-recip", "0.8",
                 "--seed", "3", "--years", "3", "--start-year", "2011", "--out", str(d)]) == 0
    return [d / f"edges_{y}.tsv" for y in (2011, 2012, 2013)]


def test_gen_writes_three_years(edges):
    assert all(p.exists() and p.stat().st_size > 0 for p in edges)


def test_pipeline_outputs(edges, tmp_path):
    out = tmp_path / "run"
    assert main(["pipeline", *map(str, edges), "--out", str(out), "--smax", "4"]) == 0
    for name in ("journals.tsv", "stats.tsv", "overlap.tsv", "triads_2011.tsv", "change.tsv",
                 "change_summary.tsv", "islands.tsv", "island_lines.tsv", "core_linkage.dot",
                 "attribution.tsv", "attribution_summary.tsv", "pipeline_summary.tsv"):
        assert (out / name).exists(), name
    umask = os.umask(0)
    os.umask(umask)
    assert stat.S_IMODE((out / "stats.tsv").stat().st_mode) == 0o666 & ~umask


def test_stepwise_commands_match_pipeline(edges, tmp_path):
    run = tmp_path / "run"
    assert main(["pipeline", *map(str, edges), "--out", str(run), "--smax", "4"]) == 0
    step = tmp_path / "step"
    assert main(["triads", *map(str, edges), "--out", str(step)]) == 0
    for y in (2011, 2012, 2013):
        assert (step / f"triads_{y}.tsv").read_bytes() == (run / f"triads_{y}.tsv").read_bytes()
    triads = [f"{y}={step / f'triads_{y}.tsv'}" for y in (2011, 2012, 2013)]
    assert main(["change", *triads, "--out", str(step)]) == 0
    assert (step / "change.tsv").read_bytes() == (run / "change.tsv").read_bytes()
    assert main(["islands", str(step / "change.tsv"), "--smax", "4", "--out", str(step)]) == 0
    assert (step / "islands.tsv").read_bytes() == (run / "islands.tsv").read_bytes()


def test_pajek_format(edges, tmp_path):
    out = tmp_path / "pj"
    assert main(["pipeline", *map(str, edges), "--out", str(out), "--format", "pajek"]) == 0
    assert (out / "network_2011.net").read_text().startswith("*Vertices 40")
    assert (out / "change_monotonic.net").exists()


def test_stats_to_stdout(edges, capsys):
    assert main(["stats", str(edges[0])]) == 0
    header = capsys.readouterr().out.splitlines()[0]
    assert header.startswith("year\t")


def test_pipeline_needs_three_years(edges, tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["pipeline", *map(str, edges[:2]), "--out", str(tmp_path / "x")])
    assert info.value.code == 2
    assert "3 yearly edge files" in capsys.readouterr().err


def test_bad_year_argument(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["stats", str(tmp_path / "edges.tsv")])
    assert info.value.code == 2


def test_malformed_input_reports_stage(tmp_path, capsys):
    paths = []
    for y in (1, 2, 3):
        p = tmp_path / f"e{y}.tsv"
        p.write_text("A\tB\t1\n" if y != 2 else "A\tB\n")
        paths.append(str(p))
    assert main(["pipeline", *paths, "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "stage ingest" in err and "line 1" in err


def test_attribute_command(tmp_path, capsys):
    rows = {
        2011: "A\tB\t1\nB\tA\t1\nB\tC\t1\nC\tB\t1\nA\tC\t2\n",
        2012: "A\tB\t1\nB\tA\t1\nB\tC\t1\nC\tB\t1\nA\tC\t2\nC\tA\t7\n",
    }
    paths = []
    for y, text in rows.items():
        p = tmp_path / f"e{y}.tsv"
        p.write_text(text)
        paths.append(str(p))
    assert main(["attribute", *paths, "--pair", "A,B", "--year", "2012"]) == 0
    out = capsys.readouterr().out
    assert "2012\tC\tC->A\tnew\t7\tA cites C" in out
    assert main(["attribute", *paths, "--pair", "A,B", "--dot"]) == 0
    assert '"C" -> "A"' in capsys.readouterr().out
    assert main(["attribute", *paths, "--pair", "A,C", "--year", "2011"]) == 1


def test_unknown_pair(tmp_path):
    p = tmp_path / "e1.tsv"
    p.write_text("A\tB\t1\n")
    with pytest.raises(SystemExit):
        main(["attribute", str(p), "--pair", "A,Z"])


def test_stage_error_from_config(tmp_path):
    paths = {y: tmp_path / f"missing{y}.tsv" for y in (1, 2, 3)}
    with pytest.raises(StageError) as info:
        run_pipeline(PipelineConfig(edges=paths, out_dir=tmp_path / "o"))
    assert info.value.stage == "ingest"


def test_config_requires_three_years(tmp_path):
    with pytest.raises(ValueError):
        PipelineConfig(edges={1: tmp_path, 2: tmp_path}, out_dir=tmp_path)


def test_triads_tsv_round_trip():
    ds = random_dataset(GenSpec(30, 0.4, 0.7, 1), 1)
    t = shared_neighbor_counts(reciprocal_graph(ds.years[0]))
    back = read_triads_tsv(io.StringIO(triads_tsv(t, ds.registry)), t.year, ds.registry)
    assert back == t


def test_change_tsv_round_trip():
    ds = random_dataset(GenSpec(30, 0.5, 0.9, 8), 3)
    cn = change_network(ds)
    text = change_tsv(cn, ds.registry)
    back = read_change_tsv(io.StringIO(text), ds.registry)
    assert change_tsv(back, ds.registry) == text


def test_atomic_write_replaces(tmp_path):
    target = tmp_path / "f.txt"
    atomic_write(target, "one")
    atomic_write(target, "two")
    assert target.read_text() == "two"
    assert [p.name for p in tmp_path.iterdir()] == ["f.txt"]


def test_ingest_command_with_aliases(tmp_path):
    e = tmp_path / "e2011.tsv"
    e.write_text("OLD\tB\t2\nNEW\tB\t3\n")
    al = tmp_path / "aliases.tsv"
    al.write_text("OLD\tNEW\n")
    out = tmp_path / "o"
    assert main(["ingest", str(e), "--aliases", str(al), "--out", str(out)]) == 0
    assert (out / "edges_2011.tsv").read_text() == "NEW\tB\t5\n"
    ds = load_dataset({2011: out / "edges_2011.tsv"})
    assert ds.registry.names == ("B", "NEW")
