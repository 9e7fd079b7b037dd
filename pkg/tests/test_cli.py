from __future__ import annotations

import csv
import io
import subprocess
import sys
from pathlib import Path

import pytest

from parmce.cli import main
from parmce.core import maximal_cliques
from parmce.generators import (
    FIVE_BASE_EDGES,
    FIVE_FIRST_BATCH,
    FIVE_SECOND_BATCH,
    complete_minus_edge,
    five_id,
    gnp,
    moon_moser,
    star_of_cliques,
    to_edge_list_text,
)
from parmce.graph import load_edge_list


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path: Path):
    def _write(name: str, text: str) -> str:
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


# -- enumerate -----------------------------------------------------------------


def test_triangle_count(write):
    assert run("enumerate", "--input", write("t", "0 1\n1 2\n2 0\n"), "--algo", "ttt", "--output", "count") == (0, "1\n", "")


def test_path_list(write):
    path = write("p", "0 1\n1 2\n")
    code, out, _ = run("enumerate", "--input", path, "--algo", "parmce", "--ranking", "degree", "--output", "list")
    assert (code, out) == (0, "0 1\n1 2\n")


@pytest.mark.parametrize("algo", ["ttt", "parttt", "parmce"])
def test_moon_moser_count(write, algo):
    path = write("mm", to_edge_list_text(moon_moser(3)))
    assert run("enumerate", "--input", path, "--algo", algo, "--threads", "3")[1] == "27\n"


def test_list_uses_original_labels_numerically(write):
    path = write("g", "100 9\n9 20\n# c\n20 100\n7 100\n")
    _, out, _ = run("enumerate", "--input", path, "--output", "list")
    assert out == "7 100\n9 20 100\n"


def test_stats_output(write):
    path = write("g", "1 2\n2 3\n3 1\n3 4\n")
    _, out, _ = run("enumerate", "--input", path, "--output", "stats")
    assert out == "size\tfrequency\n2\t1\n3\t1\nM\t4\nDelta\t3\ncliques\t2\n"


def test_missing_file_is_io_error(tmp_path):
    code, out, err = run("enumerate", "--input", str(tmp_path / "nope.txt"))
    assert code == 2 and out == "" and "nope.txt" in err


def test_malformed_file_is_io_error(write):
    code, _, err = run("enumerate", "--input", write("bad", "0 1\nzero 2\n"))
    assert code == 2 and "line 2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate", "--input", "x", "--algo", "nope"],
        ["enumerate", "--input", "x", "--bogus"],
        ["enumerate", "--input", "x", "--threads", "0"],
        ["enumerate"],
        ["bench", "--input", "x", "--threads-list", "1,a"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert run(*argv)[0] == 1


@pytest.mark.parametrize("seed", range(4))
def test_list_identical_across_threads(write, seed):
    path = write("g", to_edge_list_text(gnp(30, 0.4, seed)))
    outs = {run("enumerate", "--input", path, "--output", "list", "--threads", str(t))[1] for t in (1, 2, 4, 8)}
    assert len(outs) == 1


def test_counts_agree_across_algorithms(write):
    g = gnp(35, 0.35, 9)
    path = write("g", to_edge_list_text(g))
    counts = {
        run("enumerate", "--input", path, "--algo", algo, "--ranking", r, "--threads", t)[1]
        for algo in ("ttt", "parttt", "parmce")
        for r in ("degree", "triangle", "degeneracy")
        for t in ("1", "4")
    }
    assert counts == {f"{len(maximal_cliques(g))}\n"}


# -- stream --------------------------------------------------------------------


def _five_vertex_script() -> str:
    rows = []
    for t, batch in enumerate((FIVE_BASE_EDGES, FIVE_FIRST_BATCH, FIVE_SECOND_BATCH), start=1):
        rows += [f"{five_id(a)} {five_id(b)} {t}" for a, b in batch]
    return "\n".join(rows) + "\n"


def _rows(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))


def test_stream_fig3(write):
    code, out, err = run("stream", "--input", write("f3", _five_vertex_script()), "--batch-by-timestamp", "--threads", "2")
    rows = _rows(out)
    assert code == 0 and err == ""
    assert rows[0] == ["batch", "new", "del", "wall_ms"]
    assert [r[:3] for r in rows[1:4]] == [["1", "2", "0"], ["2", "1", "0"], ["3", "1", "3"]]
    assert rows[-1] == ["total", "1"]


def test_stream_whole_graph_in_one_batch(write):
    g = gnp(30, 0.3, 1)
    path = write("g", to_edge_list_text(g, timestamps=True))
    rows = _rows(run("stream", "--input", path, "--batch-size", "100000")[1])
    assert rows[1][1:3] == [str(len(maximal_cliques(g))), "0"]


def test_stream_near_clique(write):
    g = complete_minus_edge(6, (0, 1))
    text = to_edge_list_text(g, timestamps=True) + "0 1 99999\n"
    rows = _rows(run("stream", "--input", write("k", text), "--batch-size", str(g.m))[1])
    assert rows[2][1:3] == ["1", "2"]


def test_stream_final_count_matches_enumerate(write):
    g = gnp(40, 0.3, 3)
    path = write("g", to_edge_list_text(g, timestamps=True))
    rows = _rows(run("stream", "--input", path, "--batch-size", "17", "--threads", "3")[1])
    assert rows[-1] == ["total", run("enumerate", "--input", path)[1].strip()]


def test_stream_reorders_by_timestamp(write):
    # the path 1-2-3 arrives first; the closing edge last
    code, out, _ = run("stream", "--input", write("s", "1 3 9\n1 2 0\n2 3 1\n"), "--batch-size", "1")
    assert [r[1:3] for r in _rows(out)[1:4]] == [["1", "0"], ["1", "0"], ["1", "2"]]


def test_stream_without_timestamps_warns(write):
    code, out, err = run("stream", "--input", write("s", "0 1\n1 2\n"), "--batch-size", "1")
    assert code == 0 and "timestamp" in err
    assert _rows(out)[-1] == ["total", "2"]


def test_stream_baseline_and_count_only(write):
    path = write("f3", _five_vertex_script())
    rows = _rows(run("stream", "--input", path, "--batch-by-timestamp", "--baseline")[1])
    assert rows[0] == ["batch", "new", "del", "wall_ms", "serial_ms", "speedup"]
    assert all(len(r) == 6 for r in rows[1:4])
    rows = _rows(run("stream", "--input", path, "--batch-by-timestamp", "--mode", "count-only")[1])
    assert [r[2] for r in rows[1:4]] == ["NA"] * 3
    assert rows[-1] == ["new_total", "4"]


def test_stream_counts_report(write):
    rows = _rows(run("stream", "--input", write("f3", _five_vertex_script()), "--batch-by-timestamp", "--report", "counts")[1])
    assert rows == [["batch", "cliques"], ["1", "2"], ["2", "3"], ["3", "1"], ["total", "1"]]


# -- bench ---------------------------------------------------------------------


def _bench_table(out: str) -> tuple[list[dict], dict]:
    head, _, rest = out.partition("\n\n")
    rows = list(csv.DictReader(io.StringIO(head)))
    summary_text = rest.split("\n\n")[0]
    summary = dict(list(csv.reader(io.StringIO(summary_text)))[1:])
    return rows, summary


def test_bench_rows_and_repeats(write):
    path = write("g", to_edge_list_text(gnp(30, 0.4, 2)))
    code, out, _ = run(
        "bench", "--input", path, "--threads-list", "1,2", "--algo-list", "ttt,parttt,parmce",
        "--ranking-list", "degree,degeneracy", "--repeats", "3",
    )
    rows, summary = _bench_table(out)
    assert code == 0
    assert len(rows) == 3 + 2 * 3 + 2 * 2 * 3
    assert len({r["cliques"] for r in rows}) == 1
    for r in rows:
        assert int(r["TR_ms"]) == int(r["RT_ms"]) + int(r["ET_ms"])
        assert float(r["speedup"]) > 0
    ttt_rows = [r for r in rows if r["algo"] == "ttt"]
    assert [r["repeat"] for r in ttt_rows] == ["0", "1", "2"]
    assert summary["cliques"] == rows[0]["cliques"]


def test_bench_imbalance_star_of_cliques(write):
    g = star_of_cliques()
    path = write("s", to_edge_list_text(g))
    _, out, _ = run("bench", "--input", path, "--threads-list", "1", "--algo-list", "parmce")
    _, summary = _bench_table(out)
    uniform = float(summary["uniform_share"])
    assert float(summary["member_top_share"]) > 20 * uniform
    assert float(summary["owner_top_share"]) >= uniform


def test_console_script_entry_point(write):
    path = write("t", "0 1\n1 2\n2 0\n")
    proc = subprocess.run(
        [sys.executable, "-m", "parmce.cli", "enumerate", "--input", path], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "1\n"
    assert load_edge_list(path).m == 3
