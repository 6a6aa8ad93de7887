"""CLI tests; main() is invoked directly, plus one real subprocess check."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from sketchlayout.cli import main

from conftest import draw_line_sketch, draw_rectangle_sketch


@pytest.fixture
def workspace(tmp_path):
    graph = {
        "nodes": [f"n{i:02d}" for i in range(12)],
        "edges": [[f"n{i:02d}", f"n{(i + 1) % 12:02d}"] for i in range(12)],
    }
    gpath = tmp_path / "graph.json"
    gpath.write_text(json.dumps(graph))
    spath = tmp_path / "sketch.png"
    draw_rectangle_sketch().save(spath)
    return tmp_path, gpath, spath


def run_cli(args):
    return main([str(a) for a in args])


def test_full_run_writes_outputs(workspace, capsys):
    tmp, gpath, spath = workspace
    out = tmp / "layout.json"
    svg = tmp / "layout.svg"
    chain = tmp / "chain.json"
    cons = tmp / "constraints.json"
    code = run_cli(
        ["--graph", gpath, "--sketch", spath, "--out", out, "--svg", svg,
         "--dump-chain", chain, "--dump-constraints", cons,
         "--iterations", 120, "--seed", 4]
    )
    assert code == 0
    layout = json.loads(out.read_text())
    assert set(layout["positions"]) == {f"n{i:02d}" for i in range(12)}
    assert layout["strategy"] == "cycle"
    chain_data = json.loads(chain.read_text())
    assert chain_data["closed"] is True
    cons_data = json.loads(cons.read_text())
    assert "relativePlacement" in cons_data
    assert svg.read_text().startswith("<svg")
    assert "<circle" in svg.read_text()


def test_stdout_when_no_out(workspace, capsys):
    tmp, gpath, spath = workspace
    code = run_cli(["--graph", gpath, "--sketch", spath, "--iterations", 50])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert "positions" in data


def test_report_directory(workspace):
    tmp, gpath, spath = workspace
    report = tmp / "report"
    code = run_cli(
        ["--graph", gpath, "--sketch", spath, "--out", tmp / "o.json",
         "--report", report, "--iterations", 50]
    )
    assert code == 0
    csv_text = (report / "positions.csv").read_text()
    assert csv_text.splitlines()[0] == "node,x,y"
    assert len(csv_text.splitlines()) == 13
    assert (report / "layout.png").stat().st_size > 0
    assert (report / "extraction.png").stat().st_size > 0


def test_blank_sketch_warns_but_succeeds(workspace, tmp_path, capsys):
    tmp, gpath, _ = workspace
    from PIL import Image

    blank = tmp_path / "blank.png"
    Image.new("L", (64, 64), 255).save(blank)
    code = run_cli(["--graph", gpath, "--sketch", blank, "--out", tmp / "o.json",
                    "--iterations", 50])
    assert code == 0
    assert "warning" in capsys.readouterr().err


def test_missing_graph_file_fails(workspace, capsys):
    tmp, _, spath = workspace
    code = run_cli(["--graph", tmp / "nope.json", "--sketch", spath])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_select_without_prior_fails(workspace, capsys):
    tmp, gpath, spath = workspace
    code = run_cli(["--graph", gpath, "--sketch", spath, "--select", "n00"])
    assert code == 2


def test_incremental_mode(workspace, tmp_path):
    tmp, gpath, spath = workspace
    out1 = tmp / "first.json"
    assert run_cli(["--graph", gpath, "--sketch", spath, "--out", out1,
                    "--iterations", 120]) == 0
    line = tmp_path / "line.png"
    draw_line_sketch().save(line)
    out2 = tmp / "second.json"
    code = run_cli(
        ["--graph", gpath, "--sketch", line, "--out", out2,
         "--select", "n00,n01,n02", "--prior", out1, "--iterations", 120]
    )
    assert code == 0
    first = json.loads(out1.read_text())["positions"]
    second = json.loads(out2.read_text())["positions"]
    for n in (f"n{i:02d}" for i in range(3, 12)):
        assert second[n] == first[n]


def test_edge_list_graph_input(workspace, tmp_path):
    tmp, _, spath = workspace
    gpath = tmp_path / "graph.txt"
    gpath.write_text("a b\nb c\nc d\nd a\n")
    code = run_cli(["--graph", gpath, "--sketch", spath, "--out", tmp / "o.json",
                    "--iterations", 50])
    assert code == 0
    data = json.loads((tmp / "o.json").read_text())
    assert set(data["positions"]) == {"a", "b", "c", "d"}


def test_console_script_subprocess(workspace):
    tmp, gpath, spath = workspace
    out = tmp / "sub.json"
    proc = subprocess.run(
        [sys.executable, "-m", "sketchlayout.cli", "--graph", str(gpath),
         "--sketch", str(spath), "--out", str(out), "--iterations", "60"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
