# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import json
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def _manifest(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def test_gen_emit_verify(tmp_path, capsys, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    graph, verilog = tmp_path / "ks16.json", tmp_path / "ks16.v"
    assert main(["gen", "--arch", "ks", "--bits", "16", "-o", str(graph)]) == 0
    assert main(["emit", "--graph", str(graph), "--size", "-o", str(verilog)]) == 0
    assert verilog.read_text(encoding="utf-8").rstrip().endswith("endmodule")

    capsys.readouterr()
    assert main(["verify", "--netlist", str(verilog), "--bits", "16"]) == 0
    assert "T?" in capsys.readouterr().out
    assert main(["verify", "--netlist", str(verilog), "--bits", "8"]) == 1


def test_gen_writes_manifest(tmp_path):
    from prefixforge.cli import main

    graph = tmp_path / "bk16.json"
    argv = ["gen", "--arch", "bk", "--bench", "16", "-o", str(graph)]
    assert main(argv) == 0

    manifest = _manifest(tmp_path / "bk16.json.manifest.json")
    assert manifest["command"] == "gen"
    assert manifest["argv"] == argv
    assert manifest["status"] == 0
    assert manifest["outputs"] == [str(graph)]
    assert json.loads(graph.read_text(encoding="utf-8"))["width"] == 16


def test_gen_to_stdout(capsys, tmp_path, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    assert main(["gen", "--arch", "sk", "--bits", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["width"] == 4
    manifest = _manifest(tmp_path / "prefixforge-gen.manifest.json")
    assert manifest["status"] == 0
    assert manifest["outputs"] == []


@pytest.mark.parametrize("command", ["gen", "search", "hybridize", "explore", "verify", "emit",
                                     "report"])
def test_every_command_writes_a_manifest(command, tmp_path, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    assert main(["gen", "--arch", "bk", "--bits", "4", "-o", "bk4.json"]) == 0
    assert main(["emit", "--graph", "bk4.json", "-o", "bk4.v"]) == 0
    assert main(["explore", "--bits", "2", "--threads", "1", "-o", "run"]) == 0

    argv = {
        "gen":       ["gen", "--arch", "ks", "--bits", "4"],
        "search":    ["search", "--bits", "4", "--depth", "2"],
        "hybridize": ["hybridize", "--graph", "bk4.json"],
        "explore":   ["explore", "--bits", "2", "--threads", "1", "-o", "again"],
        "verify":    ["verify", "--netlist", "bk4.v"],
        "emit":      ["emit", "--graph", "bk4.json"],
        "report":    ["report", "--in", "run"],
    }[command]
    assert main(argv + ["--manifest", "custom.json"]) == 0
    assert _manifest(tmp_path / "custom.json")["argv"] == argv + ["--manifest", "custom.json"]

    assert main(argv) == 0
    default = "again.manifest.json" if command == "explore" \
        else f"prefixforge-{command}.manifest.json"
    manifest = _manifest(tmp_path / default)
    assert manifest["command"] == command
    assert manifest["status"] == 0


def test_failed_runs_write_a_manifest(tmp_path, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    assert main(["verify", "--netlist", "missing.v"]) == 1
    assert _manifest(tmp_path / "prefixforge-verify.manifest.json")["status"] == 1
    assert main(["report", "--in", "nothing"]) == 1
    assert _manifest(tmp_path / "prefixforge-report.manifest.json")["status"] == 1
    assert not (tmp_path / "nothing").exists()


@pytest.mark.parametrize("argv", [
    ["gen", "--bits", "0"],
    ["gen", "--arch", "ks", "--bits", "0"],
    ["gen", "--arch", "ks", "--bits", "8", "--frobnicate"],
    ["search", "--bits", "16", "--depth", "3"],
    ["explore", "--bits", "8", "--sizing", "always", "-o", "out"],
])
def test_user_errors(argv, tmp_path, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    assert main(argv) == 1


def test_invalid_graph_file(tmp_path, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    broken = tmp_path / "broken.json"
    broken.write_text("{}", encoding="utf-8")
    assert main(["emit", "--graph", str(broken)]) == 1
    assert main(["emit", "--graph", str(tmp_path / "missing.json")]) == 1


def test_emit_outputs(tmp_path, capsys, monkeypatch):
    from prefixforge.cli import main
    from prefixforge.netlist import GateNetlist

    monkeypatch.chdir(tmp_path)
    graph = tmp_path / "hc8.json"
    assert main(["gen", "--arch", "hc", "--bits", "8", "-o", str(graph)]) == 0
    capsys.readouterr()

    assert main(["emit", "--graph", str(graph), "--name", "hc8"]) == 0
    assert "module hc8 (a, b, cin, sum, cout);" in capsys.readouterr().out

    netlist, timing = tmp_path / "hc8.netlist.json", tmp_path / "hc8.timing.json"
    clusters = tmp_path / "hc8.clusters.json"
    assert main(["emit", "--graph", str(graph), "--hybrid", "-o", str(netlist),
                 "--timing", str(timing), "--clusters", str(clusters)]) == 0
    assert GateNetlist.from_json(json.loads(netlist.read_text(encoding="utf-8"))).width == 8
    assert json.loads(timing.read_text(encoding="utf-8"))["delay_fo1"] > 0
    assert clusters.exists()
    assert _manifest(tmp_path / "hc8.netlist.json.manifest.json")["outputs"] == [
        str(netlist), str(timing), str(clusters),
    ]
    assert main(["verify", "--netlist", str(netlist)]) == 0

    assert main(["emit", "--graph", str(graph), "--inverters", "100000"]) == 1


def test_search(tmp_path, capsys):
    from prefixforge.cli import main

    output = tmp_path / "min6.json"
    assert main(["search", "--bits", "6", "--depth", "3", "--oracle", "-o", str(output)]) == 0
    printed = capsys.readouterr().out
    assert "optimal" in printed
    assert "agrees" in printed
    assert json.loads(output.read_text(encoding="utf-8"))["width"] == 6


def test_hybridize(tmp_path, capsys, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.chdir(tmp_path)
    graph, hybrid = tmp_path / "ks8.json", tmp_path / "ks8.hybrid.json"
    assert main(["gen", "--arch", "ks", "--bits", "8", "-o", str(graph)]) == 0
    capsys.readouterr()

    assert main(["hybridize", "--graph", str(graph), "--compare", "-o", str(hybrid)]) == 0
    printed = capsys.readouterr().out
    assert "nodes converted" in printed
    assert "ks8: prefix" in printed
    assert "converted" in json.loads(hybrid.read_text(encoding="utf-8"))

    assert main(["emit", "--graph", str(hybrid), "-o", str(tmp_path / "ks8.v")]) == 0
    assert main(["verify", "--netlist", str(tmp_path / "ks8.v")]) == 0


def test_explore_and_report(tmp_path, capsys, monkeypatch):
    from prefixforge.cli import main
    from prefixforge.dse import read_scatter

    monkeypatch.chdir(tmp_path)
    output = tmp_path / "run"
    assert main(["explore", "--bits", "2", "--threads", "1", "-o", str(output)]) == 0
    assert "1 candidates, 1 on the frontier, selected 0" in capsys.readouterr().out
    assert len(read_scatter(output)) == 1
    assert (output / "netlists" / "cand_0.v").exists()
    assert _manifest(tmp_path / "run.manifest.json")["outputs"] == [str(output / "manifest.json")]

    assert main(["report", "--in", str(output)]) == 0
    printed = capsys.readouterr().out
    assert "frontier" in printed
    assert "selected" in printed

    assert main(["report", "--in", str(tmp_path / "nothing")]) == 1


@pytest.mark.parametrize("argv,golden", [
    ([], "help.txt"),
    (["report"], "report_help.txt"),
])
def test_help_matches_golden(argv, golden, capsys, monkeypatch):
    from prefixforge.cli import main

    monkeypatch.setenv("COLUMNS", "80")
    monkeypatch.setenv("NO_COLOR", "1")
    assert main(argv + ["--help"]) == 0
    assert capsys.readouterr().out == (GOLDEN / golden).read_text(encoding="utf-8")
