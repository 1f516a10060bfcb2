import json
import subprocess
import sys

import pytest

from graphcfg.cli import main
from graphcfg.graph import format_graph, load_fixture


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_graph_info(capsys):
    code, out, _ = run(capsys, "--json", "graph", "y")
    data = json.loads(out)
    assert code == 0 and data["V"] == 1 and data["is_circle"] is False
    assert json.loads(run(capsys, "graph", "h", "--json")[1])["V"] == 2
    data = json.loads(run(capsys, "graph", "cycle5", "--json")[1])
    assert data["V"] == 0 and data["is_circle"] is True


def test_graph_from_file(capsys, tmp_path):
    path = tmp_path / "g.graph"
    path.write_text(format_graph(load_fixture("h")))
    code, out, _ = run(capsys, "graph", str(path))
    assert code == 0 and "V=2" in out


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("v a\ne x a b\n")
    code, _, err = run(capsys, "graph", str(path))
    assert code == 1 and "line 2" in err
    assert run(capsys, "graph", str(tmp_path / "missing.graph"))[0] == 1


def test_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", "y", "--tokens", "2", "--json", "--stable")
    data = json.loads(out)
    assert code == 0
    assert list(data) == ["f_vector", "euler", "betti", "torsion", "prime"]
    assert data["betti"][:2] == [1, 1] and data["euler"] == 0
    data = json.loads(run(capsys, "invariants", "h", "-n", "2", "--json", "--stable")[1])
    assert data["betti"][1] == 3


def test_invariants_collapse(capsys):
    data = json.loads(run(capsys, "--json", "--stable", "invariants", "h", "-n", "3", "--collapse")[1])
    assert data["collapse"]["dim_after"] <= 2
    assert data["betti"][:2] == [1, 31]


def test_stable_output_is_byte_identical(capsys):
    args = ("--json", "--stable", "invariants", "q", "-n", "2")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]
    out = run(capsys, "--json", "invariants", "q", "-n", "2")[1]
    assert "timing" in json.loads(out)
    assert "timing" not in json.loads(run(capsys, *args)[1])


def test_plan_unreachable_exit_two(capsys):
    code, out, _ = run(capsys, "plan", "path", "--start", "p1,p2", "--goal", "p2,p1", "--json", "--stable")
    assert code == 2
    assert json.loads(out)["reachable"] is False


def test_plan_success(capsys):
    code, out, _ = run(capsys, "plan", "y", "--factor", "3", "--start", "v1,v2", "--goal", "v2,v1",
                       "--mode", "astar", "--json", "--stable")
    data = json.loads(out)
    assert code == 0 and data["length"] == 14 and data["mode"] == "astar"


def test_plan_bad_vertex(capsys):
    assert run(capsys, "plan", "y", "--start", "v1", "--goal", "zz")[0] == 1
    assert run(capsys, "plan", "y", "--tokens", "2", "--start", "v1", "--goal", "v2")[0] == 1


def test_formulas_table(capsys):
    code, out, _ = run(capsys, "formulas", "--nmax", "3", "--kmax", "3")
    assert code == 0
    row = [line.split() for line in out.splitlines() if line.split()[:2] == ["3", "3"]][0]
    assert row[5] == "13"
    data = json.loads(run(capsys, "--json", "formulas", "--nmax", "2", "--kmax", "4")[1])
    assert {"N": 2, "K": 4, "E": 3, "chi_closed": -4, "chi_recursive": -4, "Q": 5, "b1_complex": None} in data["rows"]


def test_reduce(capsys):
    data = json.loads(run(capsys, "reduce", "y", "--tokens", "2", "--json", "--stable")[1])
    assert data["dim_after"] == 1
    code, out, _ = run(capsys, "reduce", "y", "-n", "2", "--dot")
    assert code == 0 and out.startswith("graph")


def test_complex_export(capsys, tmp_path):
    target = tmp_path / "c.json"
    code, out, _ = run(capsys, "complex", "y", "-n", "2", "--export-json", str(target))
    assert code == 0 and "[90, 144, 54]" in out
    assert json.loads(target.read_text())["f_vector"] == [90, 144, 54]


def test_diameter(capsys):
    data = json.loads(run(capsys, "diameter", "star3", "-n", "2", "--factor", "3", "--json", "--stable")[1])
    assert data["diameter"] == 14


def test_verify_filter(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "radial", "--json", "--stable")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert {c["group"] for c in data["checks"]} == {"radial"}
    assert all("seconds" not in c for c in data["checks"])


def test_unknown_filter_rejected():
    with pytest.raises(SystemExit):
        main(["verify", "--filter", "nope"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "graphcfg", "graph", "q"], capture_output=True, text=True)
    assert proc.returncode == 0 and "V=1" in proc.stdout
