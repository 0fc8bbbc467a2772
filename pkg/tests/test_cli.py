import json
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from constlab.cli import main, parse_float_range, parse_range
from constlab.errors import ParameterError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_range_parsing():
    assert parse_range("0.1:0.3:0.1") == [Fraction(1, 10), Fraction(2, 10), Fraction(3, 10)]
    assert parse_range("1/3,1/2") == [Fraction(1, 3), Fraction(1, 2)]
    assert parse_float_range("0.6:0.95:0.05") == [0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95]
    for bad in ("0:1", "0:1:0", "a:b:c"):
        with pytest.raises(ParameterError):
            parse_range(bad)


def test_classify_unbiased(capsys):
    code, out, _ = run(capsys, "classify", "--n", "3", "--iid", "1/2", "--tie", "arbitrary")
    assert code == 0
    rep = json.loads(out)
    assert sorted(rep["stable_set"]) == sorted(
        ["n=3;table=0", "n=3;table=f", "n=3;table=33", "n=3;table=55",
         "n=3;table=aa", "n=3;table=cc", "n=3;table=f0"])


def test_classify_belief_file(tmp_path, capsys):
    path = tmp_path / "belief.json"
    path.write_text(json.dumps({"n": 3, "pmf": {"110": "1/3", "101": "1/3", "011": "1/3"}}))
    code, out, _ = run(capsys, "classify", "--n", "3", "--belief-file", str(path), "--tie", "sqb")
    assert code == 0
    assert json.loads(out)["config"]["belief"] == "explicit"


def test_classify_lex_order_file(tmp_path, capsys):
    path = tmp_path / "order.txt"
    path.write_text("100 010 001 110 101 011\n000 111\n")
    code, out, _ = run(capsys, "classify", "--n", "3", "--lex-order-file", str(path), "--strict")
    assert code == 0
    assert "n=3;table=e8" in json.loads(out)["stable_set"]


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "classify", "--n", "5", "--iid", "1/2")[0] == 2
    code, _, err = run(capsys, "classify", "--n", "3", "--belief-file", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    assert run(capsys, "classify", "--n", "3")[0] == 2
    assert run(capsys, "classify", "--n", "3", "--iid", "7/5")[0] == 2
    assert run(capsys, "refute", "--scf", "threshold:x", "--n", "3")[0] == 2
    assert run(capsys, "jury-grid", "--n", "50", "--ps", "0.4")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"n\": 3}")
    assert run(capsys, "classify", "--n", "3", "--belief-file", str(bad))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_refute(capsys):
    code, out, _ = run(capsys, "refute", "--scf", "simple_majority", "--n", "5", "--tie", "sqb")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "unstable" and data["witness"]["rechecked"]
    code, out, _ = run(capsys, "refute", "--scf", "n=3;table=e8", "--tie", "sqb")
    assert json.loads(out)["verdict"] == "not refuted"


def test_graph_formats(capsys):
    code, out, _ = run(capsys, "graph", "--n", "5", "--iid", "1/2", "--tie", "sqb", "--universe", "thresholds")
    assert code == 0 and '"threshold:3" [shape=doublecircle]' in out
    code, out, _ = run(capsys, "graph", "--n", "2", "--iid", "1/2", "--format", "json")
    assert len(json.loads(out)["nodes"]) == 16


def test_jury_grid_and_dynamics(tmp_path, capsys):
    csv = tmp_path / "grid.csv"
    svg = tmp_path / "grid.svg"
    code, _, _ = run(capsys, "jury-grid", "--n", "400", "--lambdas", "0.6", "--ps", "0.6",
                     "--out", str(csv), "--svg", str(svg))
    assert code == 0
    assert csv.read_text().splitlines()[1] == "0.6,0.6,400,1;3;217,small+large"
    assert svg.stat().st_size > 0
    code, out, _ = run(capsys, "jury-dynamics", "--lambda", "0.6", "--p", "0.6", "--n", "80")
    assert code == 0 and set(json.loads(out)) == {"config", "edges", "stable", "reachable", "basins"}
    code, out, _ = run(capsys, "jury-dynamics", "--lambda", "0.3,0.9", "--p", "0.6", "--n", "80")
    assert len(json.loads(out)) == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--suite", "equilibrium")
    assert code == 0 and out.startswith("[PASS]")
    code, out, _ = run(capsys, "verify-theorems", "--suite", "opt")
    assert code == 1 and "[FAIL]" in out


@pytest.mark.parametrize("argv", [
    ["classify", "--n", "3", "--iid", "1/3", "--tie", "sqb"],
    ["graph", "--n", "3", "--iid", "1/2", "--format", "json"],
    ["jury-grid", "--n", "120", "--lambdas", "0.2:0.8:0.3", "--ps", "0.6,0.7"],
])
def test_outputs_identical_across_threads(tmp_path, capsys, argv):
    outs = []
    for threads in ("1", "4"):
        path = tmp_path / f"out{threads}"
        assert main(["--threads", threads, *argv, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_console_script():
    exe = shutil.which("constlab")
    cmd = [exe] if exe else [sys.executable, "-m", "constlab.cli"]
    out = subprocess.run([*cmd, "verify-theorems", "--suite", "scf"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "checks passed" in out.stdout
