import json

import pytest

from bkernel import bkg
from bkernel.cli import main
from bkernel.graph import Graph
from bkernel.oracle import k2i

from conftest import abg


@pytest.fixture
def nine_cycle(tmp_path):
    path = tmp_path / "c9.bkg"
    bkg.write(abg(Graph.build(range(9), [(i, (i + 1) % 9) for i in range(9)]), {0, 4}), path)
    (tmp_path / "s.txt").write_text("# transversal\n3\n")
    return path


def test_kernelize_writes_defaults(nine_cycle, tmp_path, capsys):
    assert main(["kernelize", "--problem", "oct", "--input", str(nine_cycle), "--solution", str(tmp_path / "s.txt"), "--seed", "7"]) == 0
    kernel = tmp_path / "c9.kernel.bkg"
    report = json.loads((tmp_path / "c9.report.json").read_text())
    assert kernel.exists() and report["seed"] == 7 and report["size_accounting"]["holds"]
    assert main(["verify-equivalence", "--problem", "oct", "--before", str(nine_cycle), "--after", str(kernel), "--delta", str(report["delta"])]) == 0


def test_kernelize_vc_then_verify(nine_cycle, tmp_path):
    out, rep = tmp_path / "k.bkg", tmp_path / "r.json"
    args = ["kernelize", "--problem", "vc-oct", "--input", str(nine_cycle), "--auto-solution", "--seed", "1", "--out", str(out), "--report", str(rep)]
    assert main(args) == 0
    delta = json.loads(rep.read_text())["delta"]
    vrep = tmp_path / "v.json"
    assert main(["verify-equivalence", "--problem", "vc-oct", "--before", str(nine_cycle), "--after", str(out), "--delta", str(delta), "--report", str(vrep)]) == 0
    body = json.loads(vrep.read_text())
    assert body["schema"] == 1 and body["passed"]


def test_same_seed_same_bytes(nine_cycle, tmp_path):
    outs = []
    for run in range(2):
        out, rep = tmp_path / f"k{run}.bkg", tmp_path / f"r{run}.json"
        main(["kernelize", "--problem", "vc-oct", "--input", str(nine_cycle), "--auto-solution", "--seed", "3", "--out", str(out), "--report", str(rep)])
        outs.append((out.read_bytes(), rep.read_bytes()))
    assert outs[0] == outs[1]


def test_smwc_needs_s(nine_cycle, tmp_path):
    assert main(["kernelize", "--problem", "smwc", "--input", str(nine_cycle), "--auto-solution", "--seed", "0"]) == 2


def test_invalid_solution(nine_cycle, tmp_path):
    (tmp_path / "bad.txt").write_text("")
    assert main(["kernelize", "--problem", "oct", "--input", str(nine_cycle), "--solution", str(tmp_path / "bad.txt"), "--seed", "0"]) == 2


def test_parse_error(tmp_path):
    bad = tmp_path / "bad.bkg"
    bad.write_text("n 2\nedge 0 7\n")
    assert main(["kernelize", "--problem", "oct", "--input", str(bad), "--auto-solution", "--seed", "0"]) == 3
    assert main(["solve-exact", "--problem", "oct", "--input", str(tmp_path / "missing.bkg")]) == 3


def test_auto_solution_budget(tmp_path):
    big = tmp_path / "big.bkg"
    bkg.write(abg(Graph.build(range(30), [(i, i + 1) for i in range(29)])), big)
    assert main(["kernelize", "--problem", "oct", "--input", str(big), "--auto-solution", "--seed", "0"]) == 4


def test_verify_budget(tmp_path):
    wide = tmp_path / "w.bkg"
    bkg.write(abg(Graph.build(range(5)), range(5)), wide)
    assert main(["verify-equivalence", "--problem", "vc-oct", "--before", str(wide), "--after", str(wide)]) == 4


def test_identical_pair_is_equivalent(nine_cycle):
    assert main(["verify-equivalence", "--problem", "oct", "--before", str(nine_cycle), "--after", str(nine_cycle)]) == 0


def test_k22_vs_k23_counterexample(tmp_path, capsys):
    a, b = tmp_path / "k22.bkg", tmp_path / "k23.bkg"
    bkg.write(k2i(2), a)
    bkg.write(k2i(3), b)
    code = main(["verify-equivalence", "--problem", "smwc", "--s", "2", "--policy", "any", "--before", str(a), "--after", str(b)])
    assert code == 1
    out = capsys.readouterr().out
    assert "counterexample" in out and "boundary 0 1" in out
    assert main(["verify-equivalence", "--problem", "smwc", "--s", "2", "--before", str(a), "--after", str(b)]) == 0


def test_solve_exact_prints_json(nine_cycle, capsys):
    assert main(["solve-exact", "--problem", "oct", "--input", str(nine_cycle)]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["value"] == 1 and len(body["witness"]) == 1
