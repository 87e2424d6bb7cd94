import json

import pytest

from conftest import example1
from sfom import cli


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


EX1 = "1225,1457750,70,0,1"


def test_basis_example1(capsys):
    code, out, _ = run(capsys, ["basis", "--poly", EX1])
    assert code == 0
    obj = json.loads(out)
    assert obj["f"][0] == "1225"
    mods = {m["N"]: m for m in obj["moduli"]}
    assert "35" in mods or {"5", "7"} <= set(mods)
    assert obj["global"]["den"] == "1225"
    # den_exp pattern 0,0,1,2 for the 35-block
    if "35" in mods:
        assert sorted(e["den_exp"] for e in mods["35"]["basis"]) == [0, 0, 1, 2]


def test_basis_power_field(capsys):
    code, out, _ = run(capsys, ["basis", "--poly", "1,0,1"])
    assert code == 0
    obj = json.loads(out)
    assert obj["global"] == {"den": "1", "hnf": [["1", "0"], ["0", "1"]]}


def test_basis_merged_only(capsys):
    code, out, _ = run(capsys, ["basis", "--poly", "1,0,1", "--merged-only"])
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"f", "global"}


def test_malformed_input(capsys):
    code, _, _ = run(capsys, ["basis", "--poly", "2,0,2"])  # not monic
    assert code == 2
    code, _, _ = run(capsys, ["basis", "--poly", "abc"])
    assert code == 2


def test_reducible_input(capsys):
    code, _, err = run(capsys, ["basis", "--poly=-1,0,1"])
    assert code == 3
    code, _, _ = run(capsys, ["basis", "--poly", "1,2,1"])  # (x+1)^2
    assert code == 3


def test_tree_golden(capsys):
    code, out, _ = run(capsys, ["tree", "--poly", EX1, "--modulus", "35"])
    assert code == 0
    obj = json.loads(out)
    assert obj["N"] == "35"
    chain = obj["leaves"][0]
    assert [node["lambda"] for node in chain] == [[0, 1], [1, 2], [3, 2]]
    assert chain[2]["g"] == ["35", "0", "1"]


def test_tree_reports_factor(capsys):
    code, out, _ = run(capsys, ["tree", "--poly", EX1, "--modulus", "1225"])
    assert code == 0
    assert json.loads(out) == {"n_factor": "35"}


def test_polygon_golden(capsys, tmp_path):
    code, out, _ = run(capsys, ["polygon", "--poly", EX1, "--modulus", "35",
                                "--level", "1"])
    assert code == 0
    assert out.strip() == "0 2\n4 0\nside 1/2 0 4"
    code, out, _ = run(capsys, ["polygon", "--poly", EX1, "--modulus", "35",
                                "--level", "2"])
    assert out.strip() == "0 7\n2 4\nside 3/2 0 2"
    svg = tmp_path / "poly.svg"
    code, _, _ = run(capsys, ["polygon", "--poly", EX1, "--modulus", "35",
                              "--level", "1", "--svg", str(svg)])
    assert code == 0 and svg.read_text().startswith("<svg")


def test_poly_from_file_and_stdin(capsys, tmp_path, monkeypatch):
    path = tmp_path / "poly.txt"
    path.write_text("1, 0, 1\n")
    code, out, _ = run(capsys, ["basis", "--poly", str(path)])
    assert code == 0
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("1 0 1"))
    code, out, _ = run(capsys, ["basis", "--poly", "-"])
    assert code == 0


def test_verify_cli(capsys):
    code, out, _ = run(capsys, ["verify", "--poly", EX1,
                                "--known-primes", "5,7"])
    assert code == 0
    checks = json.loads(out)
    assert all(c["status"] == "pass" for c in checks)


def test_seed_byte_stability(capsys):
    a = run(capsys, ["basis", "--poly", EX1, "--seed", "7"])[1]
    b = run(capsys, ["basis", "--poly", EX1, "--seed", "7"])[1]
    assert a == b
