import csv
import io
import json

import pytest

from gradpi.cli import main
from gradpi.grading import Grading, verify_grading


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pi1_text(capsys):
    code, out, _ = run(capsys, "pi1", "k3")
    assert code == 0
    assert out.strip() == "C2 x C3"


def test_pi1_json_carries_certificate(capsys):
    code, out, _ = run(capsys, "pi1", "M2", "--radius", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["certificate"]["radius"] == 4


def test_k4_table_csv(capsys):
    code, out, _ = run(capsys, "report", "k4-table", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6
    assert rows[1] == ["C2*C2", "2", "1,1"]


def test_build_then_verify_roundtrip(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert main(["catalog", "build", "fine-M3", "--out", str(path)]) == 0
    g = Grading.from_json(json.loads(path.read_text()))
    assert verify_grading(g)
    code, out, _ = run(capsys, "verify", "grading", "--file", str(path))
    assert code == 0 and "ok" in out


def test_bad_grading_exits_2_with_witness(tmp_path, capsys):
    good = tmp_path / "g.json"
    main(["catalog", "build", "good-M2-C2", "--out", str(good)])
    data = json.loads(good.read_text())
    data["degrees"]["E1,1"] = "t"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    capsys.readouterr()
    code, out, _ = run(capsys, "verify", "grading", "--file", str(bad))
    assert code == 2
    report = json.loads(out)
    assert "E1,1" in report["witness"]["violation"]


def test_usage_errors(capsys):
    assert run(capsys, "pi1", "bogus")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "pi1", "k2", "--no-such-flag")[0] == 1


def test_determinism(capsys):
    a = run(capsys, "catalog", "verify", "--all", "--format", "json", "--seed", "3")[1]
    b = run(capsys, "catalog", "verify", "--all", "--format", "json", "--seed", "3")[1]
    assert a == b and json.loads(a)["schema"] == 1


@pytest.mark.parametrize("argv", [["smash", "group-C3"], ["smash", "good-M2-free", "--radius", "2"], ["report", "no-universal", "k4"], ["report", "common-quotient", "2"], ["catalog", "list"]])
def test_other_verbs(capsys, argv):
    assert run(capsys, *argv)[0] == 0
