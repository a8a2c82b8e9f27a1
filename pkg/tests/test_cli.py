from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from orthocurve.cli import main
from orthocurve.errors import InvalidInput, UnsupportedFamily
from orthocurve.report import CheckRequest, FamilySpec, build_family, execute_check, verify_report
from orthocurve.spindles import witness_from_dict


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def check_json(capsys, *argv):
    code, out, err = run(capsys, "check", *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_build_to_stdout_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--family", "ncp", "--n", "4")
    assert code == 0
    obj = json.loads(out)
    assert len(obj["elements"]) == 14 and obj["name"] == "NC4"
    path = tmp_path / "b3.json"
    assert run(capsys, "build", "--family", "boolean", "--n", "3", "-o", str(path))[0] == 0
    assert len(json.loads(path.read_text())["elements"]) == 8


@pytest.mark.parametrize("ctype,status", [("A4", "CAT0"), ("F4", "NotCAT0")])
def test_check_cat0(capsys, ctype, status):
    rep = check_json(capsys, "--family", "ncw", "--type", ctype, "--checks", "cat0")
    assert rep["schema"] == "orthocurve/1"
    v = rep["checks"]["cat0"]
    assert v["status"] == status
    if status == "NotCAT0":
        w = v["witness"]
        assert w["kind"] == "spindle" and w["girth"] == 6 and w["short"]
        assert all(e["cos_sq"] == "1/3" for e in w["edges"])


def test_check_boolean_spindles(capsys):
    rep = check_json(capsys, "--family", "boolean", "--n", "4", "--checks", "spindles")
    s = rep["checks"]["spindles"]
    assert s["count"] > 0 and s["girths"] == [6] and s["short_count"] == 0
    assert s["boundary_count"] == s["count"] and s["short_spindle"] is None
    assert all(math.isclose(x["length"], 2 * math.pi, abs_tol=1e-9) for x in s["spindles"])


def test_check_text_output(capsys):
    code, out, _ = run(capsys, "check", "--family", "partition", "--n", "4")
    assert code == 0
    assert "lattice: yes" in out and "modular: no" in out and "cat0: CAT0" in out


def test_check_input_file(capsys, tmp_path):
    path = tmp_path / "pi4.json"
    assert run(capsys, "build", "--family", "partition", "--n", "4", "-o", str(path))[0] == 0
    rep = check_json(capsys, "--input", str(path), "--checks", "validate,lattice,modular")
    assert rep["poset"]["size"] == 15 and rep["checks"]["modular"]["is_modular"] is False
    assert rep["poset"]["source"] == {"file": str(path)}


def test_check_non_lattice_file(capsys, tmp_path):
    bowtie6 = {
        "name": "bowtie6",
        "elements": [{"id": i, "label": s} for i, s in enumerate("0bdac1")],
        "covers": [[0, 1], [0, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 5], [4, 5]],
    }
    path = tmp_path / "bowtie6.json"
    path.write_text(json.dumps(bowtie6))
    rep = check_json(capsys, "--input", str(path))
    c = rep["checks"]
    assert c["lattice"]["is_lattice"] is False and c["modular"]["is_modular"] is None
    assert c["cat0"]["status"] == "NotCAT0" and c["cat0"]["witness"]["kind"] == "bowtie"
    assert c["spindles"]["short_spindle"]["girth"] == 4
    out = tmp_path / "rep.json"
    out.write_text(json.dumps(rep))
    assert run(capsys, "verify", str(out))[0] == 0


def test_out_of_scope_is_not_an_error(capsys):
    rep = check_json(capsys, "--family", "boolean", "--n", "5", "--checks", "cat0")
    assert rep["checks"]["cat0"]["status"] == "OutOfScope"


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--input", "/nonexistent/poset.json"],
        ["check", "--family", "ncw", "--type", "E8"],
        ["check", "--family", "ncw"],
        ["check", "--family", "boolean"],
        ["check", "--family", "boolean", "--n", "3", "--checks", "bogus"],
        ["check", "--family", "subspace", "--n", "2", "--q", "4"],
        ["build", "--family", "partition", "--n", "20"],
    ],
)
def test_input_errors_exit_nonzero(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_parse_error_exit(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2")
    assert run(capsys, "check", "--input", str(path))[0] == 2
    path.write_text(json.dumps({"elements": [{"id": 0}, {"id": 1}], "covers": [[0, 1], [1, 0]]}))
    code, _, err = run(capsys, "check", "--input", str(path))
    assert code == 2 and "CycleDetected" in err


def test_determinism(capsys):
    argv = ("--family", "ncw", "--type", "D4", "--checks", "validate,lattice,modular,cat0")
    a, b = check_json(capsys, *argv), check_json(capsys, *argv)
    a.pop("timing"), b.pop("timing")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_witness_round_trip(capsys, tmp_path):
    rep = check_json(capsys, "--family", "ncw", "--type", "H4", "--checks", "cat0")
    path = tmp_path / "h4.json"
    path.write_text(json.dumps(rep))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "re-validated" in out
    P = build_family(FamilySpec("ncw", type="H4"))
    w = witness_from_dict(P, rep["checks"]["cat0"]["witness"])
    assert w.short and w.girth == 6


def test_verify_detects_tampering(capsys, tmp_path):
    rep = check_json(capsys, "--family", "ncw", "--type", "D4", "--checks", "cat0")
    cyc = rep["checks"]["cat0"]["witness"]["cycle"]
    cyc[0], cyc[1] = cyc[1], cyc[0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(rep))
    assert run(capsys, "verify", str(path))[0] == 1
    assert verify_report({"schema": "other"}) == ["unexpected schema 'other'"]


def test_report_tables(capsys):
    code, out, _ = run(capsys, "report", "coxeter", "--json")
    assert code == 0
    rows = {r["poset"]: r for r in json.loads(out)["rows"]}
    assert [rows[f"NC({t})"]["cat0"] for t in ("A4", "B4", "D4", "F4", "H4")] == [
        "CAT0", "CAT0", "NotCAT0", "NotCAT0", "NotCAT0",
    ]
    assert all(rows[f"NC({t})"]["witness_girth"] == 6 for t in ("D4", "F4", "H4"))
    code, out, _ = run(capsys, "report", "standard")
    assert code == 0 and "NC5" in out and "L4(F2)" in out


def test_request_validation():
    with pytest.raises(InvalidInput):
        CheckRequest(FamilySpec("boolean", n=3), checks=("nope",))
    with pytest.raises(InvalidInput):
        CheckRequest(FamilySpec("boolean", n=3), output="xml")
    with pytest.raises(UnsupportedFamily):
        execute_check(CheckRequest(FamilySpec("torus", n=3)))


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "orthocurve", "check", "--family", "ncp", "--n", "5", "--checks", "cat0"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and "cat0: CAT0" in res.stdout
