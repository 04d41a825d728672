import json
import subprocess
import sys

import pytest

from conftest import DATA
from sepkit.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def d(name):
    return DATA / name


def test_dyck_separate_and_verify(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "dyck", "separate", "--t", d("u0_T.json"), "--s", d("u0_S.json"), "--out", rep)
    assert code == 0 and "0 violations" in out
    doc = json.loads(rep.read_text())
    assert doc["outcome"] == "code-emitted" and doc["verification"]["violations"] == 0
    code, out, _ = run(capsys, "dyck", "verify", "--report", rep, "--t", d("u0_T.json"), "--s", d("u0_S.json"),
                       "--json")
    assert code == 0 and json.loads(out)["reproduced"]


def test_dyck_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "dyck", "separate", "--t", d("u0_T.json"), "--s", d("u0_S.json"), "--out", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_dyck_witness(capsys):
    code, out, _ = run(capsys, "dyck", "separate", "--t", d("full.json"), "--s", d("full.json"), "--json")
    assert code == 2
    assert json.loads(out)["witness"]["x"] == "(0)"


def test_dyck_corrupted_leaf_fails(capsys, tmp_path):
    rep = tmp_path / "r.json"
    run(capsys, "dyck", "separate", "--t", d("u0_T.json"), "--s", d("u0_S.json"), "--out", rep)
    doc = json.loads(rep.read_text())
    doc["code"] = {"leaf": 1}     # the whole space meets B
    rep.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "dyck", "verify", "--report", rep, "--t", d("u0_T.json"), "--s", d("u0_S.json"))
    assert code == 1 and "differs" in out


def test_dyck_state_bound(capsys, monkeypatch):
    monkeypatch.setenv("SEPKIT_MAX_STATES", "1")
    code, _, err = run(capsys, "dyck", "separate", "--t", d("u0_T.json"), "--s", d("u0_S.json"))
    assert code == 1 and "exceed" in err
    monkeypatch.setenv("SEPKIT_MAX_STATES", "many")
    assert run(capsys, "dyck", "separate", "--t", d("u0_T.json"), "--s", d("u0_S.json"))[0] == 1


def test_preiss_separate_and_verify(capsys, tmp_path):
    rep = tmp_path / "p.json"
    code, _, _ = run(capsys, "preiss", "separate", "--a", d("unit_scheme.json"), "--b", d("point2.json"),
                     "--out", rep)
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["verification"]["violations"] == [] and doc["verification"]["cgc"]["ok"]
    code, out, _ = run(capsys, "preiss", "verify", "--report", rep, "--a", d("unit_scheme.json"),
                       "--b", d("point2.json"), "--json")
    assert code == 0 and json.loads(out)["reproduced"]
    rep2 = tmp_path / "p2.json"
    run(capsys, "preiss", "separate", "--a", d("unit_scheme.json"), "--b", d("point2.json"), "--out", rep2)
    assert rep.read_bytes() == rep2.read_bytes()


def _walk(o):
    if isinstance(o, dict):
        yield o
        for v in o.values():
            yield from _walk(v)
    elif isinstance(o, list):
        for v in o:
            yield from _walk(v)


def test_preiss_mutated_radius_fails(capsys, tmp_path):
    rep = tmp_path / "p.json"
    run(capsys, "preiss", "separate", "--a", d("unit_scheme.json"), "--b", d("point2.json"), "--out", rep)
    doc = json.loads(rep.read_text())
    hits = [o for o in _walk(doc["code"]) if "open_nbhd" in o]
    assert hits
    for o in hits:
        o["open_nbhd"]["radius"] = "0/1"
    rep.write_text(json.dumps(doc))
    code, _, err = run(capsys, "preiss", "verify", "--report", rep, "--a", d("unit_scheme.json"),
                       "--b", d("point2.json"))
    assert code == 1 and "open_nbhd" in err
    for o in hits:
        o["open_nbhd"]["radius"] = "8/1"     # swallows B
    rep.write_text(json.dumps(doc))
    code, _, _ = run(capsys, "preiss", "verify", "--report", rep, "--a", d("unit_scheme.json"),
                     "--b", d("point2.json"))
    assert code == 1


def test_preiss_fuel_and_bad_scheme(capsys):
    assert run(capsys, "preiss", "separate", "--a", d("unit_scheme.json"), "--b", d("point2.json"),
               "--fuel", 1)[0] == 3
    code, out, _ = run(capsys, "preiss", "separate", "--a", d("swapped_scheme.json"), "--b", d("point2.json"))
    assert code == 1 and json.loads(out)["validation"]["clauses"]["d"] == "violated"


def test_codes(capsys):
    assert run(capsys, "codes", "eval", "--code", d("u0.json"), "--point", "1(0)")[1].strip() == "true"
    assert run(capsys, "codes", "eval", "--code", d("u0.json"), "--point", "0(1)")[1].strip() == "false"
    assert run(capsys, "codes", "eval", "--code", d("u0_and_u1.json"), "--point", "11(0)")[1].strip() == "true"
    assert run(capsys, "codes", "norm", "--code", d("u0_and_u1.json"))[1].strip() == "1"
    assert run(capsys, "codes", "monotone", "--code", d("u0_and_u1.json"))[1].strip() == "true"


def test_borel_code_detected(capsys, tmp_path):
    p = tmp_path / "b.json"
    p.write_text(json.dumps({"co_cylinder": "1"}))
    assert run(capsys, "codes", "eval", "--code", p, "--point", "0(1)")[1].strip() == "true"
    assert run(capsys, "codes", "monotone", "--code", p)[1].strip() == "false"


def test_geom_orders_schemes(capsys, tmp_path):
    assert run(capsys, "geom", "hull-dist", "--p", d("tri.json"), "--x", "1,1")[1].strip() == "1/2"
    assert run(capsys, "geom", "hull-dist", "--p", d("tri.json"), "--x", "2,0")[1].strip() == "1"
    assert run(capsys, "orders", "kb", "--u", "0,1", "--v", "0")[1].strip() == "less"
    assert run(capsys, "orders", "kb", "--u", "1", "--v", "0,5")[1].strip() == "greater"
    assert run(capsys, "orders", "kb", "--u", "", "--v", "")[1].strip() == "equal"
    assert run(capsys, "orders", "lo-of-tree", "--tree", "[[],[0],[1]]")[1].strip() == "2 < 4 < 1"
    out = tmp_path / "s.json"
    assert run(capsys, "schemes", "build-good", "--t", d("point2.json"), "--dim", 1, "--depth", 3,
               "--cube", 3, "--out", out)[0] == 0
    assert run(capsys, "schemes", "validate", "--scheme", out, "--exhaustive")[1].strip() == "good"
    assert run(capsys, "schemes", "validate", "--scheme", d("swapped_scheme.json"))[0] == 1


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "dyck", "separate", "--t", tmp_path / "nope.json", "--s", d("u0_S.json"))
    assert code == 1 and "nope.json" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": [\n  "a",\n}')
    code, _, err = run(capsys, "dyck", "separate", "--t", bad, "--s", d("u0_S.json"))
    assert code == 1 and "line 3" in err
    assert run(capsys, "codes", "eval", "--code", d("u0.json"), "--point", "101")[0] == 1
    assert run(capsys, "orders", "lo-of-tree", "--tree", "[[0]]")[0] == 1
    assert run(capsys, "orders", "kb", "--u", "a", "--v", "0")[0] == 1
    assert run(capsys, "dyck", "separate")[0] == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sepkit", "orders", "kb", "--u", "0", "--v", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "less"
