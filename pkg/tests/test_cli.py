import json
import os
import subprocess
import sys

import pytest

from twistcoh.cli import main
from twistcoh.corpus import HERE, build, filename, load_all
from twistcoh.problem import load, loads

CEVA = os.path.join(HERE, "ceva.json")
GENERIC4 = os.path.join(HERE, "arr_generic4.json")
GENERIC5 = os.path.join(HERE, "aomoto_generic5.json")


def _strip_timing(doc):
    if isinstance(doc, dict):
        return {k: _strip_timing(v) for k, v in doc.items() if k != "timing"}
    if isinstance(doc, list):
        return [_strip_timing(v) for v in doc]
    return doc


# the bundled corpus ---------------------------------------------------------------------


def test_bundled_files_match_the_builder():
    built = build()
    assert len(built) == 16
    for pf in built:
        with open(os.path.join(HERE, filename(pf.id)), encoding="utf-8") as fh:
            assert fh.read() == pf.dumps()


def test_problem_files_round_trip():
    for pf in load_all():
        text = pf.dumps()
        assert loads(text).dumps() == text


def test_only_selects_by_id_and_prefix():
    assert [pf.id for pf in load_all("l8")] == ["l8"]
    assert [pf.id for pf in load_all("conics")] == [
        "conics", "conics.lines1", "conics.lines2", "conics.offpencil", "conics.affine"]
    assert len(load_all("ceva")) == 1


# exit codes --------------------------------------------------------------------------------


def test_verify_passes(capsys):
    assert main(["verify", CEVA]) == 0
    out = capsys.readouterr().out
    assert out.startswith("[PASS] ceva")


def test_verbs_restrict_modes(capsys):
    assert main(["arrangement", GENERIC4]) == 0
    assert main(["aomoto", GENERIC5]) == 0
    assert main(["aomoto", CEVA]) == 2
    assert "takes aomoto problems" in capsys.readouterr().err


def test_failed_expectation_exits_one(tmp_path):
    doc = json.loads(load(CEVA).dumps())
    for e in doc["expectations"]:
        if e["name"] == "arrangement_h1":
            e["value"] = 2
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["verify", str(path)]) == 1


def test_usage_and_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["verify", str(bad)]) == 2
    assert "parse error" in capsys.readouterr().err
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    assert main(["corpus", "--only", "9.9"]) == 2
    assert main(["corpus", "--only", "l8", "--jobs", "0"]) == 2
    doc = json.loads(load(CEVA).dumps())
    doc["payload"]["polynomials"][0] = "x0^2+x1"
    path = tmp_path / "inhomogeneous.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["verify", str(path)]) == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


# reports ---------------------------------------------------------------------------------------


def test_reports_are_deterministic_up_to_timing(capsys):
    docs = []
    for _ in range(2):
        assert main(["verify", CEVA, "--json", "-", "--seed", "3"]) == 0
        docs.append(json.loads(capsys.readouterr().out))
    assert _strip_timing(docs[0]) == _strip_timing(docs[1])
    assert docs[0]["id"] == "ceva" and "timing" in docs[0]


def test_corpus_only_json(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["corpus", "--only", "l8", "--json", str(out)]) == 0
    assert "1/1 examples passed" in capsys.readouterr().out
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["passed"] and [r["id"] for r in doc["reports"]] == ["l8"]


def test_emit_forms(capsys):
    assert main(["corpus", "--only", "ceva", "--emit-forms", "--json", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    text = json.dumps(doc)
    assert '"eta"' in text and "dlog" not in text


def test_parallel_runs_keep_order(capsys):
    assert main(["corpus", "--only", "conics", "--jobs", "3", "--json", "-"]) == 0
    parallel = json.loads(capsys.readouterr().out)
    assert main(["corpus", "--only", "conics", "--json", "-"]) == 0
    serial = json.loads(capsys.readouterr().out)
    assert [r["id"] for r in parallel["reports"]] == [pf.id for pf in load_all("conics")]
    assert _strip_timing(parallel) == _strip_timing(serial)


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "twistcoh.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("twistcoh ")
