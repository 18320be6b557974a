"""Report rendering."""
import json
import sys

import numpy as np

from logfrob.cli.report import render, to_json, to_tsv, write_report

REPORT = {
    "input": {"id": "gm_p5"},
    "cohomology": {"dR": [1, 1, 0], "higgs": [1, 1, 0], "hodge": [{"i": 0, "j": 0, "dim": 1}]},
    "weight_ss": {"W": {"pages": [{"r": 1, "spots": [{"i": -1, "j": 2, "dim": 2, "d_rank": 1}]}]}},
    "checks": {"cartier": {"status": "PASS"}},
    "status": "PASS",
}


def test_json_is_stable_and_handles_numpy():
    text = to_json({"b": np.int64(3), "a": np.array([[1, 2]]), "c": np.bool_(True), "d": {2, 1}})
    assert text.endswith("\n")
    assert json.loads(text) == {"a": [[1, 2]], "b": 3, "c": True, "d": [1, 2]}
    assert text.index('"a"') < text.index('"b"')


def test_tsv_rows():
    lines = to_tsv(REPORT).splitlines()
    assert lines[0] == "spec\ttable\tkey\tdegree\tvalue"
    assert "gm_p5\tdR\t-\t1\t1" in lines
    assert "gm_p5\thiggs\t-\t2\t0" in lines
    assert "gm_p5\thodge\ti=0\t0\t1" in lines
    assert "gm_p5\tW_E1\ti=-1\t2\t2" in lines
    assert "gm_p5\tcheck\tcartier\t-\tPASS" in lines


def test_tsv_concatenates_gallery_members():
    other = dict(REPORT, input={"id": "other"})
    lines = to_tsv({"members": [REPORT, other]}).splitlines()
    assert sum(1 for line in lines if line.startswith("other\t")) == sum(1 for line in lines if line.startswith("gm_p5\t"))
    assert lines.count("spec\ttable\tkey\tdegree\tvalue") == 1


def test_write_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    text = write_report(REPORT, str(out))
    assert out.read_text(encoding="utf-8") == text == render(REPORT)
    assert capsys.readouterr().out == ""
    write_report(REPORT, None, "tsv", sys.stdout)
    assert capsys.readouterr().out.startswith("spec\t")
