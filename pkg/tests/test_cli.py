"""The command-line surface: subcommands, report files, exit codes and run history."""
import json
import os

import pytest

import main
from logfrob.core import verify
from logfrob.utils.database import get_database


def read_json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_no_command_prints_help(isolated_env, capsys):
    assert main.main([]) == 2
    assert "logfrob" in capsys.readouterr().err


def test_input_and_id_are_exclusive(isolated_env, tmp_path):
    with pytest.raises(SystemExit) as info:
        main.main(["describe", "--input", str(tmp_path / "x.json"), "--id", "gm_p5"])
    assert info.value.code == 2


def test_describe_to_file(isolated_env):
    out = isolated_env / "describe.json"
    assert main.main(["describe", "--id", "gm_p5", "--out", str(out)]) == 0
    report = read_json(out)
    assert report["describe"]["divisor_rays"] == [0, 1]
    assert "checks" not in report
    assert os.listdir(isolated_env / "logs") == ["run-1.log"]


def test_cohomology_to_stdout(isolated_env, capsys):
    assert main.main(["cohomology", "--id", "p2_p5_d0", "--threads", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["cohomology"]["dR"] == [1, 0, 1, 0, 1]


def test_weight_ss_tsv(isolated_env, capsys):
    assert main.main(["weight-ss", "--id", "gm_p5", "--format", "tsv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "spec\ttable\tkey\tdegree\tvalue"
    assert "gm_p5\tW_E1\ti=0\t0\t1" in lines


def test_verify_from_a_spec_file(isolated_env):
    spec = isolated_env / "gm.json"
    spec.write_text(json.dumps({"p": 5, "fan": {"rays": [[1], [-1]], "max_cones": [[0], [1]]}, "divisor_rays": [0, 1]}))
    out = isolated_env / "report.json"
    code = main.main(["verify", "--input", str(spec), "--checks", "cartier,residues", "--out", str(out), "--timing"])
    assert code == 0
    report = read_json(out)
    assert report["input"]["id"] == "gm"
    assert report["summary"]["PASS"] == 2
    assert "timing" in report
    run = get_database().get_run("run-1")
    assert run["command"] == "verify"
    assert run["exit_code"] == 0
    assert run["details"]["spec_id"] == "gm"


def test_a_failing_check_exits_one(isolated_env, monkeypatch):
    monkeypatch.setitem(verify.SUITES, "cartier", lambda ws: {"status": "FAIL"})
    out = isolated_env / "report.json"
    assert main.main(["verify", "--id", "gm_p5", "--checks", "cartier", "--out", str(out)]) == 1
    assert read_json(out)["status"] == "FAIL"
    assert get_database().get_run("run-1")["exit_code"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--id", "gm_p5", "--checks", "nonsense"],
        ["describe", "--id", "no_such_member"],
        ["describe"],
    ],
)
def test_input_errors_exit_two(isolated_env, capsys, argv):
    assert main.main(argv) == 2
    captured = capsys.readouterr()
    assert "error:" in captured.err
    assert json.loads(captured.out)["error"]["error"] == "SpecParseError"


def test_bad_spec_file_exits_two(isolated_env, capsys):
    spec = isolated_env / "bad.json"
    spec.write_text(json.dumps({"p": 6, "fan": {"rays": [[1], [-1]], "max_cones": [[0], [1]]}}))
    assert main.main(["verify", "--input", str(spec)]) == 2
    assert "prime" in capsys.readouterr().err


def test_non_smooth_fan_exits_two(isolated_env, capsys):
    spec = isolated_env / "cone.json"
    spec.write_text(
        json.dumps({"p": 5, "fan": {"rays": [[1, 0], [1, 2], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]]}})
    )
    assert main.main(["describe", "--input", str(spec)]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["error"] == "NotSmooth"


def test_gallery_member(isolated_env):
    out = isolated_env / "gallery.json"
    assert main.main(["gallery", "--id", "gm_p5", "--checks", "cartier", "--out", str(out)]) == 0
    report = read_json(out)
    assert [m["input"]["id"] for m in report["members"]] == ["gm_p5"]
    assert report["summary"] == {"PASS": 1, "FAIL": 0, "SKIPPED": 0}


def test_history_can_be_disabled(isolated_env, monkeypatch, capsys):
    monkeypatch.setenv("LOGFROB_DB", "")
    assert main.main(["describe", "--id", "gm_p5"]) == 0
    assert json.loads(capsys.readouterr().out)["describe"]["cohomology_weights"] == [[0]]
    assert not (isolated_env / "runs.db").exists()
