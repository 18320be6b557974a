"""Logging, spec decoding and the run history."""
import pytest

from logfrob.utils import encoding
from logfrob.utils.database import RunDatabase, get_database, reset_database
from logfrob.utils.helpers import make_logger, null_log, safe_print


def test_logger_writes_the_run_file(tmp_path, capsys):
    log, path = make_logger("run-7", str(tmp_path / "logs"))
    log("hello")
    log("again")
    lines = open(path, encoding="utf-8").read().splitlines()
    assert len(lines) == 2
    assert "[run-7] hello" in lines[0]
    assert "[run-7] hello" in capsys.readouterr().err


def test_logger_without_file(capsys):
    log, path = make_logger("quiet", None, echo=False)
    log("nothing")
    assert path is None
    assert capsys.readouterr().err == ""


def test_safe_print(capsys):
    safe_print("ψ ok")
    assert capsys.readouterr().out == "ψ ok\n"


def test_decode_utf8_and_bom():
    assert encoding.decode_spec_bytes('{"id": "ψ"}'.encode("utf-8"), null_log) == '{"id": "ψ"}'
    assert encoding.decode_spec_bytes(b'\xef\xbb\xbf{"p": 5}', null_log) == '{"p": 5}'


def test_decode_detected_encoding(monkeypatch):
    messages = []
    monkeypatch.setattr(encoding.chardet, "detect", lambda raw: {"encoding": "latin-1", "confidence": 0.9})
    assert encoding.decode_spec_bytes(b'{"id": "caf\xe9"}', messages.append) == '{"id": "café"}'
    assert "latin-1" in messages[0]


@pytest.mark.parametrize("detected", [{"encoding": None, "confidence": 0.0}, {"encoding": "no-such-codec", "confidence": 0.5}])
def test_decode_falls_back_to_replacement(monkeypatch, detected):
    monkeypatch.setattr(encoding.chardet, "detect", lambda raw: detected)
    text = encoding.decode_spec_bytes(b'{"id": "caf\xe9"}', null_log)
    assert text.startswith('{"id": "caf')
    assert "�" in text


def test_read_spec_text(tmp_path):
    path = tmp_path / "spec.json"
    path.write_bytes('{"p": 7}'.encode("utf-8"))
    assert encoding.read_spec_text(str(path), null_log) == '{"p": 7}'


def test_run_history(tmp_path):
    db = RunDatabase(str(tmp_path / "runs.db"))
    assert db.get_next_run_id() == "run-1"
    db.create_run("run-1", "verify", "gm_p5")
    assert db.get_run("run-1")["status"] == "running"
    assert db.finish_run("run-1", "PASS", 0, report="out.json", details={"seconds": 1.5})
    run = db.get_run("run-1")
    assert run["exit_code"] == 0
    assert run["details"] == {"seconds": 1.5}
    assert db.get_next_run_id() == "run-2"
    assert not db.finish_run("run-9", "FAIL", 1)
    assert db.get_run("run-9") is None
    db.create_run("run-2", "describe")
    assert [r["run_id"] for r in db.recent_runs()] == ["run-2", "run-1"]
    db.close()


def test_singleton_follows_the_environment(isolated_env):
    db = get_database()
    assert db is get_database()
    assert db.db_path == str(isolated_env / "runs.db")
    reset_database()
    assert get_database() is not db
