"""End-to-end runs: workspace building, tables, check orchestration and exit codes."""
import pytest

from logfrob.cli.gallery import gallery_spec
from logfrob.cli.spec_io import parse_spec
from logfrob.core import pipeline, verify
from logfrob.errors import LogFrobError, NoChartAssignment, NotComplete, NotSmooth, SpecParseError


def test_resolve_checks():
    assert pipeline.resolve_checks(None) == list(pipeline.CHECK_ORDER)
    assert pipeline.resolve_checks(["all"]) == list(pipeline.CHECK_ORDER)
    assert pipeline.resolve_checks(["cartier", "decomposition"]) == ["decomposition", "cartier"]
    with pytest.raises(SpecParseError):
        pipeline.resolve_checks(["cartier", "bogus"])


def test_exit_code():
    assert pipeline.exit_code({"status": "PASS"}) == 0
    assert pipeline.exit_code({"status": "SKIPPED"}) == 0
    assert pipeline.exit_code({"status": "FAIL"}) == 1


def test_run_gm():
    messages = []
    report = pipeline.run(gallery_spec("gm_p5"), checks=["cartier", "residues"], max_workers=1, log_func=messages.append)
    assert report["schema"] == "logfrob-report/1"
    assert report["input"]["id"] == "gm_p5"
    assert report["status"] == "PASS"
    assert report["summary"] == {"PASS": 2, "FAIL": 0, "SKIPPED": 0}
    assert list(report["checks"]) == ["cartier", "residues"]
    assert "timing" not in report
    assert report["cohomology"]["dR"] == [1, 1, 0]
    assert report["cohomology"]["higgs"] == [1, 1, 0]
    assert report["weight_ss"]["W"]["radius"] == 2
    assert report["weight_ss"]["W"]["abutment"] == [1, 1, 0]
    assert report["describe"]["cohomology_weights"] == [[0]]
    assert any("Overall summary" in m for m in messages)


def test_timing_is_opt_in():
    report = pipeline.run(gallery_spec("gm_p5"), checks=["residues"], max_workers=1, timing=True)
    assert set(report["timing"]) == {"residues", "total"}


def test_projective_plane_tables():
    ws = pipeline.build_workspace(gallery_spec("p2_p5_d0"), max_workers=1)
    tables = pipeline.cohomology(ws)
    assert tables["hodge"] == [{"i": i, "j": i, "dim": 1} for i in range(3)]
    assert tables["dR"] == [1, 0, 1, 0, 1]
    assert pipeline.weight_ss(ws)["Fil"]["radius"] == 1


def test_a_raising_suite_becomes_a_failed_section(monkeypatch):
    def broken(ws):
        raise LogFrobError("broken suite", where="test")

    def crashing(ws):
        raise RuntimeError("crash")

    monkeypatch.setitem(verify.SUITES, "cartier", broken)
    monkeypatch.setitem(verify.SUITES, "residues", crashing)
    report = pipeline.run(gallery_spec("gm_p5"), checks=["cartier", "residues"], max_workers=1)
    assert report["status"] == "FAIL"
    assert report["checks"]["cartier"]["error"]["message"] == "broken suite"
    assert report["checks"]["residues"]["error"]["error"] == "RuntimeError"
    assert pipeline.exit_code(report) == 1


def test_skipped_checks_do_not_fail_the_run():
    report = pipeline.run(gallery_spec("gm_p5"), checks=["vanishing", "functoriality"], max_workers=1)
    assert report["status"] == "SKIPPED"
    assert pipeline.exit_code(report) == 0


def test_input_errors_from_the_fan():
    bad = {"p": 5, "fan": {"rays": [[1, 0], [1, 2], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]]}}
    with pytest.raises(NotSmooth):
        pipeline.build_workspace(parse_spec(bad))
    line = {"p": 5, "fan": {"rays": [[1]], "max_cones": [[0]]}}
    with pytest.raises(NotComplete):
        pipeline.build_workspace(parse_spec(line))


def test_morphism_must_have_a_chart_assignment():
    spec = gallery_spec("proj_functoriality_p5")
    spec.divisor_rays = [0]
    with pytest.raises(NoChartAssignment):
        pipeline.build_workspace(spec)
