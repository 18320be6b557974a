"""Check suites on small toric pairs."""
import pytest

from logfrob.cli.gallery import gallery_spec
from logfrob.core import pipeline
from logfrob.core.verify import (
    FAIL,
    PASS,
    SKIPPED,
    cartier,
    combine,
    decomposition,
    diamond_rows,
    filtration_control,
    functoriality,
    hodge_numbers,
    homotopy,
    lifting_independence,
    mflc,
    residues,
    sample_lifts,
    section,
    splitting_laws,
    strictness_control,
    truncation,
    vanishing,
)
from logfrob.core.workspace import Workspace
from logfrob.geometry.toricgeom import Twist

P1_RAYS, P1_CONES = [[1], [-1]], [[0], [1]]
P2_RAYS, P2_CONES = [[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [0, 2]]


@pytest.fixture
def gm_ws():
    return Workspace.build("gm", 5, P1_RAYS, P1_CONES, [0, 1], max_workers=1)


def test_combine():
    assert combine([PASS, SKIPPED]) == PASS
    assert combine([SKIPPED, SKIPPED]) == SKIPPED
    assert combine([PASS, FAIL, SKIPPED]) == FAIL
    assert combine([]) == PASS
    assert section(SKIPPED, "why", x=1) == {"status": SKIPPED, "reason": "why", "x": 1}


def test_workspace_weights(gm_ws):
    assert gm_ws.cohomology_weights() == [(0,)]
    assert gm_ws.dr_weights() == [(0,)]
    assert gm_ws.degrees() == (0, 1, 2)
    assert (0,) in gm_ws.support()
    assert gm_ws.morphism_data() is None


def test_sample_lifts_are_seeded(gm_ws):
    first, second = sample_lifts(gm_ws, 2), sample_lifts(gm_ws, 2)
    assert [lift.name for lift in first] == ["canonical", "random-0", "random-1"]
    assert [l.perturbations for l in first] == [l.perturbations for l in second]


def test_gm_hodge_numbers(gm_ws):
    assert diamond_rows(hodge_numbers(gm_ws)) == [{"i": 0, "j": 0, "dim": 1}, {"i": 1, "j": 0, "dim": 1}]


def test_decomposition_on_gm(gm_ws):
    result = decomposition(gm_ws)
    assert result["status"] == PASS
    assert [row["dR"] for row in result["degrees"]] == [1, 1, 0]
    assert all(row["status"] == PASS for row in result["psi"])
    assert all(row["hodge_radius"] == 1 for row in result["e1"])


def test_decomposition_skips_when_dimension_reaches_p():
    ws = Workspace.build("p1xp1", 2, [[1, 0], [0, 1], [-1, 0], [0, -1]], [[0, 1], [1, 2], [2, 3], [0, 3]], [], max_workers=1)
    result = decomposition(ws)
    assert result["status"] == SKIPPED
    assert "not below p = 2" in result["reason"]


@pytest.mark.parametrize("suite", [splitting_laws, lifting_independence, homotopy])
def test_lift_suites_pass_on_gm(gm_ws, suite):
    assert suite(gm_ws, 2)["status"] == PASS


def test_splitting_laws_rows(gm_ws):
    rows = splitting_laws(gm_ws, 1)["lifts"]
    assert [row["lift"] for row in rows] == ["canonical", "random-0"]
    assert all(row["zp2_roundtrip"] and row["phi_failures"] == 0 for row in rows)


@pytest.mark.parametrize("suite", [cartier, residues, mflc])
def test_structure_suites_pass_on_gm(gm_ws, suite):
    assert suite(gm_ws)["status"] == PASS


def test_cartier_compares_truncated_sides_at_p_two():
    """dim 2 at p = 2: both sides keep form degrees 0 and 1 only."""
    ws = Workspace.build("p1xp1_p2", 2, [[1, 0], [0, 1], [-1, 0], [0, -1]], [[0, 1], [1, 2], [2, 3], [0, 3]], [0, 1, 2, 3], max_workers=1)
    result = cartier(ws)
    assert result["status"] == PASS
    row = next(r for r in result["frobenius_weights"] if r["weight"] == [0, 0])
    assert row["dR"] == [1, 2, 0, 0, 0]
    assert row["higgs"] == row["dR"]


def test_truncation_is_vacuous_in_low_dimension(gm_ws):
    result = truncation(gm_ws)
    assert result["status"] == PASS
    assert "identity" in result["reason"]


def test_truncation_at_p_two():
    ws = Workspace.build("p1_p2", 2, P1_RAYS, P1_CONES, [0], max_workers=1)
    result = truncation(ws)
    assert result["status"] == PASS
    assert "reason" not in result


def test_vanishing_needs_a_twist(gm_ws):
    assert vanishing(gm_ws) == {"status": SKIPPED, "reason": "no twist given"}


def test_vanishing_for_an_ample_twist():
    ws = Workspace.build("p2", 5, P2_RAYS, P2_CONES, [0, 1], twists=[Twist((0, 0, 1))], max_workers=1)
    result = vanishing(ws)
    assert result["status"] == PASS
    assert sorted(tuple(case["divisor"]) for case in result["cases"]) == [(), (0,), (0, 1), (1,)]


def test_vanishing_sweeps_every_boundary_subset_of_p2():
    spec = gallery_spec("p2_vanishing_p5")
    ws = pipeline.build_workspace(spec, max_workers=1)
    result = vanishing(ws)
    assert result["status"] == PASS
    cases = {(tuple(case["twist"]), tuple(case["divisor"])): case for case in result["cases"]}
    subsets = [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    for twist in [(0, 0, 1), (0, 0, 2)]:
        for sub in subsets:
            case = cases[(twist, sub)]
            assert case["ample"] and case["status"] == PASS, case
            assert case["nonvanishing"] == []
    assert len(cases) == 16


def test_vanishing_skips_a_negative_twist():
    ws = Workspace.build("p1", 5, P1_RAYS, P1_CONES, [], twists=[Twist((0, -3))], max_workers=1)
    result = vanishing(ws)
    assert result["status"] == SKIPPED
    assert result["reason"] == "no twist is ample"
    case = result["cases"][0]
    assert {"l": 1, "i": 1, "j": 1, "dim": 4} in case["nonvanishing"]


def test_controls(f5):
    assert strictness_control(f5)["status"] == PASS
    control = filtration_control(f5)
    assert control["status"] == PASS
    assert control["dims"] == {"f_d": 0, "f_rec": 0, "f_dstar": 1}


def test_functoriality_skips_without_morphism(gm_ws):
    assert functoriality(gm_ws)["status"] == SKIPPED


def test_functoriality_of_a_projection():
    ws = pipeline.build_workspace(gallery_spec("proj_functoriality_p5"), max_workers=1)
    result = functoriality(ws)
    assert result["status"] == PASS
    assert result["cases"][0]["chart_assignment"] == [0, 1, 1, 0]
    assert result["cases"][0]["eta_zero"]
    assert homotopy(ws, 1)["status"] == PASS
