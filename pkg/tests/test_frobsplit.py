"""Frobenius lifts, the splitting data, ψ on cohomology and the η homotopies."""
import numpy as np
import pytest

from logfrob.algebra.exactlin import PrimeField
from logfrob.core.cech import Atlas, CechCochain, total_differential
from logfrob.core.frobsplit import (
    FrobLift,
    MorphismData,
    SplitData,
    cup,
    functoriality_certificate,
    generator,
    homotopy_eta,
    phi,
    phi_is_closed,
    psi_on_cohomology,
    psi_weight_check,
    random_lift,
    reexpand_over_zp2,
    validate_lift,
)
from logfrob.errors import DegreeTooHigh, NotRegular
from logfrob.geometry.logdr import FormSum
from logfrob.geometry.toricgeom import DivisorSet, ToricMorphism


@pytest.fixture
def gm(p1, f5):
    return Atlas(p1, DivisorSet.of([0, 1]), f5)


@pytest.fixture
def p2_pair(p2, f5):
    return Atlas(p2, DivisorSet.of([0, 1]), f5)


@pytest.fixture
def p2_full(p2, f5):
    return Atlas(p2, DivisorSet.of([0, 1, 2]), f5)


def test_canonical_lift(gm):
    lift = FrobLift.canonical(gm)
    assert lift.is_canonical()
    report = validate_lift(lift)
    assert report.canonical and report.perturbed_coordinates == 0
    assert lift.to_dict() == {"name": "canonical", "perturbations": []}


def test_perturbations_must_be_regular(gm):
    with pytest.raises(NotRegular):
        validate_lift(FrobLift(gm, {0: {0: {(-1,): 1}}}))
    with pytest.raises(NotRegular):
        validate_lift(FrobLift(gm, {0: {1: {(0,): 1}}}))
    with pytest.raises(NotRegular):
        validate_lift(FrobLift(gm, {7: {0: {(0,): 1}}}))


def test_multiples_of_p_are_canonical(gm):
    assert FrobLift(gm, {0: {0: {(1,): 5}}}).is_canonical()


def test_random_lifts_are_valid_and_deterministic(p2_pair):
    a = random_lift(p2_pair, np.random.default_rng(7), max_degree=2)
    b = random_lift(p2_pair, np.random.default_rng(7), max_degree=2)
    assert a.perturbations == b.perturbations
    assert validate_lift(a).charts == 3


def test_reexpansion_over_z_mod_p_squared(p2_pair):
    lift = random_lift(p2_pair, np.random.default_rng(3), max_degree=3)
    assert reexpand_over_zp2(lift) == lift.perturbations
    hand = FrobLift(p2_pair, {1: {2: {(0, 0): 2, (1, 0): 4}}})
    assert reexpand_over_zp2(hand) == {1: {2: {(0, 0): 2, (1, 0): 4}}}


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_splitting_laws(p2_pair, seed):
    lift = random_lift(p2_pair, np.random.default_rng(seed), max_degree=2)
    assert SplitData.of(lift).check()["status"] == "PASS"


def test_splitting_laws_on_two_hundred_seeded_lifts(gm, p2_full, f5):
    """Half on P¹, half on P², perturbations of degree 1 to 3 from one seeded generator."""
    rng = np.random.default_rng(2024)
    seen = 0
    for atlas in (gm, p2_full):
        n = atlas.n
        forms = [FormSum.monomial(f5, n, [0] * n, J) for J in [(0,), (1,), (0, 1)] if max(J) < n]
        for idx in range(100):
            lift = random_lift(atlas, rng, max_degree=1 + idx % 3, name=f"random-{idx}")
            assert SplitData.of(lift).check()["status"] == "PASS", lift.name
            assert reexpand_over_zp2(lift) == lift.perturbations
            assert all(phi_is_closed(lift, omega) for omega in forms), lift.name
            seen += 1
    assert seen == 200


def test_canonical_phi_on_dlog(gm, f5):
    """With the canonical lift ζ fixes dlog x and h vanishes."""
    lift = FrobLift.canonical(gm)
    out = phi(lift, generator(gm, 0))
    assert sorted(out.entries) == [((0,), 1), ((1,), 1)]
    assert out.component((0,), 1) == generator(gm, 0)


@pytest.mark.parametrize("indices", [(0,), (1,), (0, 1)])
def test_phi_is_closed(p2_pair, f5, indices):
    lift = random_lift(p2_pair, np.random.default_rng(11), max_degree=2)
    omega = FormSum.monomial(f5, 2, (1, -1), indices)
    assert phi_is_closed(lift, omega)


def test_phi_needs_degree_below_p(p1xp1):
    atlas = Atlas(p1xp1, DivisorSet.of([0, 1, 2, 3]), PrimeField(2))
    top = FormSum.monomial(atlas.field, 2, (0, 0), (0, 1))
    with pytest.raises(DegreeTooHigh):
        phi(FrobLift.canonical(atlas), top)


def test_cup_sign(gm, f5):
    one = FormSum.function(f5, 1, {(0,): 1})
    dlog = generator(gm, 0)
    a = CechCochain(f5, 1, {((0,), 1): dlog})
    b = CechCochain(f5, 1, {((0, 1), 0): one})
    assert cup(gm, a, b).component((0, 1), 1) == dlog.scale(-1)
    assert cup(gm, b, a).is_zero()


@pytest.mark.parametrize("degree", [0, 1])
def test_psi_on_gm(gm, degree):
    result = psi_on_cohomology(FrobLift.canonical(gm), degree, [(0,)])
    assert result.matrix.shape == (1, 1)
    assert result.matrix[0, 0] % 5
    assert all(row["status"] == "PASS" for row in psi_weight_check(result).values())


def test_psi_in_degree_zero_is_the_identity(gm):
    assert psi_on_cohomology(FrobLift.canonical(gm), 0, [(0,)]).matrix.tolist() == [[1]]


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_psi_is_independent_of_the_lift(p2_full, degree):
    support = [(0, 0)]
    reference = psi_on_cohomology(FrobLift.canonical(p2_full), degree, support).matrix
    for seed in range(3):
        lift = random_lift(p2_full, np.random.default_rng(seed), max_degree=3)
        assert np.array_equal(psi_on_cohomology(lift, degree, support).matrix, reference)


def test_identity_homotopy_between_equal_lifts(gm):
    lift = FrobLift.canonical(gm)
    data = MorphismData.identity(lift, lift)
    assert data.chi == (0, 1)
    result = homotopy_eta(data, 1)
    assert result["status"] == "PASS"
    assert all(row["eta_zero"] for row in result["generators"])


def test_identity_homotopy_between_different_lifts(p2_pair):
    source = random_lift(p2_pair, np.random.default_rng(5), max_degree=2)
    data = MorphismData.identity(source, FrobLift.canonical(p2_pair))
    for i in (1, 2):
        result = homotopy_eta(data, i)
        assert result["status"] == "PASS"
    assert not all(row["eta_zero"] for row in homotopy_eta(data, 1)["generators"])


def test_homotopy_needs_degree_below_p(p1xp1):
    atlas = Atlas(p1xp1, DivisorSet(), PrimeField(2))
    lift = FrobLift.canonical(atlas)
    with pytest.raises(DegreeTooHigh):
        homotopy_eta(MorphismData.identity(lift, lift), 2)


def test_projection_homotopy(p1xp1, p1, f5):
    x = Atlas(p1xp1, DivisorSet.of([0, 2]), f5)
    y = Atlas(p1, DivisorSet.of([0, 1]), f5)
    f = ToricMorphism(((1, 0),), p1xp1, p1)
    data = MorphismData(f, FrobLift.canonical(x), FrobLift.canonical(y))
    assert data.chi == (0, 1, 1, 0)
    result = homotopy_eta(data, 1)
    assert result["status"] == "PASS"
    assert result["generators"][0]["eta_zero"]
    pulled = data.pull_cochain(CechCochain(f5, 1, {((0, 1), 0): FormSum.function(f5, 1, {(0,): 1})}))
    assert pulled.component((0, 1), 0) == FormSum.function(f5, 2, {(0, 0): 1})
    assert pulled.component((1, 2), 0).is_zero()


def test_functoriality_certificate_for_a_change_of_lift(gm):
    source = random_lift(gm, np.random.default_rng(2), max_degree=2)
    data = MorphismData.identity(source, FrobLift.canonical(gm))
    for degree in (0, 1):
        cert = functoriality_certificate(data, degree, [(0,)], [(0,)])
        assert cert["status"] == "PASS"
        assert cert["pullback_dR"] == [[1]]
        assert all(row["eta_identity"] for row in cert["classes"])


def test_total_differential_of_phi_in_top_degree(gm):
    lift = random_lift(gm, np.random.default_rng(4), max_degree=2)
    omega = FormSum.monomial(gm.field, 1, (2,), (0,))
    assert total_differential(gm, phi(lift, omega)).is_zero()
