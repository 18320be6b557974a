"""Čech hypercohomology on small toric pairs, against hand computations."""
import numpy as np
import pytest

from logfrob.algebra.exactlin import PrimeField
from logfrob.core.cech import (
    Atlas,
    CechCochain,
    CohomologyBasis,
    Selector,
    alternating_sort,
    euler_audit,
    filtered_dims,
    hypercohomology,
    mu_check_global,
    shell_audit,
    sheaf_cohomology,
    total_differential,
    weight_complex,
)
from logfrob.errors import NotACocycle, RadiusTooSmall
from logfrob.geometry.logdr import FormSum
from logfrob.geometry.toricgeom import DivisorSet


@pytest.fixture
def gm(p1, f5):
    """P¹ with D = {0, ∞}: the multiplicative group."""
    return Atlas(p1, DivisorSet.of([0, 1]), f5)


@pytest.fixture
def p1_bare(p1, f5):
    return Atlas(p1, DivisorSet(), f5)


def test_alternating_sort():
    assert alternating_sort((2, 0, 1)) == (1, (0, 1, 2))
    assert alternating_sort((1, 0)) == (-1, (0, 1))
    assert alternating_sort((1, 1)) == (0, None)


def test_multiplicative_group_cohomology(gm):
    """H^*(G_m) lives in weight 0: (1, 1, 0)."""
    wc = weight_complex(gm, (0,), "dR")
    assert wc.complex.dims == {0: 2, 1: 3, 2: 1}
    assert hypercohomology(gm, (0,)).dims == {0: 1, 1: 1, 2: 0}


@pytest.mark.parametrize("m", [(1,), (-1,), (5,), (-5,), (2,)])
def test_nonzero_weights_are_acyclic(gm, m):
    assert not any(hypercohomology(gm, m).dims.values())
    assert shell_audit(gm)(m)


def test_projective_line_cohomology(p1_bare):
    assert hypercohomology(p1_bare, (0,)).dims == {0: 1, 1: 0, 2: 1}
    assert sheaf_cohomology(p1_bare, (0,), 1) == {0: 0, 1: 1}
    assert sheaf_cohomology(p1_bare, (0,), 0) == {0: 1, 1: 0}


def test_sheaf_cohomology_of_log_forms(gm):
    assert sheaf_cohomology(gm, (0,), 1) == {0: 1, 1: 0}
    assert sheaf_cohomology(gm, (0,), 0) == {0: 1, 1: 0}
    assert sheaf_cohomology(gm, (0,), 1, l=0) == {0: 0, 1: 1}


def test_weight_zero_subcomplex(gm):
    """W_0 Ω(log D) is Ω_X, so its hypercohomology is that of P¹."""
    assert hypercohomology(gm, (0,), Selector(w=0)).dims == {0: 1, 1: 0, 2: 1}
    assert not shell_audit(gm)((0,))


def test_total_differential_squares_to_zero(gm, f5):
    c = CechCochain(
        f5,
        1,
        {
            ((0,), 0): FormSum.function(f5, 1, {(1,): 1, (2,): 3}),
            ((1,), 0): FormSum.function(f5, 1, {(-1,): 2}),
            ((0,), 1): FormSum.monomial(f5, 1, (3,), (0,)),
        },
    )
    assert total_differential(gm, total_differential(gm, c)).is_zero()


@pytest.mark.parametrize("divisor, m", [([0, 1], (0, 0)), ([0], (1, 0)), ([], (0, 0))])
def test_matrix_matches_cochain_differential(p2, f5, divisor, m):
    atlas = Atlas(p2, DivisorSet.of(divisor), f5)
    wc = weight_complex(atlas, m, "dR")
    for k in wc.complex.degrees:
        for index in range(wc.dim(k)):
            c = wc.basis_cochain(k, index)
            assert wc.vector(c, k).tolist() == np.eye(wc.dim(k), dtype=np.int64)[index].tolist()
            image = wc.vector(total_differential(atlas, c), k + 1) if wc.dim(k + 1) else np.zeros(0, dtype=np.int64)
            assert image.tolist() == wc.complex.differential(k)[:, index].tolist()


def test_higgs_complex_is_gr_of_dr(p2, f5):
    atlas = Atlas(p2, DivisorSet.of([0]), f5)
    for m in [(0, 0), (1, 0), (-1, 1)]:
        dr = weight_complex(atlas, m, "dR").complex
        higgs = weight_complex(atlas, m, "higgs").complex
        assert np.all([np.array_equal(dr.gr_fil().differential(k), higgs.differential(k)) for k in dr.degrees])


def test_class_of_representative(gm, f5):
    basis = CohomologyBasis(gm, [(0,)])
    assert basis.dim(1) == 1
    rep = basis.representative(1, 0)
    wc = weight_complex(gm, (0,), "dR")
    shifted = rep + total_differential(gm, wc.basis_cochain(0, 0))
    result = basis.class_of(shifted, 1)
    assert result.coords.tolist() == [1]
    assert total_differential(gm, result.primitive) == shifted - rep


def test_class_of_rejects_non_cocycles(gm):
    basis = CohomologyBasis(gm, [(0,)])
    wc = weight_complex(gm, (0,), "dR")
    with pytest.raises(NotACocycle):
        basis.class_of(wc.basis_cochain(0, 0), 0)


def test_class_outside_the_basis_weights(gm):
    rep = CohomologyBasis(gm, [(0,)]).representative(1, 0)
    with pytest.raises(RadiusTooSmall):
        CohomologyBasis(gm, [(1,)]).class_of(rep, 1)


def test_filtrations_on_h1_of_gm(gm):
    """dlog x spans H¹: pure of weight 1 and Hodge level 1."""
    assert filtered_dims(gm, (0,), 1) == {"W": [0, 1], "Fil": [1, 1, 0], "W_start": 0, "Fil_start": 0}


def test_euler_audit(gm):
    assert euler_audit(gm, (0,))["status"] == "PASS"


@pytest.mark.parametrize("l", [0, 1, 2])
def test_truncation_at_p_equals_two(p1, l):
    atlas = Atlas(p1, DivisorSet.of([0, 1]), PrimeField(2))
    result = mu_check_global(atlas, (0,), l)
    assert result["status"] == "PASS"
