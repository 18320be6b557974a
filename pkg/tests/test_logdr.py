"""Log forms, residues, Gr^W decompositions and truncation."""
import numpy as np
import pytest

from logfrob.algebra.complexes import FilteredComplexFp
from logfrob.errors import BadFace, NotCompatible, NotInWeightLevel
from logfrob.geometry.logdr import (
    FormSum,
    LogContext,
    gr_weight_decompose,
    gr_weight_e1_degeneration,
    hodge_subspace,
    residue,
    residue_faces,
    truncate,
    truncation_mu_check,
    weight_subspace,
)
from logfrob.geometry.toricgeom import DivisorSet


def test_d_squares_to_zero(f5):
    f = FormSum.function(f5, 2, {(1, 2): 1, (-1, 3): 4})
    assert f.d().component((1, 2)).tolist() == [1, 2]
    assert f.d().d().is_zero()


def test_p_th_powers_are_closed(f5):
    assert FormSum.function(f5, 2, {(5, 0): 3, (0, -5): 1}).d().is_zero()


def test_leibniz_rule(f5):
    a = FormSum.function(f5, 2, {(1, 0): 1, (0, 1): 2})
    b = FormSum.monomial(f5, 2, (1, 1), (0,))
    lhs = a.wedge(b).d()
    rhs = a.d().wedge(b) + a.wedge(b.d())
    assert lhs == rhs


def test_monomial_signs(f5):
    assert FormSum.monomial(f5, 2, (0, 0), (1, 0)) == FormSum.monomial(f5, 2, (0, 0), (0, 1)).scale(-1)
    assert FormSum.monomial(f5, 2, (0, 0), (1, 1)).is_zero()
    assert FormSum.monomial(f5, 2, (2, 0), (0, 1), coeff=3).to_terms() == [((2, 0), (0, 1), 3)]


def test_forms_of_different_degree_do_not_add(f5):
    with pytest.raises(NotCompatible):
        FormSum.function(f5, 1, {(0,): 1}) + FormSum.monomial(f5, 1, (0,), (0,))


def test_pullback_along_projection(f5):
    dlog_x = FormSum.monomial(f5, 1, (0,), (0,))
    ft = np.array([[1, 0]], dtype=np.int64).T
    assert dlog_x.pullback(ft) == FormSum.monomial(f5, 2, (0, 0), (0,))


def test_residue_of_dlog(p1, f5):
    ctx = LogContext.of_charts(p1, (0,), DivisorSet.of([0, 1]), f5)
    dlog_x = FormSum.monomial(f5, 1, (0,), (0,))
    assert residue(dlog_x, (0,), ctx) == FormSum.function(f5, 1, {(0,): 1})
    assert residue(dlog_x, (1,), ctx).is_zero()
    assert residue_faces(ctx, 1) == [(0,)]


def test_residue_rejects_bad_faces(p1, p2, f5):
    ctx = LogContext.of_charts(p1, (0,), DivisorSet.of([0]), f5)
    with pytest.raises(BadFace):
        residue(FormSum.monomial(f5, 1, (0,), (0,)), (1,), ctx)
    ctx2 = LogContext.of_charts(p2, (0,), DivisorSet.of([0, 1, 2]), f5)
    with pytest.raises(BadFace):
        residue(FormSum.monomial(f5, 2, (0, 0), (0, 1)), (0, 1, 2), ctx2)


def test_residue_needs_the_weight_level(p2, f5):
    ctx = LogContext.of_charts(p2, (0,), DivisorSet.of([0, 1]), f5)
    top = FormSum.monomial(f5, 2, (0, 0), (0, 1))
    with pytest.raises(NotInWeightLevel):
        residue(top, (0,), ctx)
    assert residue(top, (0, 1), ctx) == FormSum.function(f5, 2, {(0, 0): 1})


def test_gr_weight_decomposition_is_bijective(p2, f5):
    ctx = LogContext.of_charts(p2, (0,), DivisorSet.of([0, 1]), f5)
    top = gr_weight_decompose(ctx, (0, 0), 2, 2)
    assert top.matrix.tolist() == [[1]]
    assert top.faces == ((0, 1),)
    middle = gr_weight_decompose(ctx, (0, 0), 1, 1)
    assert middle.matrix.shape == (2, 2)
    assert middle.faces == ((0,), (1,))
    assert weight_subspace(ctx, (0, 0), 1, 0).is_zero()


def test_hodge_subspace_is_stupid(p1, f5):
    ctx = LogContext.of_charts(p1, (0,), DivisorSet.of([0, 1]), f5)
    assert hodge_subspace(ctx, (0,), 1, 1).dim == 1
    assert hodge_subspace(ctx, (0,), 0, 1).is_zero()


def test_truncation_keeps_low_cohomology(f5):
    K = FilteredComplexFp(f5, {0: 1, 1: 2, 2: 1}, {0: [[1], [0]], 1: [[0, 1]]})
    T = truncate(K, 2)
    assert T.degrees == [0, 1]
    assert T.dims == {0: 1, 1: 1}
    assert T.cohomology_dims() == {0: 0, 1: 0}
    assert truncate(K, 5) is K


def test_truncation_commutes_with_gr_weight(p1, f2):
    ctx = LogContext.of_charts(p1, (0,), DivisorSet.of([0, 1]), f2)
    for l in (0, 1):
        result = truncation_mu_check(ctx, (0,), l, 2)
        assert result["status"] == "PASS"
        assert result["lhs"] == result["rhs"]


def test_gr_weight_e1_degeneration_detects_failure(f5):
    K = FilteredComplexFp(
        f5,
        {0: 1, 1: 2},
        {0: [[1], [1]]},
        w_labels={0: [0], 1: [0, -1]},
        fil_labels={0: [0], 1: [1, 0]},
    )
    out = gr_weight_e1_degeneration(K)
    assert out[-1]["status"] == "PASS"
    assert out[0] == {"e1": 2, "h": 0, "status": "FAIL"}
