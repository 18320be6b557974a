"""Filtered cochain complexes over F_p."""
import pytest

from logfrob.algebra.complexes import FilteredComplexFp, direct_sum, induced_flags
from logfrob.errors import NotCompatible


@pytest.fixture
def K(f5):
    """F_5 → F_5², 1 ↦ (1, 1), with W labels (0 | 0, −1) and Hodge labels (0 | 1, 0)."""
    return FilteredComplexFp(
        f5,
        {0: 1, 1: 2},
        {0: [[1], [1]]},
        w_labels={0: [0], 1: [0, -1]},
        fil_labels={0: [0], 1: [1, 0]},
        name="K",
    )


def test_cohomology_and_euler(K):
    assert K.check()
    assert K.cohomology_dims() == {0: 0, 1: 1}
    assert K.euler_characteristic() == -1
    assert K.w_range() == (-1, 0)
    assert K.fil_range() == (0, 1)


def test_check_rejects_bad_complexes(f5):
    with pytest.raises(NotCompatible):
        FilteredComplexFp(f5, {0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]}).check()
    with pytest.raises(NotCompatible):
        FilteredComplexFp(f5, {0: 1, 1: 1}, {0: [[1]]}, w_labels={0: [0], 1: [1]}).check()
    with pytest.raises(NotCompatible):
        FilteredComplexFp(f5, {0: 1, 1: 1}, {0: [[1]]}, fil_labels={0: [1], 1: [0]}).check()


def test_labels_must_match_dimensions(f5):
    with pytest.raises(NotCompatible):
        FilteredComplexFp(f5, {0: 2}, w_labels={0: [0]})


def test_filtration_pieces(K):
    assert K.w_sub(-1).cohomology_dims() == {0: 0, 1: 1}
    assert K.gr_w(0).cohomology_dims() == {0: 0, 1: 0}
    assert K.fil_quotient(1).cohomology_dims() == {0: 0, 1: 0}
    assert K.gr_fil().cohomology_dims() == {0: 0, 1: 1}
    assert K.fil_sub(1).dims == {0: 0, 1: 1}


def test_subquotient_dims_match_cohomology(K):
    A = {k: K.full(k) for k in K.degrees}
    B = {k: K.zero(k) for k in K.degrees}
    assert K.subquotient_dims(A, B) == K.cohomology_dims()


def test_direct_sum(K):
    S = direct_sum([K, K], name="KK")
    assert S.dims == {0: 2, 1: 4}
    assert S.cohomology_dims() == {0: 0, 1: 2}
    assert S.w_labels[1] == (0, -1, 0, -1)
    with pytest.raises(ValueError):
        direct_sum([])


def test_induced_flags_on_cohomology(K):
    W, Fil = induced_flags(K, 1)
    assert W.dims() == [1, 1]
    assert Fil.dims() == [1, 1, 0]
