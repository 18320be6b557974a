"""Exterior algebra over F_p."""
import numpy as np
import pytest

from logfrob.algebra.exactlin import Subspace
from logfrob.algebra.exterior import (
    basis_subsets,
    contraction_matrix,
    exterior_power,
    exterior_power_matrix,
    wedge,
    wedge_matrix,
    wedge_subspace,
    wedge_vectors,
)


def test_lex_basis():
    assert basis_subsets(3, 2) == ((0, 1), (0, 2), (1, 2))
    assert basis_subsets(2, 3) == ()


def test_wedge_is_graded_commutative(f5):
    e0, e1 = [1, 0], [0, 1]
    assert wedge(f5, 2, e0, 1, e1, 1).tolist() == [1]
    assert wedge(f5, 2, e1, 1, e0, 1).tolist() == [4]
    assert not wedge_vectors(f5, 2, [[2, 3], [2, 3]]).any()


def test_contraction_of_top_form(f5):
    assert contraction_matrix(f5, 2, [1, 0], 2)[:, 0].tolist() == [0, 1]
    assert contraction_matrix(f5, 2, [0, 1], 2)[:, 0].tolist() == [4, 0]


@pytest.mark.parametrize("i", [0, 1, 2])
def test_contraction_is_an_antiderivation(f5, i):
    """ι_u(v ∧ w) = ⟨u,v⟩ w − v ∧ ι_u w on Λ^i(F_5^3)."""
    n, u, v = 3, [1, 2, 0], [1, 1, 1]
    lhs = f5.matmul(contraction_matrix(f5, n, u, i + 1), wedge_matrix(f5, n, v, i))
    rhs = (3 * np.eye(lhs.shape[0], dtype=np.int64)) % 5
    if i > 0:
        rhs = (rhs - f5.matmul(wedge_matrix(f5, n, v, i - 1), contraction_matrix(f5, n, u, i))) % 5
    assert np.array_equal(lhs, rhs)


def test_exterior_power_of_a_map(f5):
    assert exterior_power_matrix(f5, [[1, 2], [3, 4]], 2).tolist() == [[3]]
    assert np.array_equal(exterior_power_matrix(f5, np.eye(3, dtype=np.int64), 2), np.eye(3, dtype=np.int64))
    assert exterior_power_matrix(f5, [[1, 2]], 0).tolist() == [[1]]


def test_wedge_subspaces(f5):
    e0 = Subspace.coordinate(f5, 2, [0])
    full = Subspace.full(f5, 2)
    assert wedge_subspace(f5, 2, e0, 1, full, 1).is_full()
    assert wedge_subspace(f5, 2, e0, 2, full, 0).is_zero()
    assert exterior_power(f5, 3, Subspace.full(f5, 3), 2).dim == 3
