"""Exterior algebra Λ^i(F_p^n) in the lex-ordered basis of i-subsets"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exactlin import PrimeField, Subspace


@lru_cache(maxsize=None)
def basis_subsets(n: int, i: int) -> Tuple[Tuple[int, ...], ...]:
    if i < 0 or i > n:
        return ()
    return tuple(combinations(range(n), i))


@lru_cache(maxsize=None)
def subset_index(n: int, i: int) -> Dict[Tuple[int, ...], int]:
    return {s: k for k, s in enumerate(basis_subsets(n, i))}


def rank_of(n: int, i: int) -> int:
    return len(basis_subsets(n, i))


def _merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    # sign of the shuffle sorting a + b, both already sorted and disjoint
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _wedge_table(n: int, i: int, j: int) -> Tuple[Tuple[int, int, int, int], ...]:
    target = subset_index(n, i + j)
    rows = []
    for ia, a in enumerate(basis_subsets(n, i)):
        for ib, b in enumerate(basis_subsets(n, j)):
            if set(a) & set(b):
                continue
            c = tuple(sorted(a + b))
            rows.append((ia, ib, target[c], _merge_sign(a, b)))
    return tuple(rows)


def wedge(field: PrimeField, n: int, a, i: int, b, j: int) -> np.ndarray:
    """a ∧ b for a ∈ Λ^i and b ∈ Λ^j."""
    out = np.zeros(rank_of(n, i + j), dtype=np.int64)
    if i + j > n:
        return out
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    for ia, ib, ic, sign in _wedge_table(n, i, j):
        if a[ia] and b[ib]:
            out[ic] += sign * a[ia] * b[ib]
    return out % field.p


def wedge_vectors(field: PrimeField, n: int, vectors) -> np.ndarray:
    """v₁ ∧ … ∧ v_k for vectors of F_p^n."""
    acc = np.ones(1, dtype=np.int64)
    degree = 0
    for v in vectors:
        acc = wedge(field, n, acc, degree, np.asarray(v, dtype=np.int64) % field.p, 1)
        degree += 1
    return acc


def wedge_matrix(field: PrimeField, n: int, v, i: int) -> np.ndarray:
    """Matrix of w ↦ v ∧ w from Λ^i to Λ^{i+1}."""
    v = np.asarray(v, dtype=np.int64) % field.p
    M = np.zeros((rank_of(n, i + 1), rank_of(n, i)), dtype=np.int64)
    if i + 1 > n:
        return M
    for ia, ib, ic, sign in _wedge_table(n, 1, i):
        if v[ia]:
            M[ic, ib] += sign * v[ia]
    return M % field.p


def contraction_matrix(field: PrimeField, n: int, u, i: int) -> np.ndarray:
    """Matrix of the interior product ι_u from Λ^i to Λ^{i-1}.

    ι_u(e_{j₁}∧…∧e_{j_i}) = Σ_k (−1)^k ⟨e_{j_k}, u⟩ e_{J∖j_k}.
    """
    u = [int(x) for x in u]
    M = np.zeros((rank_of(n, i - 1), rank_of(n, i)), dtype=np.int64)
    if i <= 0:
        return M
    target = subset_index(n, i - 1)
    for col, J in enumerate(basis_subsets(n, i)):
        for k, jk in enumerate(J):
            if u[jk] == 0:
                continue
            rest = J[:k] + J[k + 1:]
            M[target[rest], col] += (-1) ** k * u[jk]
    return M % field.p


def _det(field: PrimeField, A: np.ndarray) -> int:
    size = A.shape[0]
    total = 0
    for perm in permutations(range(size)):
        inv = sum(1 for x in range(size) for y in range(x + 1, size) if perm[x] > perm[y])
        term = -1 if inv % 2 else 1
        for r in range(size):
            term *= int(A[r, perm[r]])
        total += term
    return total % field.p


def exterior_power_matrix(field: PrimeField, A, i: int) -> np.ndarray:
    """Λ^i A: the matrix of i×i minors of A (rows and columns in lex order)."""
    A = np.asarray(A, dtype=np.int64)
    n_out, n_in = A.shape
    rows = basis_subsets(n_out, i)
    cols = basis_subsets(n_in, i)
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if i == 0:
        M[0, 0] = 1
        return M
    for r, I in enumerate(rows):
        for c, J in enumerate(cols):
            M[r, c] = _det(field, A[np.ix_(I, J)])
    return M


def wedge_subspace(field: PrimeField, n: int, E: Subspace, l: int, F: Subspace, k: int) -> Subspace:
    """Λ^l E ∧ Λ^k F inside Λ^{l+k}(F_p^n)."""
    dim = rank_of(n, l + k)
    if l < 0 or k < 0 or l + k > n or l > E.dim or k > F.dim:
        return Subspace.zero(field, dim)
    vectors: List[np.ndarray] = []
    for es in combinations(range(E.dim), l):
        left = wedge_vectors(field, n, [E.basis[x] for x in es])
        for fs in combinations(range(F.dim), k):
            right = wedge_vectors(field, n, [F.basis[x] for x in fs])
            vectors.append(wedge(field, n, left, l, right, k))
    return Subspace.span(field, dim, vectors)


def exterior_power(field: PrimeField, n: int, E: Subspace, i: int) -> Subspace:
    return wedge_subspace(field, n, E, i, Subspace.full(field, n), 0)
