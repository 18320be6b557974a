"""
Exact linear algebra over F_p.

Matrices are numpy int64 arrays with entries in [0, p). Subspaces are kept
as reduced row-echelon bases, which makes every basis this module hands out
canonical: equal subspaces have byte-identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import NotCompatible, NotInvertible


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def as_rows(vectors, width: int) -> np.ndarray:
    """
    ``vectors`` as a (k, width) int64 array.

    A flat input of length k*width is k rows. In a zero-dimensional ambient
    space a flat input is a single (empty) vector.
    """
    arr = np.asarray(vectors, dtype=np.int64)
    if width > 0:
        return arr.reshape(-1, width)
    rows = arr.shape[0] if arr.ndim >= 2 else 1
    return arr.reshape(rows, 0)


class PrimeField:
    """The base field F_p of a run. One instance is created per spec."""

    def __init__(self, p: int):
        if not _is_prime(int(p)):
            raise ValueError(f"p must be a prime, got {p}")
        self.p = int(p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def array(self, values, shape=None) -> np.ndarray:
        arr = np.array(values, dtype=np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        return arr % self.p

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise NotInvertible("zero has no inverse", p=self.p)
        return pow(a, -1, self.p)

    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[-1] == 0 or b.shape[0] == 0:
            return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        return (a @ b) % self.p

    def scalar(self, value: int) -> "FpScalar":
        return FpScalar(int(value) % self.p, self.p)


@dataclass(frozen=True)
class FpScalar:
    value: int
    p: int

    def _check(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise NotCompatible("mixed moduli", left=self.p, right=other.p)
            return other.value
        return int(other)

    def __add__(self, other):
        return FpScalar((self.value + self._check(other)) % self.p, self.p)

    def __sub__(self, other):
        return FpScalar((self.value - self._check(other)) % self.p, self.p)

    def __mul__(self, other):
        return FpScalar((self.value * self._check(other)) % self.p, self.p)

    def __neg__(self):
        return FpScalar((-self.value) % self.p, self.p)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ZpSqScalar:
    """An element of Z/p², the Witt vectors of length two over F_p."""

    value: int
    p: int

    @property
    def modulus(self) -> int:
        return self.p * self.p

    def _check(self, other):
        if isinstance(other, ZpSqScalar):
            if other.p != self.p:
                raise NotCompatible("mixed moduli", left=self.p, right=other.p)
            return other.value
        return int(other)

    def __add__(self, other):
        return ZpSqScalar((self.value + self._check(other)) % self.modulus, self.p)

    def __sub__(self, other):
        return ZpSqScalar((self.value - self._check(other)) % self.modulus, self.p)

    def __mul__(self, other):
        return ZpSqScalar((self.value * self._check(other)) % self.modulus, self.p)

    def __neg__(self):
        return ZpSqScalar((-self.value) % self.modulus, self.p)

    def reduce(self) -> FpScalar:
        return FpScalar(self.value % self.p, self.p)

    def divide_by_p(self) -> FpScalar:
        """The residue of value/p; only defined on the ideal pZ/p²."""
        if self.value % self.p:
            raise NotCompatible("not divisible by p", value=self.value, p=self.p)
        return FpScalar((self.value // self.p) % self.p, self.p)


def row_echelon(field: PrimeField, M) -> Tuple[np.ndarray, list]:
    """Reduced row-echelon form over F_p.

    Args:
        field: The prime field.
        M: Matrix (m x n).

    Returns:
        (R, pivot_cols):
            R — reduced echelon form, shape (m, n), zero rows at the bottom.
            pivot_cols — pivot column indices, one per nonzero row.
    """
    p = field.p
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("row_echelon expects a 2-D matrix")
    m, n = R.shape
    pivot_cols: list = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        found = row + int(nz[0])
        if found != row:
            R[[row, found]] = R[[found, row]]
        R[row] = (R[row] * pow(int(R[row, col]), -1, p)) % p
        factors = R[:, col].copy()
        factors[row] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            R[hit] = (R[hit] - np.outer(factors[hit], R[row])) % p
        pivot_cols.append(col)
        row += 1
    return R, pivot_cols


class Subspace:
    """A subspace of F_p^n held by its reduced echelon basis (rows)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: PrimeField, ambient_dim: int, basis: np.ndarray, pivots: Sequence[int]):
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.basis = basis
        self.pivots = tuple(int(c) for c in pivots)
        self.basis.setflags(write=False)

    @classmethod
    def span(cls, field: PrimeField, ambient_dim: int, vectors) -> "Subspace":
        vecs = np.asarray(vectors, dtype=np.int64)
        if vecs.size == 0:
            return cls.zero(field, ambient_dim)
        vecs = vecs.reshape(-1, ambient_dim)
        R, pivots = row_echelon(field, vecs)
        return cls(field, ambient_dim, R[: len(pivots)].copy(), pivots)

    @classmethod
    def zero(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.int64), range(ambient_dim))

    @classmethod
    def coordinate(cls, field: PrimeField, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        idx = sorted(set(int(i) for i in indices))
        basis = np.zeros((len(idx), ambient_dim), dtype=np.int64)
        for row, col in enumerate(idx):
            basis[row, col] = 1
        return cls(field, ambient_dim, basis, idx)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _same_space(self, other: "Subspace"):
        if other.field != self.field or other.ambient_dim != self.ambient_dim:
            raise NotCompatible(
                "subspaces live in different ambient spaces",
                left=(self.field.p, self.ambient_dim),
                right=(other.field.p, other.ambient_dim),
            )

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.field.p, self.ambient_dim, self.pivots, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.field.p})"

    def reduce(self, vectors) -> np.ndarray:
        """Remainders of ``vectors`` after clearing this basis's pivot columns."""
        vecs = as_rows(vectors, self.ambient_dim) % self.field.p
        if self.dim == 0 or vecs.shape[0] == 0:
            return vecs
        coeffs = vecs[:, list(self.pivots)]
        return (vecs - coeffs @ self.basis) % self.field.p

    def contains(self, vectors) -> bool:
        rem = self.reduce(vectors)
        return not rem.any()

    def contains_space(self, other: "Subspace") -> bool:
        self._same_space(other)
        return self.contains(other.basis)

    def coordinates(self, vectors) -> np.ndarray:
        """Coordinates (rows) of ``vectors`` in this basis."""
        vecs = as_rows(vectors, self.ambient_dim) % self.field.p
        coords = vecs[:, list(self.pivots)]
        if ((coords @ self.basis) % self.field.p != vecs).any():
            raise NotCompatible("vector is not in the subspace", dim=self.dim)
        return coords

    def annihilator(self) -> np.ndarray:
        """Rows c with basis @ c = 0; the equations cutting out this subspace."""
        free = [c for c in range(self.ambient_dim) if c not in set(self.pivots)]
        eqs = np.zeros((len(free), self.ambient_dim), dtype=np.int64)
        for row, f in enumerate(free):
            eqs[row, f] = 1
            for i, pc in enumerate(self.pivots):
                eqs[row, pc] = (-self.basis[i, f]) % self.field.p
        return eqs

    def __add__(self, other: "Subspace") -> "Subspace":
        self._same_space(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.span(self.field, self.ambient_dim, np.vstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._same_space(other)
        if self.is_full():
            return other
        if other.is_full():
            return self
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        eqs = np.vstack([self.annihilator(), other.annihilator()])
        return kernel(self.field, eqs)

    def image(self, A) -> "Subspace":
        A = np.asarray(A, dtype=np.int64)
        if self.dim == 0:
            return Subspace.zero(self.field, A.shape[0])
        return Subspace.span(self.field, A.shape[0], self.field.matmul(self.basis, A.T))

    @classmethod
    def preimage(cls, field: PrimeField, A, target: "Subspace") -> "Subspace":
        """{x : A x ∈ target}."""
        A = np.asarray(A, dtype=np.int64)
        if target.is_full():
            return cls.full(field, A.shape[1])
        return kernel(field, field.matmul(target.annihilator(), A), ncols=A.shape[1])


def kernel(field: PrimeField, A, ncols: Optional[int] = None) -> Subspace:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1] if A.ndim == 2 else int(ncols or 0)
    if ncols is not None:
        n = ncols
    if A.size == 0:
        return Subspace.full(field, n)
    R, pivots = row_echelon(field, A)
    pivot_set = set(pivots)
    vecs = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R[i, f]) % field.p
        vecs.append(v)
    return Subspace.span(field, n, vecs)


class RankKernelImage(NamedTuple):
    rank: int
    kernel: Subspace
    image: Subspace


def rank_kernel_image(field: PrimeField, A) -> RankKernelImage:
    """Rank, kernel and column space of A."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("rank_kernel_image expects a 2-D matrix")
    image = Subspace.span(field, A.shape[0], A.T) if A.size else Subspace.zero(field, A.shape[0])
    ker = kernel(field, A, ncols=A.shape[1])
    return RankKernelImage(image.dim, ker, image)


def rank(field: PrimeField, A) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return len(row_echelon(field, A)[1])


def inverse(field: PrimeField, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64) % field.p
    n = M.shape[0]
    if M.shape != (n, n):
        raise NotInvertible("matrix is not square", shape=M.shape)
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    R, pivots = row_echelon(field, np.hstack([M, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)):
        raise NotInvertible("matrix is singular", size=n)
    return R[:, n:].copy()


def solve(field: PrimeField, A, b) -> Optional[np.ndarray]:
    """One solution x of A x = b, or None."""
    A = np.asarray(A, dtype=np.int64) % field.p
    b = np.asarray(b, dtype=np.int64).reshape(-1) % field.p
    m, n = A.shape
    if n == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    R, pivots = row_echelon(field, np.hstack([A, b.reshape(-1, 1)]))
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def complement_space(big: Subspace, small: Subspace) -> Subspace:
    """Canonical complement of ``small`` inside ``big``.

    The complement is big ∩ {x : x vanishes on small's pivot columns}.
    """
    big._same_space(small)
    if not big.contains_space(small):
        raise NotCompatible("small space is not contained in big space", big=big.dim, small=small.dim)
    rem = small.reduce(big.basis)
    return Subspace.span(big.field, big.ambient_dim, rem)


def complement_basis(big: Subspace, small: Subspace) -> np.ndarray:
    return complement_space(big, small).basis


class Subquotient:
    """big / small with the canonical complement basis."""

    def __init__(self, big: Subspace, small: Subspace):
        self.big = big
        self.small = small
        self._comp = complement_space(big, small)
        self.basis = self._comp.basis

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def field(self) -> PrimeField:
        return self.big.field

    def coordinates(self, vectors) -> np.ndarray:
        """Quotient coordinates of vectors lying in ``big``."""
        if not self.big.contains(vectors):
            raise NotCompatible("vector is not in the numerator space", dim=self.big.dim)
        rem = self.small.reduce(vectors)
        if self.dim == 0:
            return np.zeros((rem.shape[0], 0), dtype=np.int64)
        return self._comp.coordinates(rem)

    def lift(self, coords) -> np.ndarray:
        coords = as_rows(coords, self.dim)
        return self.field.matmul(coords, self.basis)


def subquotient_map(field: PrimeField, A, src: Tuple[Subspace, Subspace], dst: Tuple[Subspace, Subspace]) -> np.ndarray:
    """Matrix of the map induced by A from src[0]/src[1] to dst[0]/dst[1]."""
    A = np.asarray(A, dtype=np.int64)
    src_q = src if isinstance(src, Subquotient) else Subquotient(*src)
    dst_q = dst if isinstance(dst, Subquotient) else Subquotient(*dst)
    if not dst_q.big.contains_space(src_q.big.image(A)):
        raise NotCompatible("A does not map the source numerator into the target numerator")
    if not dst_q.small.contains_space(src_q.small.image(A)):
        raise NotCompatible("A does not map the source denominator into the target denominator")
    if src_q.dim == 0:
        return np.zeros((dst_q.dim, 0), dtype=np.int64)
    images = field.matmul(src_q.basis, A.T)
    return dst_q.coordinates(images).T.copy()


class Flag:
    """A finite chain of subspaces indexed by integers from ``start``.

    Decreasing flags (Fil) are full below ``start`` and zero past the last
    step; increasing flags (W) are zero below ``start`` and full past the
    last step.
    """

    def __init__(self, steps: Sequence[Subspace], start: int = 0, decreasing: bool = True):
        self.steps = tuple(steps)
        self.start = int(start)
        self.decreasing = bool(decreasing)
        if not self.steps:
            raise ValueError("a flag needs at least one step")
        field, n = self.steps[0].field, self.steps[0].ambient_dim
        for a, b in zip(self.steps, self.steps[1:]):
            outer, inner = (a, b) if self.decreasing else (b, a)
            if not outer.contains_space(inner):
                raise NotCompatible("flag steps are not nested", decreasing=self.decreasing)
        self.field = field
        self.ambient_dim = n

    @property
    def stop(self) -> int:
        return self.start + len(self.steps)

    def step(self, level: int) -> Subspace:
        if level < self.start:
            if self.decreasing:
                return Subspace.full(self.field, self.ambient_dim)
            return Subspace.zero(self.field, self.ambient_dim)
        if level >= self.stop:
            if self.decreasing:
                return Subspace.zero(self.field, self.ambient_dim)
            return Subspace.full(self.field, self.ambient_dim)
        return self.steps[level - self.start]

    def levels(self) -> range:
        """Levels at which the graded pieces can be nonzero."""
        if self.decreasing:
            return range(self.start - 1, self.stop)
        return range(self.start, self.stop + 1)

    def dims(self) -> list:
        return [s.dim for s in self.steps]

    def graded(self, level: int) -> Subquotient:
        if self.decreasing:
            return Subquotient(self.step(level), self.step(level + 1))
        return Subquotient(self.step(level), self.step(level - 1))

    def __eq__(self, other):
        if not isinstance(other, Flag) or other.decreasing != self.decreasing:
            return NotImplemented
        lo = min(self.start, other.start) - 1
        hi = max(self.stop, other.stop) + 1
        return all(self.step(l) == other.step(l) for l in range(lo, hi))

    def __repr__(self):
        kind = "decreasing" if self.decreasing else "increasing"
        return f"Flag({kind}, start={self.start}, dims={self.dims()})"
