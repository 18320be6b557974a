"""
Finite cochain complexes over F_p carrying two coordinate filtrations.

Every basis vector of a FilteredComplexFp has a weight label and a Hodge
label. W_l is spanned by the vectors with weight label <= l, Fil^l by the
vectors with Hodge label >= l. The Cech-de Rham complexes built by the core
package choose bases adapted to both filtrations, so no generality is lost.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import NotCompatible
from .exactlin import Flag, PrimeField, Subquotient, Subspace


def subquotient_cohomology_dims(
    field: PrimeField,
    d: Mapping[int, np.ndarray],
    A: Mapping[int, Subspace],
    B: Mapping[int, Subspace],
    degrees: Iterable[int],
) -> Dict[int, int]:
    """Cohomology dimensions of the complex (A + B) / B.

    d must map A into A + B and B into B. In degree k the cohomology is
    (Z + B) / (d A + B) with Z = {a in A : d a in B}.
    """
    dims = {}
    for k in degrees:
        a_k, b_k = A[k], B[k]
        if k + 1 in A:
            z_k = a_k.intersect(Subspace.preimage(field, d[k], B[k + 1]))
        else:
            z_k = a_k
        top = z_k + b_k
        if k - 1 in A:
            bottom = A[k - 1].image(d[k - 1]) + b_k
        else:
            bottom = b_k
        dims[k] = top.dim - bottom.dim
    return dims


class FilteredComplexFp:
    """A bounded complex C^lo -> ... -> C^hi with weight and Hodge labels."""

    def __init__(
        self,
        field: PrimeField,
        dims: Mapping[int, int],
        d: Optional[Mapping[int, np.ndarray]] = None,
        w_labels: Optional[Mapping[int, Sequence[int]]] = None,
        fil_labels: Optional[Mapping[int, Sequence[int]]] = None,
        name: str = "",
    ):
        self.field = field
        self.name = name
        self.degrees: List[int] = sorted(int(k) for k in dims)
        self.dims = {k: int(dims[k]) for k in self.degrees}
        d = d or {}
        self.d: Dict[int, np.ndarray] = {}
        for k in self.degrees:
            rows = self.dims.get(k + 1, 0)
            mat = d.get(k)
            if mat is None:
                mat = np.zeros((rows, self.dims[k]), dtype=np.int64)
            mat = np.asarray(mat, dtype=np.int64).reshape(rows, self.dims[k]) % field.p
            mat.setflags(write=False)
            self.d[k] = mat
        self.w_labels = {
            k: tuple(int(x) for x in (w_labels or {}).get(k, [0] * self.dims[k])) for k in self.degrees
        }
        self.fil_labels = {
            k: tuple(int(x) for x in (fil_labels or {}).get(k, [0] * self.dims[k])) for k in self.degrees
        }
        for k in self.degrees:
            if len(self.w_labels[k]) != self.dims[k] or len(self.fil_labels[k]) != self.dims[k]:
                raise NotCompatible("one label per basis vector is required", degree=k)

    def __repr__(self):
        return f"FilteredComplexFp({self.name or 'anonymous'}, dims={self.dims})"

    @property
    def lo(self) -> int:
        return self.degrees[0] if self.degrees else 0

    @property
    def hi(self) -> int:
        return self.degrees[-1] if self.degrees else -1

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def differential(self, k: int) -> np.ndarray:
        if k in self.d:
            return self.d[k]
        return np.zeros((self.dim(k + 1), self.dim(k)), dtype=np.int64)

    # filtrations

    def w_range(self) -> tuple:
        labels = [x for k in self.degrees for x in self.w_labels[k]]
        return (min(labels), max(labels)) if labels else (0, 0)

    def fil_range(self) -> tuple:
        labels = [x for k in self.degrees for x in self.fil_labels[k]]
        return (min(labels), max(labels)) if labels else (0, 0)

    def w_indices(self, k: int, l: int) -> List[int]:
        return [i for i, x in enumerate(self.w_labels.get(k, ())) if x <= l]

    def fil_indices(self, k: int, l: int) -> List[int]:
        return [i for i, x in enumerate(self.fil_labels.get(k, ())) if x >= l]

    def w_step(self, k: int, l: int) -> Subspace:
        return Subspace.coordinate(self.field, self.dim(k), self.w_indices(k, l))

    def fil_step(self, k: int, l: int) -> Subspace:
        return Subspace.coordinate(self.field, self.dim(k), self.fil_indices(k, l))

    def full(self, k: int) -> Subspace:
        return Subspace.full(self.field, self.dim(k))

    def zero(self, k: int) -> Subspace:
        return Subspace.zero(self.field, self.dim(k))

    def check(self):
        """Raise NotCompatible unless d∘d = 0 and d respects both filtrations."""
        p = self.field.p
        for k in self.degrees:
            dd = self.field.matmul(self.differential(k + 1), self.differential(k))
            if dd.any():
                raise NotCompatible("d∘d is not zero", degree=k)
            mat = self.differential(k)
            rows, cols = np.nonzero(mat % p)
            for r, c in zip(rows.tolist(), cols.tolist()):
                if self.w_labels[k + 1][r] > self.w_labels[k][c]:
                    raise NotCompatible("d does not respect W", degree=k, row=r, col=c)
                if self.fil_labels[k + 1][r] < self.fil_labels[k][c]:
                    raise NotCompatible("d does not respect Fil", degree=k, row=r, col=c)
        return True

    # cohomology

    def cohomology(self, k: int) -> Subquotient:
        """H^k as ker d^k / im d^(k-1) with the canonical complement basis."""
        ker = Subspace.preimage(self.field, self.differential(k), Subspace.zero(self.field, self.dim(k + 1)))
        im = self.full(k - 1).image(self.differential(k - 1)) if self.dim(k - 1) else self.zero(k)
        return Subquotient(ker, im)

    def cohomology_dims(self) -> Dict[int, int]:
        return {k: self.cohomology(k).dim for k in self.degrees}

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in self.dims.items())

    def subquotient_dims(self, A: Mapping[int, Subspace], B: Mapping[int, Subspace]) -> Dict[int, int]:
        return subquotient_cohomology_dims(self.field, self.d, A, B, self.degrees)

    # derived complexes

    def restrict(self, keep: Mapping[int, Sequence[int]], name: str = "") -> "FilteredComplexFp":
        """The complex on a coordinate subset.

        For a subcomplex this is the subcomplex; for a set whose complement
        is a subcomplex it is the quotient complex.
        """
        dims = {k: len(keep[k]) for k in self.degrees}
        d = {}
        for k in self.degrees:
            rows = list(keep.get(k + 1, []))
            cols = list(keep[k])
            d[k] = self.differential(k)[np.ix_(rows, cols)] if rows and cols else None
        w = {k: [self.w_labels[k][i] for i in keep[k]] for k in self.degrees}
        f = {k: [self.fil_labels[k][i] for i in keep[k]] for k in self.degrees}
        return FilteredComplexFp(self.field, dims, d, w, f, name=name or self.name)

    def w_sub(self, l: int) -> "FilteredComplexFp":
        return self.restrict({k: self.w_indices(k, l) for k in self.degrees}, name=f"W_{l}")

    def fil_sub(self, l: int) -> "FilteredComplexFp":
        return self.restrict({k: self.fil_indices(k, l) for k in self.degrees}, name=f"Fil^{l}")

    def fil_quotient(self, l: int) -> "FilteredComplexFp":
        keep = {k: [i for i, x in enumerate(self.fil_labels[k]) if x < l] for k in self.degrees}
        return self.restrict(keep, name=f"K/Fil^{l}")

    def gr_w(self, l: int) -> "FilteredComplexFp":
        keep = {k: [i for i, x in enumerate(self.w_labels[k]) if x == l] for k in self.degrees}
        return self.restrict(keep, name=f"Gr^W_{l}")

    def gr_fil(self, l: Optional[int] = None) -> "FilteredComplexFp":
        """Gr_Fil as one complex: d with the Hodge-label-changing entries dropped."""
        if l is not None:
            keep = {k: [i for i, x in enumerate(self.fil_labels[k]) if x == l] for k in self.degrees}
            return self.restrict(keep, name=f"Gr_Fil^{l}")
        d = {}
        for k in self.degrees:
            mat = np.array(self.differential(k))
            src = np.array(self.fil_labels[k], dtype=np.int64)
            dst = np.array(self.fil_labels.get(k + 1, ()), dtype=np.int64)
            if mat.size:
                mat[dst[:, None] != src[None, :]] = 0
            d[k] = mat
        return FilteredComplexFp(self.field, self.dims, d, self.w_labels, self.fil_labels, name="Gr_Fil")


def direct_sum(complexes: Sequence[FilteredComplexFp], name: str = "sum") -> FilteredComplexFp:
    """Block-diagonal sum; the basis of each summand follows the previous one."""
    if not complexes:
        raise ValueError("direct_sum needs at least one complex")
    field = complexes[0].field
    degrees = sorted({k for c in complexes for k in c.degrees})
    dims = {k: sum(c.dim(k) for c in complexes) for k in degrees}
    d, w, f = {}, {}, {}
    for k in degrees:
        mat = np.zeros((dims.get(k + 1, 0), dims[k]), dtype=np.int64)
        r0 = c0 = 0
        for c in complexes:
            block = c.differential(k)
            mat[r0 : r0 + block.shape[0], c0 : c0 + block.shape[1]] = block
            r0 += c.dim(k + 1)
            c0 += c.dim(k)
        d[k] = mat
        w[k] = [x for c in complexes for x in c.w_labels.get(k, ())]
        f[k] = [x for c in complexes for x in c.fil_labels.get(k, ())]
    return FilteredComplexFp(field, dims, d, w, f, name=name)


def induced_flags(K: FilteredComplexFp, k: int):
    """W and Fil induced on H^k(K), as flags in the coordinates of K.cohomology(k).

    W_l H = (ker ∩ W_l + im) / im and Fil^l H likewise.
    """
    H = K.cohomology(k)
    ker, im = H.big, H.small

    def induced(step: Subspace) -> Subspace:
        part = ker.intersect(step) + im
        coords = H.coordinates(part.basis) if part.dim else np.zeros((0, H.dim), dtype=np.int64)
        return Subspace.span(K.field, H.dim, coords)

    wlo, whi = K.w_range()
    flo, fhi = K.fil_range()
    w_flag = Flag([induced(K.w_step(k, l)) for l in range(wlo, whi + 1)], start=wlo, decreasing=False)
    fil_flag = Flag([induced(K.fil_step(k, l)) for l in range(flo, fhi + 2)], start=flo, decreasing=True)
    return w_flag, fil_flag
