"""
Logarithmic de Rham calculus on toric charts.

Forms are kept in character-graded normal form: a FormSum of degree i maps
each weight m to a vector of Λ^i(M ⊗ F_p) in the lex basis, standing for
Σ x^m · dlog x^w. The differential is d(x^m w) = x^m (m̄ ∧ w).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..algebra.complexes import FilteredComplexFp, subquotient_cohomology_dims
from ..algebra.exactlin import PrimeField, Subspace, complement_space, inverse, rank
from ..algebra.exterior import (
    basis_subsets,
    contraction_matrix,
    exterior_power_matrix,
    rank_of,
    subset_index,
    wedge,
    wedge_matrix,
)
from ..errors import BadFace, DecompositionFailure, NotCompatible, NotInWeightLevel
from .toricgeom import DivisorSet, Fan, Twist, Weight, form_space, weight_level_space, weight_slice


class FormSum:
    """A finite sum Σ x^m · w of forms of one degree, zero terms dropped."""

    __slots__ = ("field", "n", "degree", "terms")

    def __init__(self, field: PrimeField, n: int, degree: int, terms: Optional[Mapping] = None):
        self.field = field
        self.n = int(n)
        self.degree = int(degree)
        self.terms: Dict[Weight, np.ndarray] = {}
        size = rank_of(self.n, self.degree)
        for m, vec in (terms or {}).items():
            v = np.asarray(vec, dtype=np.int64).reshape(size) % field.p
            if v.any():
                key = tuple(int(x) for x in m)
                if key in self.terms:
                    v = (self.terms[key] + v) % field.p
                    if not v.any():
                        del self.terms[key]
                        continue
                self.terms[key] = v

    @classmethod
    def zero(cls, field: PrimeField, n: int, degree: int) -> "FormSum":
        return cls(field, n, degree)

    @classmethod
    def monomial(cls, field: PrimeField, n: int, m: Sequence[int], indices: Sequence[int] = (), coeff: int = 1) -> "FormSum":
        """coeff · x^m · dlog x^{e_{j1}} ∧ … ∧ dlog x^{e_{jk}} for basis indices j of M."""
        degree = len(indices)
        vec = np.zeros(rank_of(n, degree), dtype=np.int64)
        if len(set(indices)) == degree:
            inversions = sum(1 for a in range(degree) for b in range(a + 1, degree) if indices[a] > indices[b])
            vec[subset_index(n, degree)[tuple(sorted(indices))]] = -1 if inversions % 2 else 1
        return cls(field, n, degree, {tuple(m): coeff * vec})

    @classmethod
    def single(cls, field: PrimeField, n: int, degree: int, m: Sequence[int], vector) -> "FormSum":
        """x^m · w for a vector w of Λ^degree."""
        return cls(field, n, degree, {tuple(m): vector})

    @classmethod
    def function(cls, field: PrimeField, n: int, coeffs: Mapping[Sequence[int], int]) -> "FormSum":
        """A Laurent polynomial Σ c_m x^m as a degree-0 form."""
        return cls(field, n, 0, {tuple(m): [c] for m, c in coeffs.items()})

    def _same(self, other: "FormSum"):
        if other.field != self.field or other.n != self.n or other.degree != self.degree:
            raise NotCompatible(
                "forms of different shape",
                left=(self.field.p, self.n, self.degree),
                right=(other.field.p, other.n, other.degree),
            )

    def weights(self) -> List[Weight]:
        return sorted(self.terms)

    def component(self, m: Sequence[int]) -> np.ndarray:
        return self.terms.get(tuple(m), np.zeros(rank_of(self.n, self.degree), dtype=np.int64))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FormSum") -> "FormSum":
        self._same(other)
        merged = dict(self.terms)
        for m, v in other.terms.items():
            merged[m] = merged.get(m, 0) + v
        return FormSum(self.field, self.n, self.degree, merged)

    def __neg__(self) -> "FormSum":
        return self.scale(-1)

    def __sub__(self, other: "FormSum") -> "FormSum":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, FormSum):
            return NotImplemented
        return (
            self.field == other.field
            and self.degree == other.degree
            and self.weights() == other.weights()
            and all(np.array_equal(self.terms[m], other.terms[m]) for m in self.terms)
        )

    def __repr__(self):
        return f"FormSum(degree={self.degree}, terms={self.to_terms()})"

    def scale(self, c: int) -> "FormSum":
        return FormSum(self.field, self.n, self.degree, {m: int(c) * v for m, v in self.terms.items()})

    def times_monomial(self, shift: Sequence[int], coeff: int = 1) -> "FormSum":
        """x^shift · ω."""
        return FormSum(
            self.field,
            self.n,
            self.degree,
            {tuple(a + b for a, b in zip(m, shift)): coeff * v for m, v in self.terms.items()},
        )

    def d(self) -> "FormSum":
        out = {}
        if self.degree >= self.n:
            return FormSum.zero(self.field, self.n, self.degree + 1)
        for m, v in self.terms.items():
            mat = wedge_matrix(self.field, self.n, np.asarray(m, dtype=np.int64), self.degree)
            out[m] = mat @ v
        return FormSum(self.field, self.n, self.degree + 1, out)

    def wedge(self, other: "FormSum") -> "FormSum":
        if other.field != self.field or other.n != self.n:
            raise NotCompatible("forms over different lattices or fields")
        total = FormSum.zero(self.field, self.n, self.degree + other.degree)
        if self.degree + other.degree > self.n:
            return total
        acc: Dict[Weight, np.ndarray] = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = wedge(self.field, self.n, v1, self.degree, v2, other.degree)
                acc[m] = acc.get(m, 0) + prod
        return FormSum(self.field, self.n, self.degree + other.degree, acc)

    def pullback(self, ft: np.ndarray) -> "FormSum":
        """f* along a lattice map whose transpose on characters is ``ft`` (n_src × n_dst)."""
        ft = np.asarray(ft, dtype=np.int64)
        n_src = ft.shape[0]
        power = exterior_power_matrix(self.field, ft, self.degree)
        out: Dict[Weight, np.ndarray] = {}
        for m, v in self.terms.items():
            key = tuple(int(x) for x in ft @ np.asarray(m, dtype=np.int64))
            out[key] = out.get(key, 0) + power @ v
        return FormSum(self.field, n_src, self.degree, out)

    def to_terms(self) -> List[Tuple[Weight, Tuple[int, ...], int]]:
        """Canonical list of (weight, wedge subset, coefficient)."""
        subsets = basis_subsets(self.n, self.degree)
        return [
            (m, subsets[idx], int(self.terms[m][idx]))
            for m in self.weights()
            for idx in np.nonzero(self.terms[m])[0].tolist()
        ]


@dataclass(frozen=True)
class MonomialLogForm:
    """coeff · x^weight · dlog x^{e_J} on a chart or chart tuple."""

    coeff: int
    weight: Weight
    wedge: Tuple[int, ...]
    context: Tuple[int, ...] = ()

    def to_sum(self, field: PrimeField, n: int) -> FormSum:
        return FormSum.monomial(field, n, self.weight, self.wedge, coeff=self.coeff)


@dataclass(frozen=True)
class LogContext:
    """The open U_τ of a chart tuple with its log structure and twist.

    ``rays`` are the rays of τ = σ_{α₀} ∩ … ∩ σ_{α_r}; sections over U_τ in
    weight m are cut out by those rays only.
    """

    fan: Fan
    rays: Tuple[int, ...]
    divisor: DivisorSet
    field: PrimeField
    twist: Optional[Twist] = None
    charts: Tuple[int, ...] = ()

    @classmethod
    def of_charts(cls, fan: Fan, charts: Sequence[int], divisor: DivisorSet, field: PrimeField, twist: Optional[Twist] = None) -> "LogContext":
        charts = tuple(charts)
        return cls(fan, fan.overlap(charts), divisor, field, twist, charts)

    @property
    def n(self) -> int:
        return self.fan.n

    def slice(self, m: Sequence[int]):
        return weight_slice(self.fan, self.rays, m, self.divisor, self.twist, self.field)

    def form_space(self, m: Sequence[int], i: int) -> Subspace:
        return form_space(self.fan, self.rays, m, i, self.divisor, self.twist, self.field)

    def contains(self, omega: FormSum) -> bool:
        return all(self.form_space(m, omega.degree).contains(v) for m, v in omega.terms.items())


def d(omega: FormSum) -> FormSum:
    return omega.d()


def wedge_forms(a: FormSum, b: FormSum) -> FormSum:
    return a.wedge(b)


def weight_subspace(context: LogContext, m: Sequence[int], i: int, l: int) -> Subspace:
    """W_l of the weight-m slice of Ω^i(log D) on the context."""
    return weight_level_space(context.fan, context.rays, m, i, l, context.divisor, context.twist, context.field)


def hodge_subspace(context: LogContext, m: Sequence[int], i: int, l: int) -> Subspace:
    """Fil^l (stupid filtration): everything in degree i >= l, nothing below."""
    if i >= l:
        return context.form_space(m, i)
    return Subspace.zero(context.field, rank_of(context.n, i))


# residues

def residue_matrix(context: LogContext, m: Sequence[int], i: int, face: Sequence[int]) -> np.ndarray:
    """Matrix of Res_{D_I} from Λ^i to Λ^{i−|I|} in weight m.

    Contracts with u_ρ for ρ ∈ I in increasing ray order. It is zero when
    the stratum misses U_τ or when x^m vanishes along some D_ρ, ρ ∈ I.
    """
    face = sorted(face)
    n, field = context.n, context.field
    out = np.zeros((rank_of(n, i - len(face)), rank_of(n, i)), dtype=np.int64)
    if len(face) > i or not set(face) <= set(context.rays):
        return out
    twist = context.twist
    if any(context.fan.pairing(m, r) + (twist.coeff(r) if twist else 0) != 0 for r in face):
        return out
    mat = np.eye(rank_of(n, i), dtype=np.int64)
    degree = i
    for r in face:
        mat = field.matmul(contraction_matrix(field, n, context.fan.ray(r), degree), mat)
        degree -= 1
    return mat


def residue_target(context: LogContext, m: Sequence[int], i: int, face: Sequence[int]) -> Subspace:
    """Weight-m slice of Ω^{i−|I|} of D_I on the context: Λ^{i−|I|} F when I ⊆ Z ∩ D."""
    n, field = context.n, context.field
    dim = rank_of(n, i - len(face))
    ws = context.slice(m)
    if ws.vanishes or not set(face) <= set(ws.zero_rays) or not set(face) <= context.divisor.rays_in_d:
        return Subspace.zero(field, dim)
    return weight_level_space(context.fan, context.rays, m, i - len(face), 0, context.divisor, context.twist, field)


def _check_face(context: LogContext, face: Sequence[int]):
    if not context.fan.is_face(face):
        raise BadFace("rays do not span a cone of the fan", rays=tuple(sorted(face)))
    outside = [r for r in face if r not in context.divisor]
    if outside:
        raise BadFace("rays are not components of D", rays=tuple(sorted(outside)))


def residue(omega: FormSum, face: Sequence[int], context: LogContext) -> FormSum:
    """Res_{D_I} ω for ω ∈ W_{|I|}.

    Raises:
        BadFace: I is not the ray set of a cone or leaves D.
        NotInWeightLevel: ω ∉ W_{|I|}.
    """
    _check_face(context, face)
    level = len(face)
    out = {}
    for m, v in omega.terms.items():
        if not weight_subspace(context, m, omega.degree, level).contains(v):
            raise NotInWeightLevel("form is not in the weight level of the stratum", weight=m, level=level)
        out[m] = residue_matrix(context, m, omega.degree, face) @ v
    return FormSum(context.field, context.n, omega.degree - level, out)


class GrDecomposition(NamedTuple):
    matrix: np.ndarray
    source_basis: np.ndarray
    faces: Tuple[Tuple[int, ...], ...]
    target_dims: Tuple[int, ...]


def residue_faces(context: LogContext, l: int) -> List[Tuple[int, ...]]:
    """Strata D_I with |I| = l meeting the context, in lex order."""
    in_d = [r for r in context.rays if r in context.divisor]
    return [tuple(I) for I in itertools.combinations(in_d, l)]


def gr_weight_decompose(context: LogContext, m: Sequence[int], i: int, l: int) -> GrDecomposition:
    """⊕_{|I|=l} Res_{D_I} on the Gr^W_l slice, certified bijective.

    Raises:
        DecompositionFailure: the residue map is not an isomorphism.
    """
    field = context.field
    top = weight_subspace(context, m, i, l)
    bottom = weight_subspace(context, m, i, l - 1)
    source = complement_space(top, bottom).basis
    faces = residue_faces(context, l) if l <= i else []
    blocks, dims = [], []
    for face in faces:
        target = residue_target(context, m, i, face)
        if target.dim == 0:
            dims.append(0)
            continue
        images = field.matmul(source, residue_matrix(context, m, i, face).T)
        try:
            blocks.append(target.coordinates(images).T)
        except NotCompatible as exc:
            raise DecompositionFailure("residue leaves the stratum's form space", face=face, weight=tuple(m)) from exc
        dims.append(target.dim)
    if blocks:
        matrix = np.vstack(blocks) % field.p
    else:
        matrix = np.zeros((0, source.shape[0]), dtype=np.int64)
    if matrix.shape[0] != matrix.shape[1] or rank(field, matrix) != matrix.shape[0]:
        raise DecompositionFailure(
            "residues are not bijective on Gr^W",
            weight=tuple(m),
            degree=i,
            level=l,
            shape=matrix.shape,
        )
    return GrDecomposition(matrix, source, tuple(faces), tuple(dims))


# truncation

def _adapted_labels(field: PrimeField, space: Subspace, labels: Sequence[int], increasing: bool):
    """A basis of ``space`` adapted to a coordinate filtration, with its labels."""
    if space.ambient_dim == 0:
        return np.zeros((0, 0), dtype=np.int64), []
    levels = sorted(set(labels))
    rows, out = [], []
    prev = Subspace.zero(field, space.ambient_dim)
    for lvl in (levels if increasing else reversed(levels)):
        idx = [k for k, x in enumerate(labels) if (x <= lvl if increasing else x >= lvl)]
        step = space.intersect(Subspace.coordinate(field, space.ambient_dim, idx))
        comp = complement_space(step, prev.intersect(step))
        rows.extend(comp.basis)
        out.extend([lvl] * comp.dim)
        prev = step
    return np.array(rows, dtype=np.int64).reshape(len(rows), space.ambient_dim), out


def truncate(K: FilteredComplexFp, p: int) -> FilteredComplexFp:
    """τ_{<p}: keep degrees < p−1, replace degree p−1 by ker d, drop the rest.

    The degree p−1 basis is adapted to W; each of its vectors takes the
    deepest Hodge level containing it.
    """
    field = K.field
    top = p - 1
    if top >= K.hi:
        return K
    degrees = [k for k in K.degrees if k <= top]
    if not degrees:
        return FilteredComplexFp(field, {K.lo: 0}, name=f"tau<{p}")
    dims = {k: K.dim(k) for k in degrees}
    d = {k: K.differential(k) for k in degrees if k < top}
    w = {k: K.w_labels[k] for k in degrees}
    f = {k: K.fil_labels[k] for k in degrees}
    if top in K.degrees:
        ker = Subspace.preimage(field, K.differential(top), Subspace.zero(field, K.dim(top + 1)))
        basis, wl = _adapted_labels(field, ker, K.w_labels[top], increasing=True)
        dims[top] = basis.shape[0]
        w[top] = wl
        f[top] = [
            min((K.fil_labels[top][j] for j in np.nonzero(row)[0].tolist()), default=0) for row in basis
        ]
        if top - 1 in K.degrees and top - 1 in dims:
            # re-express d^{p-2} in the adapted kernel basis
            span = Subspace.span(field, K.dim(top), basis)
            images = span.coordinates(K.differential(top - 1).T)
            d[top - 1] = field.matmul(images, inverse(field, span.coordinates(basis))).T
    return FilteredComplexFp(field, dims, d, w, f, name=f"tau<{p}")


def _sheaf_complex(context: LogContext, m: Sequence[int]):
    n, field = context.n, context.field
    degrees = list(range(n + 1))
    d = {s: wedge_matrix(field, n, np.asarray(m, dtype=np.int64), s) for s in degrees}
    return degrees, d


def truncation_mu_check(context: LogContext, m: Sequence[int], l: int, p: int) -> dict:
    """Compare H^* of Gr^W_l τ_{<p} and τ_{<p} Gr^W_l on a context in weight m.

    Returns a dict with both dimension tables and status PASS or FAIL.
    """
    field = context.field
    degrees, d = _sheaf_complex(context, m)
    V = {s: context.form_space(m, s) for s in degrees}
    W = {s: weight_subspace(context, m, s, l) for s in degrees}
    W_prev = {s: weight_subspace(context, m, s, l - 1) for s in degrees}
    dims = {s: rank_of(context.n, s) for s in degrees}
    zero = {s: Subspace.zero(field, dims[s]) for s in degrees}

    def truncated(s, space):
        if s <= p - 2:
            return space
        if s == p - 1:
            target = zero.get(s + 1)
            if target is None:
                return space
            return space.intersect(Subspace.preimage(field, d[s], target))
        return zero[s]

    T = {s: truncated(s, V[s]) for s in degrees}
    lhs_a = {s: W[s].intersect(T[s]) for s in degrees}
    lhs_b = {s: W_prev[s].intersect(T[s]) for s in degrees}

    def gr_truncated(s):
        if s <= p - 2:
            return W[s]
        if s == p - 1:
            if s + 1 not in W_prev:
                return W[s]
            return W[s].intersect(Subspace.preimage(field, d[s], W_prev[s + 1]))
        return zero[s]

    rhs_a = {s: gr_truncated(s) for s in degrees}
    rhs_b = dict(W_prev)
    lhs = subquotient_cohomology_dims(field, d, lhs_a, lhs_b, degrees)
    rhs = subquotient_cohomology_dims(field, d, rhs_a, rhs_b, degrees)
    return {
        "weight": list(m),
        "level": l,
        "p": p,
        "lhs": [lhs[s] for s in degrees],
        "rhs": [rhs[s] for s in degrees],
        "status": "PASS" if lhs == rhs else "FAIL",
    }


def gr_weight_e1_degeneration(K: FilteredComplexFp) -> Dict[int, dict]:
    """Per weight level, Σ dim H(Gr_Fil Gr^W_l K) against Σ dim H(Gr^W_l K)."""
    lo, hi = K.w_range()
    flo, fhi = K.fil_range()
    out = {}
    for l in range(lo, hi + 1):
        G = K.gr_w(l)
        total = sum(G.cohomology_dims().values())
        graded = sum(sum(G.gr_fil(j).cohomology_dims().values()) for j in range(flo, fhi + 1))
        out[l] = {"e1": graded, "h": total, "status": "PASS" if graded == total else "FAIL"}
    return out
