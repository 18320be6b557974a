"""
Cech hypercohomology engine.

The cover is the set of max-cone charts in input order. A cochain assigns
to each increasing chart tuple (α₀ < … < α_r) and form degree s a FormSum on
U_{α₀…α_r}; the total differential is D = δ + (−1)^r d. Every weight m gives
a finite complex (WeightComplex) and all solving happens weight by weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..algebra.complexes import FilteredComplexFp, induced_flags, subquotient_cohomology_dims
from ..algebra.exactlin import PrimeField, Subquotient, Subspace, as_rows, complement_space, inverse, solve
from ..algebra.exterior import rank_of, wedge_matrix
from ..errors import NotACocycle, NotCompatible, RadiusTooSmall
from ..geometry.logdr import FormSum, LogContext, weight_subspace
from ..geometry.toricgeom import DivisorSet, Fan, Twist, Weight

ChartTuple = Tuple[int, ...]


@dataclass(frozen=True)
class Atlas:
    """A toric pair (X, D), an optional twist L and the prime of the run."""

    fan: Fan
    divisor: DivisorSet
    field: PrimeField
    twist: Optional[Twist] = None

    @property
    def n(self) -> int:
        return self.fan.n

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def num_charts(self) -> int:
        return self.fan.num_charts

    def tuples(self, r: int) -> List[ChartTuple]:
        return list(itertools.combinations(range(self.num_charts), r + 1))

    def all_tuples(self) -> List[ChartTuple]:
        return [t for r in range(self.num_charts) for t in self.tuples(r)]

    def context(self, charts: Sequence[int]) -> LogContext:
        return _context(self, tuple(charts))

    def untwisted(self) -> "Atlas":
        return Atlas(self.fan, self.divisor, self.field, None)


@lru_cache(maxsize=4096)
def _context(atlas: Atlas, charts: ChartTuple) -> LogContext:
    return LogContext.of_charts(atlas.fan, charts, atlas.divisor, atlas.field, atlas.twist)


def alternating_sort(charts: Sequence[int]) -> Tuple[int, Optional[ChartTuple]]:
    """Sign and sorted tuple of an arbitrary chart tuple; (0, None) on repeats."""
    charts = list(charts)
    if len(set(charts)) != len(charts):
        return 0, None
    inversions = sum(1 for a in range(len(charts)) for b in range(a + 1, len(charts)) if charts[a] > charts[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(charts))


class CechCochain:
    """entries: (increasing chart tuple, form degree) → FormSum."""

    __slots__ = ("field", "n", "entries")

    def __init__(self, field: PrimeField, n: int, entries: Optional[Dict] = None):
        self.field = field
        self.n = int(n)
        self.entries: Dict[Tuple[ChartTuple, int], FormSum] = {}
        for (charts, s), form in (entries or {}).items():
            self.add_entry(tuple(charts), s, form)

    def add_entry(self, charts: ChartTuple, s: int, form: FormSum):
        if form.degree != s:
            raise NotCompatible("form degree does not match the entry", degree=form.degree, slot=s)
        key = (tuple(charts), int(s))
        if key in self.entries:
            form = self.entries[key] + form
        if form.is_zero():
            self.entries.pop(key, None)
        else:
            self.entries[key] = form

    @classmethod
    def zero(cls, field: PrimeField, n: int) -> "CechCochain":
        return cls(field, n)

    def component(self, charts: Sequence[int], s: int) -> FormSum:
        return self.entries.get((tuple(charts), s), FormSum.zero(self.field, self.n, s))

    def is_zero(self) -> bool:
        return not self.entries

    def keys(self) -> List[Tuple[ChartTuple, int]]:
        return sorted(self.entries, key=lambda k: (len(k[0]), k[0], k[1]))

    def total_degrees(self) -> List[int]:
        return sorted({len(c) - 1 + s for c, s in self.entries})

    def weights(self) -> List[Weight]:
        return sorted({m for form in self.entries.values() for m in form.terms})

    def restrict_weight(self, m: Sequence[int]) -> "CechCochain":
        m = tuple(m)
        out = CechCochain(self.field, self.n)
        for (charts, s), form in self.entries.items():
            if m in form.terms:
                out.add_entry(charts, s, FormSum(self.field, self.n, s, {m: form.terms[m]}))
        return out

    def __add__(self, other: "CechCochain") -> "CechCochain":
        out = CechCochain(self.field, self.n, self.entries)
        for (charts, s), form in other.entries.items():
            out.add_entry(charts, s, form)
        return out

    def scale(self, c: int) -> "CechCochain":
        return CechCochain(self.field, self.n, {k: f.scale(c) for k, f in self.entries.items()})

    def __neg__(self) -> "CechCochain":
        return self.scale(-1)

    def __sub__(self, other: "CechCochain") -> "CechCochain":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, CechCochain):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return f"CechCochain({[(k, self.entries[k].to_terms()) for k in self.keys()]})"


def total_differential(atlas: Atlas, c: CechCochain, with_d: bool = True) -> CechCochain:
    """D = δ + (−1)^r d on every (r, s) entry; ``with_d=False`` keeps δ only."""
    out = CechCochain(atlas.field, atlas.n)
    for (charts, s), form in c.entries.items():
        r = len(charts) - 1
        if with_d and s < atlas.n:
            out.add_entry(charts, s + 1, form.d().scale((-1) ** r))
        for j in range(atlas.num_charts):
            if j in charts:
                continue
            bigger = tuple(sorted(charts + (j,)))
            out.add_entry(bigger, s, form.scale((-1) ** bigger.index(j)))
    return out


# per-weight complexes

class Block:
    """One summand Γ(U_T, ·)_m in form degree s with a W-adapted basis."""

    __slots__ = ("charts", "s", "space", "basis", "w_labels", "offset", "_to_basis")

    def __init__(self, charts: ChartTuple, s: int, space: Subspace, basis: np.ndarray, w_labels: List[int], offset: int):
        self.charts = charts
        self.s = s
        self.space = space
        self.basis = basis
        self.w_labels = w_labels
        self.offset = offset
        self._to_basis = inverse(space.field, space.coordinates(basis)) if basis.shape[0] else np.zeros((0, 0), dtype=np.int64)

    @property
    def r(self) -> int:
        return len(self.charts) - 1

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coordinates(self, vectors) -> np.ndarray:
        """Rows of coordinates in the adapted basis; NotCompatible off the block."""
        field = self.space.field
        rows = as_rows(vectors, self.space.ambient_dim)
        if self.dim == 0:
            if (rows % field.p).any():
                raise NotCompatible("section is not regular on the overlap", charts=self.charts, degree=self.s)
            return np.zeros((rows.shape[0], 0), dtype=np.int64)
        try:
            coords = self.space.coordinates(rows)
        except NotCompatible as exc:
            raise NotCompatible("section is not regular on the overlap", charts=self.charts, degree=self.s) from exc
        return field.matmul(coords, self._to_basis)


def block_space(atlas: Atlas, charts: ChartTuple, m: Weight, s: int, truncate_at: Optional[int]) -> Subspace:
    ctx = atlas.context(charts)
    space = ctx.form_space(m, s)
    if truncate_at is None or s < truncate_at - 1:
        return space
    if s >= truncate_at:
        return Subspace.zero(atlas.field, rank_of(atlas.n, s))
    dmat = wedge_matrix(atlas.field, atlas.n, np.asarray(m, dtype=np.int64), s)
    return space.intersect(Subspace.preimage(atlas.field, dmat, Subspace.zero(atlas.field, dmat.shape[0])))


def adapted_basis(atlas: Atlas, charts: ChartTuple, m: Weight, s: int, space: Subspace):
    """Basis of ``space`` adapted to W_0 ⊆ W_1 ⊆ … ⊆ W_s, with weight labels."""
    ctx = atlas.context(charts)
    rows, labels = [], []
    prev = Subspace.zero(atlas.field, space.ambient_dim)
    for l in range(s + 1):
        step = space.intersect(weight_subspace(ctx, m, s, l))
        comp = complement_space(step, prev)
        rows.extend(comp.basis)
        labels.extend([l] * comp.dim)
        prev = step
    basis = np.array(rows, dtype=np.int64).reshape(len(rows), space.ambient_dim)
    return basis, labels


class WeightComplex:
    """The weight-m total complex of Č(U, Ω^*(log D) ⊗ L).

    kind "dR" uses D = δ + (−1)^r d on τ_{<p}Ω^*; kind "higgs" uses δ only,
    which is Gr_Fil of the dR complex. Basis vectors carry their weight
    label and their form degree as Hodge label.
    """

    def __init__(self, atlas: Atlas, m: Sequence[int], kind: str = "dR", truncated: bool = True):
        if kind not in ("dR", "higgs"):
            raise ValueError(f"unknown complex kind {kind!r}")
        self.atlas = atlas
        self.weight: Weight = tuple(int(x) for x in m)
        self.kind = kind
        truncate_at = atlas.p if kind == "dR" and truncated else None
        self.blocks: Dict[int, List[Block]] = {}
        self._index: Dict[Tuple[ChartTuple, int], Block] = {}
        top = atlas.num_charts - 1 + atlas.n
        for k in range(top + 1):
            offset = 0
            blocks = []
            for r in range(min(k, atlas.num_charts - 1) + 1):
                s = k - r
                if s > atlas.n:
                    continue
                for charts in atlas.tuples(r):
                    space = block_space(atlas, charts, self.weight, s, truncate_at)
                    basis, labels = adapted_basis(atlas, charts, self.weight, s, space)
                    block = Block(charts, s, space, basis, labels, offset)
                    offset += block.dim
                    blocks.append(block)
                    self._index[(charts, s)] = block
            self.blocks[k] = blocks
        self.complex = self._assemble()

    def dim(self, k: int) -> int:
        return sum(b.dim for b in self.blocks.get(k, []))

    def block(self, charts: ChartTuple, s: int) -> Optional[Block]:
        return self._index.get((tuple(charts), s))

    def _assemble(self) -> FilteredComplexFp:
        atlas, field = self.atlas, self.atlas.field
        degrees = sorted(self.blocks)
        dims = {k: self.dim(k) for k in degrees}
        d = {}
        for k in degrees:
            mat = np.zeros((dims.get(k + 1, 0), dims[k]), dtype=np.int64)
            for src in self.blocks[k]:
                if src.dim == 0:
                    continue
                cols = slice(src.offset, src.offset + src.dim)
                if self.kind == "dR" and src.s < atlas.n:
                    tgt = self.block(src.charts, src.s + 1)
                    if tgt is not None and tgt.dim:
                        wm = wedge_matrix(field, atlas.n, np.asarray(self.weight, dtype=np.int64), src.s)
                        images = field.matmul(src.basis, wm.T)
                        coords = tgt.coordinates(images)
                        mat[tgt.offset : tgt.offset + tgt.dim, cols] += (-1) ** src.r * coords.T
                for j in range(atlas.num_charts):
                    if j in src.charts:
                        continue
                    bigger = tuple(sorted(src.charts + (j,)))
                    tgt = self.block(bigger, src.s)
                    if tgt is None or tgt.dim == 0:
                        continue
                    coords = tgt.coordinates(src.basis)
                    mat[tgt.offset : tgt.offset + tgt.dim, cols] += (-1) ** bigger.index(j) * coords.T
            d[k] = mat % field.p
        w = {k: [x for b in self.blocks[k] for x in b.w_labels] for k in degrees}
        f = {k: [b.s for b in self.blocks[k] for _ in range(b.dim)] for k in degrees}
        return FilteredComplexFp(field, dims, d, w, f, name=f"{self.kind}{list(self.weight)}")

    # translation between cochains and coordinates

    def vector(self, c: CechCochain, k: int) -> np.ndarray:
        """Coordinates of the weight-m part of c in total degree k."""
        field = self.atlas.field
        out = np.zeros(self.dim(k), dtype=np.int64)
        for (charts, s), form in c.entries.items():
            if len(charts) - 1 + s != k:
                continue
            vec = form.terms.get(self.weight)
            if vec is None:
                continue
            block = self.block(charts, s)
            if block is None:
                raise NotCompatible("cochain entry outside the complex", charts=charts, degree=s)
            out[block.offset : block.offset + block.dim] += block.coordinates(vec)[0]
        return out % field.p

    def cochain(self, vector, k: int) -> CechCochain:
        atlas = self.atlas
        vec = np.asarray(vector, dtype=np.int64).reshape(-1)
        out = CechCochain(atlas.field, atlas.n)
        for block in self.blocks.get(k, []):
            part = vec[block.offset : block.offset + block.dim]
            if block.dim == 0 or not part.any():
                continue
            form_vec = atlas.field.matmul(part, block.basis)
            out.add_entry(block.charts, block.s, FormSum(atlas.field, atlas.n, block.s, {self.weight: form_vec}))
        return out

    def basis_cochain(self, k: int, index: int) -> CechCochain:
        e = np.zeros(self.dim(k), dtype=np.int64)
        e[index] = 1
        return self.cochain(e, k)

    def is_exact(self) -> bool:
        return not any(self.complex.cohomology_dims().values())


@lru_cache(maxsize=8192)
def weight_complex(atlas: Atlas, m: Weight, kind: str = "dR", truncated: bool = True) -> WeightComplex:
    return WeightComplex(atlas, m, kind, truncated)


# hypercohomology

class Selector(NamedTuple):
    """Subcomplex selector: W_w (if w is set) intersected with Fil^fil (if set).

    ``below`` keeps only Hodge labels under it; on the Higgs complex that is
    the truncation to form degrees i < below.
    """

    w: Optional[int] = None
    fil: Optional[int] = None
    below: Optional[int] = None

    def keep(self, K: FilteredComplexFp) -> Dict[int, List[int]]:
        keep = {}
        for k in K.degrees:
            keep[k] = [
                i
                for i in range(K.dim(k))
                if (self.w is None or K.w_labels[k][i] <= self.w)
                and (self.fil is None or K.fil_labels[k][i] >= self.fil)
                and (self.below is None or K.fil_labels[k][i] < self.below)
            ]
        return keep


class HypercohomologyResult(NamedTuple):
    weight: Weight
    dims: Dict[int, int]
    bases: Dict[int, np.ndarray]


def hypercohomology(atlas: Atlas, m: Sequence[int], selector: Optional[Selector] = None, kind: str = "dR") -> HypercohomologyResult:
    """H^* of the weight-m complex, or of the subcomplex picked by ``selector``.

    Bases are cocycle representatives (rows) in the coordinates of the
    selected subcomplex.
    """
    K = weight_complex(atlas, tuple(m), kind).complex
    if selector is not None and any(v is not None for v in selector):
        K = K.restrict(selector.keep(K))
    dims, bases = {}, {}
    for k in K.degrees:
        H = K.cohomology(k)
        dims[k] = H.dim
        bases[k] = H.basis
    return HypercohomologyResult(tuple(m), dims, bases)


def hypercohomology_dims(atlas: Atlas, weights: Iterable[Weight], selector: Optional[Selector] = None, kind: str = "dR") -> Dict[int, int]:
    total: Dict[int, int] = {}
    for m in weights:
        for k, v in hypercohomology(atlas, m, selector, kind).dims.items():
            total[k] = total.get(k, 0) + v
    return total


def sheaf_cohomology(atlas: Atlas, m: Sequence[int], i: int, l: Optional[int] = None) -> Dict[int, int]:
    """dim H^j(X, W_l Ω^i(log D) ⊗ L)_m for every j (Čech complex of one sheaf)."""
    K = weight_complex(atlas, tuple(m), "higgs").complex
    keep = {
        k: [x for x in range(K.dim(k)) if K.fil_labels[k][x] == i and (l is None or K.w_labels[k][x] <= l)]
        for k in K.degrees
    }
    G = K.restrict(keep)
    dims = G.cohomology_dims()
    return {j: dims.get(i + j, 0) for j in range(atlas.num_charts)}


def filtered_dims(atlas: Atlas, m: Sequence[int], k: int, kind: str = "dR") -> dict:
    """Dimensions of the W and Fil steps induced on H^k."""
    K = weight_complex(atlas, tuple(m), kind).complex
    w_flag, fil_flag = induced_flags(K, k)
    return {"W": w_flag.dims(), "Fil": fil_flag.dims(), "W_start": w_flag.start, "Fil_start": fil_flag.start}


def euler_audit(atlas: Atlas, m: Sequence[int], kind: str = "dR") -> dict:
    K = weight_complex(atlas, tuple(m), kind).complex
    chi_cochains = K.euler_characteristic()
    chi_h = sum((-1) ** k * v for k, v in K.cohomology_dims().items())
    return {"cochains": chi_cochains, "cohomology": chi_h, "status": "PASS" if chi_cochains == chi_h else "FAIL"}


def shell_audit(atlas: Atlas, kind: str = "higgs") -> Callable[[Weight], bool]:
    """Callable m ↦ exactness of the weight-m complex, for weight_support."""
    return lambda m: weight_complex(atlas, tuple(m), kind).is_exact()


# classes

class ClassResult(NamedTuple):
    """[c] = Σ coords · basis and c = representative + D(primitive)."""

    coords: np.ndarray
    primitive: CechCochain


class CohomologyBasis:
    """A fixed basis of H^k over a list of basis weights, in lex weight order.

    Weights outside the list are solved on demand and must carry no
    cohomology in the degree asked for.
    """

    def __init__(self, atlas: Atlas, weights: Iterable[Weight], kind: str = "dR"):
        self.atlas = atlas
        self.kind = kind
        self.weights: List[Weight] = sorted({tuple(m) for m in weights})
        self._weight_set = set(self.weights)

    def complex_at(self, m: Weight) -> WeightComplex:
        return weight_complex(self.atlas, tuple(m), self.kind)

    def cohomology_at(self, m: Weight, k: int) -> Subquotient:
        return self.complex_at(m).complex.cohomology(k)

    def layout(self, k: int) -> List[Tuple[Weight, int, int]]:
        """(weight, offset, dim) of every basis weight with H^k ≠ 0."""
        out, offset = [], 0
        for m in self.weights:
            dim = self.cohomology_at(m, k).dim
            if dim:
                out.append((m, offset, dim))
                offset += dim
        return out

    def dim(self, k: int) -> int:
        return sum(dim for _, _, dim in self.layout(k))

    def representative(self, k: int, index: int) -> CechCochain:
        for m, offset, dim in self.layout(k):
            if offset <= index < offset + dim:
                wc = self.complex_at(m)
                H = wc.complex.cohomology(k)
                return wc.cochain(H.basis[index - offset], k)
        raise IndexError(index)

    def class_of(self, c: CechCochain, k: int) -> ClassResult:
        """Coordinates of [c] in this basis, with a primitive of c − representative.

        Raises:
            NotACocycle: D c ≠ 0 in some weight.
            RadiusTooSmall: c has a nonzero class in a weight outside the basis.
        """
        field = self.atlas.field
        layout = {m: (offset, dim) for m, offset, dim in self.layout(k)}
        total = sum(dim for _, dim in layout.values())
        coords = np.zeros(total, dtype=np.int64)
        primitive = CechCochain(field, self.atlas.n)
        for m in c.weights():
            wc = self.complex_at(m)
            x = wc.vector(c, k)
            if field.matmul(wc.complex.differential(k), x).any():
                raise NotACocycle("cochain is not D-closed", weight=m, degree=k)
            H = wc.complex.cohomology(k)
            local = H.coordinates(x)[0] if H.dim else np.zeros(0, dtype=np.int64)
            if local.any():
                if m not in layout:
                    raise RadiusTooSmall("class has a component outside the weight support", weight=m, degree=k)
                offset, dim = layout[m]
                coords[offset : offset + dim] = local
            rest = (x - (H.lift(local)[0] if H.dim else 0)) % field.p
            if rest.any():
                y = solve(field, wc.complex.differential(k - 1), rest)
                if y is None:
                    raise NotACocycle("remainder is not a coboundary", weight=m, degree=k)
                primitive = primitive + wc.cochain(y, k - 1)
        return ClassResult(coords % field.p, primitive)


def class_of(basis: CohomologyBasis, c: CechCochain, degree: int) -> ClassResult:
    return basis.class_of(c, degree)


def dr_basis_weights(atlas: Atlas, support: Iterable[Weight]) -> List[Weight]:
    """The dR weights paired with the Higgs weights of the support: p·m′."""
    p = atlas.p
    return sorted({tuple(p * x for x in m) for m in support})


def _embed(block: Block, space: Subspace, total_dim: int) -> np.ndarray:
    rows = np.zeros((space.dim, total_dim), dtype=np.int64)
    if space.dim:
        rows[:, block.offset : block.offset + block.dim] = space.basis
    return rows


def mu_check_global(atlas: Atlas, m: Sequence[int], l: int) -> dict:
    """Gr^W_l τ_{<p} against τ_{<p} Gr^W_l on the whole Čech complex in weight m.

    Both sides are subquotients of the untruncated complex, so one
    differential serves for both.
    """
    field, p = atlas.field, atlas.p
    m = tuple(int(x) for x in m)
    wc = WeightComplex(atlas, m, "dR", truncated=False)
    C = wc.complex
    mvec = np.asarray(m, dtype=np.int64)
    sides: Dict[str, Dict[int, Subspace]] = {"la": {}, "lb": {}, "ra": {}, "rb": {}}
    for k in C.degrees:
        rows: Dict[str, list] = {key: [] for key in sides}
        for block in wc.blocks[k]:
            if block.dim == 0:
                continue
            s = block.s
            W = Subspace.coordinate(field, block.dim, [x for x, w in enumerate(block.w_labels) if w <= l])
            Wp = Subspace.coordinate(field, block.dim, [x for x, w in enumerate(block.w_labels) if w <= l - 1])
            if s <= p - 2:
                T, R = Subspace.full(field, block.dim), W
            elif s == p - 1:
                dm = field.matmul(wedge_matrix(field, atlas.n, mvec, s), block.basis.T)
                T = Subspace.preimage(field, dm, Subspace.zero(field, dm.shape[0]))
                nxt = weight_subspace(atlas.context(block.charts), m, s + 1, l - 1)
                R = W.intersect(Subspace.preimage(field, dm, nxt)) if s < atlas.n else W
            else:
                T = R = Subspace.zero(field, block.dim)
            for key, space in (("la", W.intersect(T)), ("lb", Wp.intersect(T)), ("ra", R), ("rb", Wp)):
                rows[key].append(_embed(block, space, C.dim(k)))
        for key, parts in rows.items():
            stacked = np.vstack(parts) if parts else np.zeros((0, C.dim(k)), dtype=np.int64)
            sides[key][k] = Subspace.span(field, C.dim(k), stacked)
    lhs = subquotient_cohomology_dims(field, C.d, sides["la"], sides["lb"], C.degrees)
    rhs = subquotient_cohomology_dims(field, C.d, sides["ra"], sides["rb"], C.degrees)
    return {
        "weight": list(m),
        "level": l,
        "p": p,
        "lhs": [lhs[k] for k in C.degrees],
        "rhs": [rhs[k] for k in C.degrees],
        "status": "PASS" if lhs == rhs else "FAIL",
    }
