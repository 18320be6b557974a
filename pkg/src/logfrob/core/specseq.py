"""
Spectral sequences of filtered complexes over F_p.

Pages are computed from the Z_r / B_r description: with F^i the
decreasing filtration (F^i = W_{−i} for the weight spectral sequence,
F^i = Fil^i for the Hodge one),

    Z_r^i = F^i ∩ d⁻¹F^{i+r}
    B_r^i = (dF^{i−r+1} ∩ F^i) + Z_{r−1}^{i+1}
    E_r^i = Z_r^i / B_r^i

Every construction also accepts a pair (A, B) of subcomplexes and then
works on (A + B)/B; this is how E_r(Fil^l K) and E_r(K/Fil^l K) are
compared with E_r(K) without changing coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..algebra.complexes import FilteredComplexFp, direct_sum, induced_flags, subquotient_cohomology_dims
from ..algebra.exactlin import Flag, Subquotient, Subspace, inverse, rank, subquotient_map
from ..errors import AxiomViolation, NoDegeneration, NotCompatible, NotInvertible
from .cech import weight_complex
from .flmod import FLModule, FLMorphism, graded_basis, kernel_cokernel, lift_into, strictness_check
from .frobsplit import psi_cochain

Spot = Tuple[int, int]

__all__ = [
    "Page",
    "SpectralSequence",
    "pages",
    "three_filtrations",
    "strictness_check",
    "deligne_exact_sequence",
    "MFLComplex",
    "mfl_pages",
    "fl_structure_on_H",
    "direct_sum",
]


@dataclass
class Page:
    """E_r: spot (i, k) with filtration index i and total degree k."""

    r: int
    along: str
    spots: Dict[Spot, Subquotient]
    d: Dict[Spot, np.ndarray]

    def dims(self) -> Dict[Spot, int]:
        return {spot: E.dim for spot, E in self.spots.items()}

    def table(self) -> List[dict]:
        """Nonzero spots as (i, j = k − i, dim, rank of d_r)."""
        field_rank = {spot: _rank_of(self, spot) for spot, d in self.d.items() if d.any()}
        return [
            {"i": i, "j": k - i, "dim": E.dim, "d_rank": field_rank.get((i, k), 0)}
            for (i, k), E in sorted(self.spots.items())
            if E.dim
        ]

    def is_degenerate(self) -> bool:
        return not any(d.any() for d in self.d.values())

    def total(self, k: int) -> int:
        return sum(E.dim for (i, kk), E in self.spots.items() if kk == k)


def _rank_of(page: Page, spot: Spot) -> int:
    E = page.spots[spot]
    return rank(E.field, page.d[spot])


class SpectralSequence:
    """The spectral sequence of K along W or Fil, on the subquotient (A + B)/B."""

    def __init__(
        self,
        K: FilteredComplexFp,
        along: str = "W",
        A: Optional[Mapping[int, Subspace]] = None,
        B: Optional[Mapping[int, Subspace]] = None,
    ):
        if along not in ("W", "Fil"):
            raise ValueError(f"unknown filtration {along!r}")
        self.K = K
        self.field = K.field
        self.along = along
        self.B = {k: (B[k] if B is not None and k in B else K.zero(k)) for k in K.degrees}
        self.A = {k: (A[k] if A is not None and k in A else K.full(k)) + self.B[k] for k in K.degrees}
        if along == "W":
            lo, hi = K.w_range()
            self.lo, self.hi = -hi, -lo
        else:
            self.lo, self.hi = K.fil_range()
        self._cache: Dict[tuple, Subspace] = {}

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def _raw_step(self, i: int, k: int) -> Subspace:
        if k not in self.K.dims:
            return Subspace.zero(self.field, 0)
        if self.along == "W":
            return self.K.w_step(k, -i)
        return self.K.fil_step(k, i)

    def F(self, i: int, k: int) -> Subspace:
        key = ("F", i, k)
        if key not in self._cache:
            if k not in self.K.dims:
                self._cache[key] = Subspace.zero(self.field, 0)
            else:
                self._cache[key] = self._raw_step(i, k).intersect(self.A[k]) + self.B[k]
        return self._cache[key]

    def Z(self, r: int, i: int, k: int) -> Subspace:
        key = ("Z", r, i, k)
        if key not in self._cache:
            target = self.F(i + r, k + 1)
            pre = Subspace.preimage(self.field, self.K.differential(k), target)
            self._cache[key] = self.F(i, k).intersect(pre)
        return self._cache[key]

    def Bd(self, r: int, i: int, k: int) -> Subspace:
        key = ("B", r, i, k)
        if key not in self._cache:
            if k - 1 in self.K.dims:
                boundary = self.F(i - r + 1, k - 1).image(self.K.differential(k - 1)) + self.B[k]
            else:
                boundary = self.B[k]
            self._cache[key] = boundary.intersect(self.F(i, k)) + self.Z(r - 1, i + 1, k)
        return self._cache[key]

    def E(self, r: int, i: int, k: int) -> Subquotient:
        return Subquotient(self.Z(r, i, k), self.Bd(r, i, k))

    def spots(self) -> List[Spot]:
        return [(i, k) for k in self.K.degrees for i in range(self.lo, self.hi + 1)]

    def page(self, r: int) -> Page:
        spots = {spot: self.E(r, *spot) for spot in self.spots()}
        d = {}
        for (i, k), E in spots.items():
            target = spots.get((i + r, k + 1))
            if target is None:
                d[(i, k)] = np.zeros((0, E.dim), dtype=np.int64)
            else:
                d[(i, k)] = subquotient_map(self.field, self.K.differential(k), E, target)
        return Page(r, self.along, spots, d)

    def cohomology_dims(self) -> Dict[int, int]:
        return subquotient_cohomology_dims(self.field, self.K.d, self.A, self.B, self.K.degrees)


def pages(K: FilteredComplexFp, along: str = "W", r_max: Optional[int] = None, A=None, B=None) -> dict:
    """Pages 0..r_max (default: filtration length + 1) with degeneration radius and convergence audit."""
    ss = SpectralSequence(K, along, A, B)
    top = ss.length + 1 if r_max is None else r_max
    result = [ss.page(r) for r in range(top + 1)]
    radius = 1
    for page in result[1:]:
        if not page.is_degenerate():
            radius = page.r + 1
    h = ss.cohomology_dims()
    last = result[-1]
    convergence = {k: {"E_inf": last.total(k), "H": h[k]} for k in K.degrees}
    return {
        "sequence": ss,
        "pages": result,
        "radius": radius,
        "convergence": convergence,
        "converges": all(v["E_inf"] == v["H"] for v in convergence.values()),
        "recursion": page_recursion_audit(result),
    }


def page_recursion_audit(result: List[Page]) -> bool:
    """dim E_{r+1} = dim ker d_r − rank of the incoming d_r, and d_r∘d_r = 0."""
    for page, nxt in zip(result, result[1:]):
        r = page.r
        for (i, k), E in page.spots.items():
            out = page.d[(i, k)]
            field = E.field
            incoming = page.d.get((i - r, k - 1))
            rank_in = rank(field, incoming) if incoming is not None and incoming.size else 0
            if incoming is not None and incoming.size and out.size and field.matmul(out, incoming).any():
                return False
            kernel = E.dim - (rank(field, out) if out.size else 0)
            if nxt.spots[(i, k)].dim != kernel - rank_in:
                return False
    return True


# filtrations on pages

def _in_page(E: Subquotient, lifted: Subspace) -> Subspace:
    if E.dim == 0 or lifted.dim == 0:
        return Subspace.zero(E.field, E.dim)
    return Subspace.span(E.field, E.dim, E.coordinates(lifted.basis))


def _fil_levels(K: FilteredComplexFp) -> range:
    flo, fhi = K.fil_range()
    return range(flo, fhi + 2)


def _fil_sub(ss: SpectralSequence, l: int) -> Dict[int, Subspace]:
    return {k: ss.K.fil_step(k, l).intersect(ss.A[k]) for k in ss.K.degrees}


@dataclass
class FiltrationsOnPage:
    """Lifted steps (subspaces of Z_r containing B_r) per spot and Hodge level."""

    r: int
    levels: range
    f_d: Dict[Spot, Dict[int, Subspace]] = dc_field(default_factory=dict)
    f_dstar: Dict[Spot, Dict[int, Subspace]] = dc_field(default_factory=dict)
    f_rec: Dict[Spot, Dict[int, Subspace]] = dc_field(default_factory=dict)

    def flag(self, which: str, spot: Spot, E: Subquotient) -> Flag:
        steps = getattr(self, which)[spot]
        return Flag([_in_page(E, steps[l]) for l in self.levels], start=self.levels.start, decreasing=True)


class FiltrationEngine:
    """F_d, F_{d*} and the recursive F_rec of the Hodge filtration on the W-pages (or Fil-pages)."""

    def __init__(self, ss: SpectralSequence):
        self.ss = ss
        self.levels = _fil_levels(ss.K)
        self._subs = {l: SpectralSequence(ss.K, ss.along, {k: v + ss.B[k] for k, v in _fil_sub(ss, l).items()}, ss.B) for l in self.levels}
        self._quots = {l: SpectralSequence(ss.K, ss.along, ss.A, {k: ss.B[k] + v for k, v in _fil_sub(ss, l).items()}) for l in self.levels}
        self._rec: Dict[int, Dict[Spot, Dict[int, Subspace]]] = {}

    def sub_sequence(self, l: int) -> SpectralSequence:
        """The spectral sequence of Fil^l K, with the same W (or Fil) steps."""
        return self._subs[l]

    def quotient_sequence(self, l: int) -> SpectralSequence:
        """The spectral sequence of K / Fil^l K."""
        return self._quots[l]

    def f_d(self, r: int, spot: Spot, l: int) -> Subspace:
        i, k = spot
        return self._subs[l].Z(r, i, k) + self.ss.Bd(r, i, k)

    def f_dstar(self, r: int, spot: Spot, l: int) -> Subspace:
        i, k = spot
        return self.ss.Z(r, i, k).intersect(self._quots[l].Bd(r, i, k)) + self.ss.Bd(r, i, k)

    def f_rec(self, r: int) -> Dict[Spot, Dict[int, Subspace]]:
        if r in self._rec:
            return self._rec[r]
        ss = self.ss
        if r == 0:
            out = {spot: {l: self.f_d(0, spot, l) for l in self.levels} for spot in ss.spots()}
        else:
            prev = self.f_rec(r - 1)
            out = {
                (i, k): {l: prev[(i, k)][l].intersect(ss.Z(r, i, k)) + ss.Bd(r, i, k) for l in self.levels}
                for (i, k) in ss.spots()
            }
        self._rec[r] = out
        return out

    def on_page(self, r: int) -> FiltrationsOnPage:
        result = FiltrationsOnPage(r, self.levels)
        rec = self.f_rec(r)
        for spot in self.ss.spots():
            result.f_d[spot] = {l: self.f_d(r, spot, l) for l in self.levels}
            result.f_dstar[spot] = {l: self.f_dstar(r, spot, l) for l in self.levels}
            result.f_rec[spot] = rec[spot]
        return result


def three_filtrations(K: FilteredComplexFp, r: int, along: str = "W") -> dict:
    """F_d, F_{d*} and F_rec as flags on every E_r spot, with the containment audit."""
    ss = SpectralSequence(K, along)
    engine = FiltrationEngine(ss)
    filtrations = engine.on_page(r)
    out = {}
    for spot in ss.spots():
        E = ss.E(r, *spot)
        flags = {which: filtrations.flag(which, spot, E) for which in ("f_d", "f_rec", "f_dstar")}
        contained = all(
            flags["f_rec"].step(l).contains_space(flags["f_d"].step(l))
            and flags["f_dstar"].step(l).contains_space(flags["f_rec"].step(l))
            for l in engine.levels
        )
        out[spot] = {
            "dim": E.dim,
            "flags": flags,
            "contained": contained,
            "coincide": flags["f_d"] == flags["f_rec"] and flags["f_rec"] == flags["f_dstar"],
        }
    return out


def deligne_exact_sequence(K: FilteredComplexFp, r: int, l: int, along: str = "W") -> dict:
    """0 → E_r(Fil^l K) → E_r(K) → E_r(K/Fil^l K) → 0 on every spot.

    The sequence is expected exact when every d_s with s < r is strict for
    F_rec; otherwise the result is SKIPPED.
    """
    ss = SpectralSequence(K, along)
    engine = FiltrationEngine(ss)
    sub, quot = engine.sub_sequence(l), engine.quotient_sequence(l)
    hypothesis = True
    for s in range(r):
        rec = engine.f_rec(s)
        page = ss.page(s)
        for (i, k), E in page.spots.items():
            target = page.spots.get((i + s, k + 1))
            if target is None or not page.d[(i, k)].size:
                continue
            src_flag = FiltrationsOnPage(s, engine.levels, f_rec=rec).flag("f_rec", (i, k), E)
            dst_flag = FiltrationsOnPage(s, engine.levels, f_rec=rec).flag("f_rec", (i + s, k + 1), target)
            if strictness_check(ss.field, page.d[(i, k)], src_flag, dst_flag)["status"] != "PASS":
                hypothesis = False
    rows = []
    exact = True
    for spot in ss.spots():
        i, k = spot
        E = ss.E(r, i, k)
        E_sub = sub.E(r, i, k)
        E_quot = quot.E(r, i, k)
        eye = K.field.identity(K.dim(k))
        into = subquotient_map(ss.field, eye, E_sub, E)
        onto = subquotient_map(ss.field, eye, E, E_quot)
        rank_in = rank(ss.field, into) if into.size else 0
        rank_out = rank(ss.field, onto) if onto.size else 0
        ok = rank_in == E_sub.dim and rank_out == E_quot.dim and E.dim == E_sub.dim + E_quot.dim
        ok = ok and not (onto.size and into.size and ss.field.matmul(onto, into).any())
        exact = exact and ok
        if E.dim or E_sub.dim or E_quot.dim:
            rows.append({"i": i, "j": k - i, "sub": E_sub.dim, "total": E.dim, "quotient": E_quot.dim, "ranks": [rank_in, rank_out]})
    status = "PASS" if exact else ("FAIL" if hypothesis else "SKIPPED")
    return {"r": r, "level": l, "strict_below": hypothesis, "spots": rows, "status": status}


# mixed Fontaine–Laffaille complexes

@dataclass
class MFLComplex:
    """(K_dR, W, Fil), K_Hig = Gr_Fil K_dR and a W-filtered quasi-isomorphism ψ: K_Hig → K_dR."""

    dR: FilteredComplexFp
    hig: FilteredComplexFp
    psi: Dict[int, np.ndarray]
    name: str = ""

    @classmethod
    def of(cls, dR: FilteredComplexFp, psi: Mapping[int, np.ndarray], name: str = "") -> "MFLComplex":
        return cls(dR, dR.gr_fil(), {k: np.asarray(v, dtype=np.int64) % dR.field.p for k, v in psi.items()}, name)

    @property
    def field(self):
        return self.dR.field

    def psi_at(self, k: int) -> np.ndarray:
        if k in self.psi:
            return self.psi[k]
        return np.zeros((self.dR.dim(k), self.hig.dim(k)), dtype=np.int64)

    def validate(self) -> dict:
        """Check the axioms; raises AxiomViolation naming the first one that fails."""
        field = self.field
        try:
            self.dR.check()
        except NotCompatible as exc:
            raise AxiomViolation("dR complex is not a bifiltered complex", axiom="filtered", detail=str(exc)) from exc
        expected = self.dR.gr_fil()
        for k in self.dR.degrees:
            if not np.array_equal(expected.differential(k), self.hig.differential(k)):
                raise AxiomViolation("Higgs complex is not Gr_Fil of the dR complex", axiom="graded", degree=k)
        for k in self.dR.degrees:
            left = field.matmul(self.psi_at(k + 1), self.hig.differential(k))
            right = field.matmul(self.dR.differential(k), self.psi_at(k))
            if not np.array_equal(left, right):
                raise AxiomViolation("ψ is not a chain map", axiom="chain_map", degree=k)
            rows, cols = np.nonzero(self.psi_at(k))
            for a, b in zip(rows.tolist(), cols.tolist()):
                if self.dR.w_labels[k][a] > self.hig.w_labels[k][b]:
                    raise AxiomViolation("ψ does not respect W", axiom="w_filtered", degree=k)
        levels = {}
        wlo, whi = self.dR.w_range()
        for l in range(wlo, whi + 1):
            levels[l] = self._gr_quasi_iso(l)
            if not all(levels[l].values()):
                raise AxiomViolation("Gr^W ψ is not a quasi-isomorphism", axiom="gr_quasi_iso", level=l)
        return {"axioms": ["filtered", "graded", "chain_map", "w_filtered", "gr_quasi_iso"], "status": "PASS"}

    def _gr_quasi_iso(self, l: int) -> Dict[int, bool]:
        field = self.field
        G_dr, G_hig = self.dR.gr_w(l), self.hig.gr_w(l)
        out = {}
        for k in self.dR.degrees:
            rows = [x for x, w in enumerate(self.dR.w_labels[k]) if w == l]
            cols = [x for x, w in enumerate(self.hig.w_labels[k]) if w == l]
            block = self.psi_at(k)[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
            H_hig, H_dr = G_hig.cohomology(k), G_dr.cohomology(k)
            if H_hig.dim != H_dr.dim:
                out[k] = False
                continue
            induced = subquotient_map(field, block, H_hig, H_dr)
            try:
                inverse(field, induced)
                out[k] = True
            except NotInvertible:
                out[k] = False
        return out


def mu_comparison(K: FilteredComplexFp, k: int, E_dr: Subquotient, E_hig: Subquotient, rec: Flag):
    """μ: Gr_{F_rec} E_{r,dR} → E_{r,Hig} on the adapted basis of F_rec.

    Each graded basis class is lifted into Z_r ∩ Fil^l, cut down to its
    Hodge-label-l part and read in E_{r,Hig}. Returns (μ, basis, levels).
    """
    field = K.field
    basis, levels = graded_basis(rec)
    labels = np.asarray(K.fil_labels[k], dtype=np.int64)
    cols = []
    for coords, l in zip(basis, levels):
        v = lift_into(E_dr, K.fil_step(k, l), coords)
        if v is None:
            raise AxiomViolation("class has no lift into Z_r ∩ Fil^l", axiom="mu_lift", degree=k, level=l)
        part = np.where(labels == l, v, 0) % field.p
        try:
            cols.append(E_hig.coordinates(part)[0])
        except NotCompatible as exc:
            raise AxiomViolation("graded part is not a Higgs cycle", axiom="mu_cycle", degree=k, level=l) from exc
    mu = np.array(cols, dtype=np.int64).reshape(len(cols), E_hig.dim).T
    return mu, basis, levels


def _graded_part(field, d: np.ndarray, src_basis, src_levels, dst_basis, dst_levels) -> np.ndarray:
    """Gr(d) in adapted bases: the same-level entries of d written in those bases."""
    if not src_basis.shape[0] or not dst_basis.shape[0]:
        return np.zeros((dst_basis.shape[0], src_basis.shape[0]), dtype=np.int64)
    images = field.matmul(src_basis, d.T)
    coords = field.matmul(images, inverse(field, dst_basis)).T
    same = np.array([[a == b for b in src_levels] for a in dst_levels], dtype=bool)
    return np.where(same, coords, 0) % field.p


def _invertible(field, matrix: np.ndarray) -> bool:
    if matrix.shape[0] != matrix.shape[1]:
        return False
    try:
        inverse(field, matrix)
        return True
    except NotInvertible:
        return False


def _flag_dims(flag: Flag, levels: range) -> List[int]:
    return [flag.step(l).dim for l in levels]


def mfl_pages(M: MFLComplex, r_max: Optional[int] = None) -> dict:
    """Paired W-pages of K_dR and K_Hig with ψ_r, the three Hodge filtrations and μ.

    Per page and spot it records whether ψ_r is invertible and intertwines
    d_r, whether F_d = F_rec = F_{d*}, whether d_r is F_rec-strict and
    whether μ is an isomorphism commuting with the graded differentials.
    Every nonzero d_r,dR is also run through the FL kernel/cokernel
    construction.

    Raises:
        AxiomViolation: M is not a mixed FL complex.
    """
    M.validate()
    field = M.field
    ss_dr, ss_hig = SpectralSequence(M.dR, "W"), SpectralSequence(M.hig, "W")
    engine = FiltrationEngine(ss_dr)
    top = ss_dr.length + 1 if r_max is None else r_max
    report = []
    radius = 1
    ok = True
    for r in range(top + 1):
        page_dr, page_hig = ss_dr.page(r), ss_hig.page(r)
        if r >= 1 and not page_dr.is_degenerate():
            radius = r + 1
        filtrations = engine.on_page(r)
        data = {}
        spots = []
        for spot in ss_dr.spots():
            i, k = spot
            E_dr, E_hig = page_dr.spots[spot], page_hig.spots[spot]
            psi_r = subquotient_map(field, M.psi_at(k), E_hig, E_dr)
            rec = filtrations.flag("f_rec", spot, E_dr)
            f_d = filtrations.flag("f_d", spot, E_dr)
            f_dstar = filtrations.flag("f_dstar", spot, E_dr)
            mu, basis, levels = mu_comparison(M.dR, k, E_dr, E_hig, rec)
            psi_ok, mu_ok = _invertible(field, psi_r), _invertible(field, mu)
            module = FLModule(field, rec, field.matmul(psi_r, mu), name=f"E{r}[{i},{k - i}]") if psi_ok and mu_ok else None
            data[spot] = (psi_r, rec, mu, basis, levels, module)
            entry = {
                "i": i,
                "j": k - i,
                "dim_dR": E_dr.dim,
                "dim_higgs": E_hig.dim,
                "psi_invertible": psi_ok,
                "mu_invertible": mu_ok,
                "coincide": f_d == rec and rec == f_dstar,
                "fil_rec": _flag_dims(rec, engine.levels),
            }
            ok = ok and psi_ok and mu_ok and entry["coincide"]
            if E_dr.dim or E_hig.dim:
                spots.append(entry)
        arrows = []
        for spot in ss_dr.spots():
            i, k = spot
            tgt = (i + r, k + 1)
            if tgt not in data:
                continue
            d_dr, d_hig = page_dr.d[spot], page_hig.d[spot]
            if not d_dr.size and not d_hig.size:
                continue
            psi_src, rec_src, mu_src, b_src, l_src, mod_src = data[spot]
            psi_tgt, rec_tgt, mu_tgt, b_tgt, l_tgt, mod_tgt = data[tgt]
            intertwines = np.array_equal(field.matmul(psi_tgt, d_hig), field.matmul(d_dr, psi_src))
            strict = strictness_check(field, d_dr, rec_src, rec_tgt)
            gr_d = _graded_part(field, d_dr, b_src, l_src, b_tgt, l_tgt)
            mu_commutes = np.array_equal(field.matmul(mu_tgt, gr_d), field.matmul(d_hig, mu_src))
            arrow = {
                "from": [i, k - i],
                "to": [tgt[0], tgt[1] - tgt[0]],
                "rank": rank(field, d_dr) if d_dr.size else 0,
                "intertwines": intertwines,
                "strict": strict["status"],
                "mu_commutes": mu_commutes,
            }
            if d_dr.any() and mod_src is not None and mod_tgt is not None:
                pieces = kernel_cokernel(FLMorphism(mod_src, mod_tgt, d_dr))
                arrow["kernel"] = pieces.kernel.validate()["status"]
                arrow["cokernel"] = pieces.cokernel.validate()["status"]
                ok = ok and arrow["kernel"] == "PASS" and arrow["cokernel"] == "PASS"
            ok = ok and intertwines and strict["status"] == "PASS" and mu_commutes
            arrows.append(arrow)
        report.append({"r": r, "spots": spots, "differentials": arrows})
    return {"pages": report, "radius": radius, "status": "PASS" if ok else "FAIL"}


def fl_structure_on_H(M: MFLComplex, k: int) -> FLModule:
    """H^k(K_dR) with the induced Fil and ψ: Gr_Fil H^k → H^k.

    Raises:
        NoDegeneration: the Hodge spectral sequence of K_dR does not
            degenerate at E₁ in degree k.
    """
    K, field = M.dR, M.field
    H = K.cohomology(k)
    flo, fhi = K.fil_range()
    graded = sum(K.gr_fil(l).cohomology(k).dim for l in range(flo, fhi + 1))
    if graded != H.dim:
        raise NoDegeneration("Hodge spectral sequence does not degenerate at E₁", degree=k, graded=graded, total=H.dim)
    _, fil_flag = induced_flags(K, k)
    basis, levels = graded_basis(fil_flag)
    labels = np.asarray(K.fil_labels[k], dtype=np.int64)
    cols = []
    for coords, l in zip(basis, levels):
        v = lift_into(H, K.fil_step(k, l), coords)
        if v is None:
            raise AxiomViolation("class has no lift into Fil^l", axiom="fil_lift", degree=k, level=l)
        part = np.where(labels == l, v, 0) % field.p
        try:
            cols.append(H.coordinates(field.matmul(M.psi_at(k), part))[0])
        except NotCompatible as exc:
            raise AxiomViolation("ψ of a Higgs cycle is not a cycle", axiom="chain_map", degree=k) from exc
    psi = np.array(cols, dtype=np.int64).reshape(len(cols), H.dim).T
    return FLModule(field, fil_flag, psi, name=f"H^{k}")


def weight_submodules(M: MFLComplex, k: int, module: FLModule) -> List[dict]:
    """The W-induced steps of H^k as FL submodules, each validated."""
    w_flag, _ = induced_flags(M.dR, k)
    out = []
    for l in range(w_flag.start, w_flag.stop):
        sub = module.submodule(w_flag.step(l), name=f"W_{l}H^{k}")
        out.append({"level": l, **sub.validate()})
    return out


# the mixed FL complex of a toric pair

def retained_weights(atlas, support) -> List[tuple]:
    """Higgs weights m′ whose Gr^W pieces carry cohomology."""
    out = []
    for m in sorted(tuple(x) for x in support):
        K = weight_complex(atlas, m, "higgs").complex
        wlo, whi = K.w_range()
        if any(any(K.gr_w(l).cohomology_dims().values()) for l in range(wlo, whi + 1)):
            out.append(m)
    return out


def geometric_mflc(lift, support) -> MFLComplex:
    """⊕_{m′} C_dR(p·m′) with ψ the cochain-level Ψ projected onto the retained weights.

    The Higgs summand of weight m′ and the dR summand of weight p·m′ have
    the same blocks and adapted bases, so a Higgs basis vector is read as a
    cochain of weight m′ and its Ψ-image is read back weight by weight.
    """
    atlas = lift.atlas
    p = atlas.p
    weights = retained_weights(atlas, support)
    dr_parts = [weight_complex(atlas, tuple(p * x for x in m), "dR") for m in weights]
    higgs_parts = [weight_complex(atlas, m, "higgs") for m in weights]
    for m, dr, hg in zip(weights, dr_parts, higgs_parts):
        if any(dr.dim(k) != hg.dim(k) for k in hg.complex.degrees):
            raise AxiomViolation("dR and Higgs summands differ in size", axiom="graded", weight=list(m))
    if not weights:
        empty = FilteredComplexFp(atlas.field, {0: 0}, name="mflc")
        return MFLComplex.of(empty, {}, name="mflc")
    dR = direct_sum([part.complex for part in dr_parts], name="mflc")
    psi: Dict[int, np.ndarray] = {}
    for k in dR.degrees:
        offsets, total = [], 0
        for part in dr_parts:
            offsets.append(total)
            total += part.dim(k)
        mat = np.zeros((total, total), dtype=np.int64)
        by_weight = {part.weight: (offset, part) for offset, part in zip(offsets, dr_parts)}
        for col_offset, hg in zip(offsets, higgs_parts):
            for idx in range(hg.dim(k)):
                image = psi_cochain(lift, hg.basis_cochain(k, idx))
                for m in image.weights():
                    if m in by_weight:
                        row_offset, part = by_weight[m]
                        mat[row_offset : row_offset + part.dim(k), col_offset + idx] = part.vector(image, k)
        psi[k] = mat % p
    return MFLComplex.of(dR, psi, name="mflc")
