"""
Check suites.

Every suite takes a Workspace and returns a report section: a dict with
``status`` (PASS, FAIL or SKIPPED), an optional ``reason`` and the numeric
artifacts the verdict rests on. Suites never print; progress goes through
the workspace's log_func.
"""
import itertools
from typing import Dict, List, Optional

import numpy as np

from ..algebra.exactlin import Flag, Subspace
from ..algebra.complexes import FilteredComplexFp
from ..errors import DecompositionFailure, NotInvertible
from ..geometry.logdr import (
    FormSum,
    gr_weight_decompose,
    gr_weight_e1_degeneration,
    residue_faces,
    residue_matrix,
    truncation_mu_check,
    weight_subspace,
)
from ..geometry.toricgeom import DivisorSet, is_ample, weight_box
from ..algebra.exterior import basis_subsets
from .cech import Atlas, Selector, hypercohomology, mu_check_global, sheaf_cohomology, total_differential, weight_complex
from .flmod import strictness_check
from .frobsplit import (
    FrobLift,
    MorphismData,
    SplitData,
    functoriality_certificate,
    homotopy_eta,
    phi,
    psi_cochain,
    psi_on_cohomology,
    psi_weight_check,
    random_lift,
    reexpand_over_zp2,
)
from .specseq import (
    deligne_exact_sequence,
    fl_structure_on_H,
    geometric_mflc,
    mfl_pages,
    pages,
    three_filtrations,
    weight_submodules,
)
from .workspace import Workspace

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


def section(status, reason=None, **artifacts) -> dict:
    out = {"status": status}
    if reason:
        out["reason"] = reason
    out.update(artifacts)
    return out


def verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def combine(statuses) -> str:
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if statuses and all(s == SKIPPED for s in statuses):
        return SKIPPED
    return PASS


def hodge_numbers(ws: Workspace, atlas: Optional[Atlas] = None, level: Optional[int] = None, weights=None) -> Dict[tuple, int]:
    """h^{i,j} = dim H^j(W_level Ω^i(log D) ⊗ L), summed over the weights."""
    atlas = atlas or ws.atlas
    if weights is None:
        weights = ws.cohomology_weights(atlas)
    out: Dict[tuple, int] = {}
    for m in weights:
        for i in range(atlas.n + 1):
            for j, dim in sheaf_cohomology(atlas, m, i, level).items():
                if dim:
                    out[(i, j)] = out.get((i, j), 0) + dim
    return out


def diamond_rows(hodge: Dict[tuple, int]) -> List[dict]:
    return [{"i": i, "j": j, "dim": dim} for (i, j), dim in sorted(hodge.items())]


def dr_dims(ws: Workspace, selector: Optional[Selector] = None) -> Dict[int, int]:
    """dim H^k of the dR complex over the weights p·m′."""
    total: Dict[int, int] = {}
    for m in ws.dr_weights():
        for k, v in hypercohomology(ws.atlas, m, selector, "dR").dims.items():
            total[k] = total.get(k, 0) + v
    return {k: total.get(k, 0) for k in ws.degrees()}


# decomposition

def decomposition(ws: Workspace) -> dict:
    """dim H^k(dR) = Σ_{i+j=k} h^{i,j}, per W_l as well, and ψ invertible and W-compatible."""
    n, p = ws.n, ws.p
    hodge = hodge_numbers(ws)
    totals = dr_dims(ws)
    degrees = []
    for k in ws.degrees():
        expected = sum(v for (i, j), v in hodge.items() if i + j == k)
        degrees.append({"k": k, "dR": totals[k], "hodge_sum": expected, "status": verdict(totals[k] == expected)})

    filtered = []
    for l in range(n + 1):
        hodge_l = hodge_numbers(ws, level=l)
        dims_l = dr_dims(ws, Selector(w=l))
        for k in ws.degrees():
            expected = sum(v for (i, j), v in hodge_l.items() if i + j == k)
            filtered.append({"k": k, "l": l, "dR": dims_l[k], "hodge_sum": expected, "status": verdict(dims_l[k] == expected)})

    if n >= p:
        return section(
            SKIPPED,
            f"dimension {n} is not below p = {p}",
            hodge=diamond_rows(hodge),
            degrees=degrees,
            filtered=filtered,
        )

    psi_rows = []
    weights = ws.cohomology_weights()
    for k in ws.degrees():
        if not totals[k]:
            continue
        try:
            result = psi_on_cohomology(ws.lift, k, weights)
            levels = psi_weight_check(result)
            ok = all(v["status"] == PASS for v in levels.values())
            psi_rows.append(
                {
                    "k": k,
                    "matrix": result.matrix.tolist(),
                    "w_levels": [{"l": l, **v} for l, v in sorted(levels.items())],
                    "status": verdict(ok),
                }
            )
        except NotInvertible as exc:
            psi_rows.append({"k": k, "error": exc.to_dict(), "status": FAIL})

    e1 = []
    for m in ws.dr_weights():
        K = weight_complex(ws.atlas, m, "dR").complex
        hodge_ss = pages(K, "Fil")
        gr = gr_weight_e1_degeneration(K)
        e1.append(
            {
                "weight": list(m),
                "hodge_radius": hodge_ss["radius"],
                "gr_w": [{"l": l, **v} for l, v in sorted(gr.items())],
                "status": verdict(hodge_ss["radius"] == 1 and all(v["status"] == PASS for v in gr.values())),
            }
        )

    status = combine(row["status"] for row in degrees + filtered + psi_rows + e1)
    return section(status, hodge=diamond_rows(hodge), degrees=degrees, filtered=filtered, psi=psi_rows, e1=e1)


# lifts and splitting data

def _normalise(perturbations, p) -> Dict[int, Dict[int, Dict[tuple, int]]]:
    out = {}
    for chart, rays in perturbations.items():
        for ray, poly in rays.items():
            terms = {tuple(m): c % p for m, c in poly.items() if c % p}
            if terms:
                out.setdefault(chart, {})[ray] = terms
    return out


def sample_lifts(ws: Workspace, count: Optional[int] = None, max_degree: int = 2) -> List[FrobLift]:
    """The canonical lift, the spec's lift if it differs, and ``count`` seeded random lifts."""
    count = ws.random_lifts if count is None else count
    rng = np.random.default_rng(ws.seed)
    lifts = [FrobLift.canonical(ws.atlas)]
    if not ws.lift.is_canonical():
        lifts.append(ws.lift)
    for idx in range(count):
        lifts.append(random_lift(ws.atlas, rng, max_degree=max_degree, name=f"random-{idx}"))
    return lifts


def _psi_audit(ws: Workspace, lift: FrobLift) -> dict:
    """Ψ is a chain map Higgs → dR and respects W, on every Higgs basis cochain of the cohomology weights."""
    atlas, p = ws.atlas, ws.p
    checked = chain_failures = w_failures = 0
    for m in ws.cohomology_weights():
        hg = weight_complex(atlas, m, "higgs")
        K = hg.complex
        for k in K.degrees:
            for idx in range(K.dim(k)):
                if K.fil_labels[k][idx] >= p:
                    continue
                c = hg.basis_cochain(k, idx)
                image = psi_cochain(lift, c)
                checked += 1
                expected = psi_cochain(lift, total_differential(atlas, c, with_d=False))
                if total_differential(atlas, image) != expected:
                    chain_failures += 1
                label = K.w_labels[k][idx]
                for m2 in image.weights():
                    wc = weight_complex(atlas, m2, "dR")
                    vec = wc.vector(image, k)
                    labels = wc.complex.w_labels[k]
                    if any(labels[x] > label for x in np.nonzero(vec)[0].tolist()):
                        w_failures += 1
                        break
    return {"checked": checked, "chain_map_failures": chain_failures, "w_failures": w_failures}


def splitting_laws(ws: Workspace, count: Optional[int] = None) -> dict:
    """ζ_b − ζ_a = dh_ab, the cocycle law, dζ = 0, D∘φ = 0 and φ(W_l) ⊆ W_l over several lifts."""
    atlas, n, p = ws.atlas, ws.n, ws.p
    rows = []
    for lift in sample_lifts(ws, count):
        ws.log_func(f"🔧 Splitting laws for lift {lift.name}")
        laws = SplitData.of(lift).check()
        roundtrip = _normalise(reexpand_over_zp2(lift), p) == _normalise(lift.perturbations, p)
        phi_checked = phi_failures = 0
        for i in range(min(n, p - 1) + 1):
            for J in basis_subsets(n, i):
                omega = FormSum.monomial(atlas.field, n, [0] * n, J)
                phi_checked += 1
                if not total_differential(atlas, phi(lift, omega)).is_zero():
                    phi_failures += 1
        if n < p:
            audit = _psi_audit(ws, lift)
        else:
            audit = {"checked": 0, "chain_map_failures": 0, "w_failures": 0}
        ok = (
            laws["status"] == PASS
            and roundtrip
            and not phi_failures
            and not audit["chain_map_failures"]
            and not audit["w_failures"]
        )
        rows.append(
            {
                "lift": lift.name,
                "closed": laws["closed"],
                "difference": laws["difference"],
                "cocycle": laws["cocycle"],
                "zp2_roundtrip": roundtrip,
                "phi_checked": phi_checked,
                "phi_failures": phi_failures,
                **audit,
                "status": verdict(ok),
            }
        )
    return section(combine(r["status"] for r in rows), lifts=rows)


def lifting_independence(ws: Workspace, count: Optional[int] = None) -> dict:
    """ψ on cohomology is the same matrix for every lift, in the fixed bases."""
    if ws.n >= ws.p:
        return section(SKIPPED, f"dimension {ws.n} is not below p = {ws.p}")
    weights = ws.cohomology_weights()
    lifts = sample_lifts(ws, count, max_degree=3)
    degrees = []
    for k in ws.degrees():
        matrices = []
        for lift in lifts:
            try:
                matrices.append(psi_on_cohomology(lift, k, weights).matrix)
            except NotInvertible as exc:
                degrees.append({"k": k, "lift": lift.name, "error": exc.to_dict(), "status": FAIL})
                break
        else:
            if not matrices[0].size:
                continue
            same = all(np.array_equal(matrices[0], mat) for mat in matrices[1:])
            degrees.append({"k": k, "matrix": matrices[0].tolist(), "lifts": len(matrices), "status": verdict(same)})
    return section(combine(r["status"] for r in degrees) if degrees else PASS, lifts=[l.name for l in lifts], degrees=degrees)


def homotopy(ws: Workspace, count: Optional[int] = None) -> dict:
    """Dη_i = f*φ^i − φ^i f′* for f = id between lifts, and for the spec's morphism if any."""
    cases = []
    lifts = sample_lifts(ws, count)
    top = min(ws.n, ws.p - 1)
    pairs = [(lifts[-1], lifts[0])] + [(a, b) for a, b in zip(lifts[1:], lifts[:-1])]
    for source, target in pairs:
        data = MorphismData.identity(source, target)
        results = [homotopy_eta(data, i) for i in range(top + 1)]
        cases.append(_homotopy_case("identity", source.name, target.name, results))
    data = ws.morphism_data()
    if data is not None:
        top_y = min(ws.target.n, ws.p - 1)
        for source in (ws.lift, lifts[-1]):
            data = ws.morphism_data(source)
            results = [homotopy_eta(data, i) for i in range(top_y + 1)]
            cases.append(_homotopy_case("morphism", source.name, ws.target.lift.name, results))
    return section(combine(c["status"] for c in cases), cases=cases)


def _homotopy_case(kind, source, target, results) -> dict:
    return {
        "morphism": kind,
        "source_lift": source,
        "target_lift": target,
        "degrees": [
            {
                "i": r["degree"],
                "generators": len(r["generators"]),
                "eta_zero": all(g["eta_zero"] for g in r["generators"]),
                "status": r["status"],
            }
            for r in results
        ],
        "status": combine(r["status"] for r in results),
    }


# Cartier and truncation

def cartier(ws: Workspace) -> dict:
    """dR weights not divisible by p are acyclic; τ_{<p} dR(p·m′) has the τ_{<p} Higgs(m′) cohomology."""
    p = ws.p
    off = [m for m in ws.support() if any(x % p for x in m)]
    dims = ws.warm(ws.atlas, off, "dR")
    failures = [list(m) for m in off if any(dims[m].values())]
    matched = []
    for m in ws.cohomology_weights():
        pm = tuple(p * x for x in m)
        dr = hypercohomology(ws.atlas, pm).dims
        higgs = hypercohomology(ws.atlas, m, Selector(below=p), "higgs").dims
        ok = all(dr.get(k, 0) == higgs.get(k, 0) for k in set(dr) | set(higgs))
        matched.append(
            {
                "weight": list(m),
                "dR": [dr.get(k, 0) for k in ws.degrees()],
                "higgs": [higgs.get(k, 0) for k in ws.degrees()],
                "status": verdict(ok),
            }
        )
    status = combine([verdict(not failures)] + [row["status"] for row in matched])
    return section(status, acyclic_checked=len(off), acyclic_failures=failures, frobenius_weights=matched)


def truncation(ws: Workspace) -> dict:
    """Gr^W_l τ_{<p} and τ_{<p} Gr^W_l have the same cohomology, globally and chart by chart."""
    atlas, n, p = ws.atlas, ws.n, ws.p
    weights = sorted(set(ws.cohomology_weights()) | set(ws.dr_weights()))
    rows = []
    for m in weights:
        for l in range(n + 1):
            result = mu_check_global(atlas, m, l)
            charts_ok = all(
                truncation_mu_check(atlas.context((chart,)), m, l, p)["status"] == PASS
                for chart in range(atlas.num_charts)
            )
            result["charts"] = verdict(charts_ok)
            result["status"] = combine([result["status"], result["charts"]])
            rows.append(result)
    reason = None if n >= p - 1 else f"τ_<{p} is the identity in dimension {n}"
    return section(combine(r["status"] for r in rows) if rows else PASS, reason, weights=rows)


# vanishing

def vanishing(ws: Workspace) -> dict:
    """H^j(W_lΩ^i(log D′) ⊗ L) = 0 for i + j > n, every l and every D′ ⊆ D, L ample."""
    if not ws.twists:
        return section(SKIPPED, "no twist given")
    n = ws.n
    divisor = ws.atlas.divisor.sorted()
    cases = []
    for twist in ws.twists:
        ample = is_ample(ws.atlas.fan, twist)
        for size in range(len(divisor) + 1):
            for sub in itertools.combinations(divisor, size):
                atlas = Atlas(ws.atlas.fan, DivisorSet.of(sub), ws.field, twist)
                weights = ws.cohomology_weights(atlas)
                table, nonvanishing = [], []
                for l in range(n + 1):
                    hodge = hodge_numbers(ws, atlas, level=l, weights=weights)
                    for (i, j), dim in sorted(hodge.items()):
                        table.append({"l": l, "i": i, "j": j, "dim": dim})
                        if i + j > n:
                            nonvanishing.append({"l": l, "i": i, "j": j, "dim": dim})
                if ample:
                    status = verdict(not nonvanishing)
                else:
                    status = SKIPPED
                cases.append(
                    {
                        "twist": list(twist.coeffs),
                        "divisor": list(sub),
                        "ample": ample,
                        "table": table,
                        "nonvanishing": nonvanishing,
                        "status": status,
                    }
                )
    reason = None
    if all(c["status"] == SKIPPED for c in cases):
        reason = "no twist is ample"
    return section(combine(c["status"] for c in cases), reason, cases=cases)


# residues

def residues(ws: Workspace) -> dict:
    """⊕_{|I|=l} Res_{D_I} is bijective on Gr^W_l and kills W_{l−1}, on every chart overlap."""
    atlas, n = ws.atlas, ws.n
    lo, hi = weight_box(atlas.fan, None, 1)
    weights = list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]))

    def job(m):
        checked, failures = 0, []
        for charts in atlas.all_tuples():
            ctx = atlas.context(charts)
            for i in range(n + 1):
                for l in range(i + 1):
                    checked += 1
                    try:
                        gr_weight_decompose(ctx, m, i, l)
                    except DecompositionFailure as exc:
                        failures.append({"charts": list(charts), "weight": list(m), "i": i, "l": l, "error": exc.message})
                        continue
                    lower = weight_subspace(ctx, m, i, l - 1)
                    if not lower.dim:
                        continue
                    for face in residue_faces(ctx, l):
                        if atlas.field.matmul(residue_matrix(ctx, m, i, face), lower.basis.T).any():
                            failures.append({"charts": list(charts), "weight": list(m), "i": i, "l": l, "face": list(face)})
        return checked, failures

    results = ws.warm_jobs(job, weights)
    checked = sum(c for c, _ in results)
    failures = [f for _, fs in results for f in fs]
    return section(verdict(not failures), slices=checked, weights=len(weights), failures=failures)


# mixed Fontaine–Laffaille structure

def strictness_control(field) -> dict:
    """A filtered map that is not strict: F_p² → F_p, Fil¹ the diagonal, projection to the first coordinate."""
    src = Flag(
        [Subspace.full(field, 2), Subspace.span(field, 2, [[1, 1]])],
        start=0,
        decreasing=True,
    )
    dst = Flag([Subspace.full(field, 1)] * 3, start=0, decreasing=True)
    result = strictness_check(field, [[1, 0]], src, dst)
    return {**result, "expected": FAIL, "status": verdict(result["status"] == FAIL)}


def filtration_control(field) -> dict:
    """x ↦ y + z with W(x, y, z) = (0, 0, −1) and Hodge labels (0, 1, 0): F_d ≠ F_{d*} on E₂."""
    K = FilteredComplexFp(
        field,
        {0: 1, 1: 2},
        {0: [[1], [1]]},
        {0: [0], 1: [0, -1]},
        {0: [0], 1: [1, 0]},
        name="non-strict",
    )
    spots = three_filtrations(K, 2)
    entry = spots[(1, 1)]
    level = 1
    dims = {which: entry["flags"][which].step(level).dim for which in ("f_d", "f_rec", "f_dstar")}
    ok = entry["dim"] == 1 and dims == {"f_d": 0, "f_rec": 0, "f_dstar": 1} and entry["contained"]
    return {"spot": [1, 0], "level": level, "dims": dims, "status": verdict(ok)}


def mflc(ws: Workspace) -> dict:
    """The MFLC axioms, the paired weight pages with F_d = F_rec = F_{d*}, μ, and FL structures on H."""
    if ws.n >= ws.p:
        return section(SKIPPED, f"dimension {ws.n} is not below p = {ws.p}")
    M = geometric_mflc(ws.lift, ws.cohomology_weights())
    axioms = M.validate()
    paged = mfl_pages(M)
    modules = []
    for k in M.dR.degrees:
        if not M.dR.cohomology(k).dim:
            continue
        module = fl_structure_on_H(M, k)
        check = module.validate()
        subs = weight_submodules(M, k, module)
        ok = check["status"] == PASS and all(s["status"] == PASS for s in subs)
        modules.append({"k": k, **check, "weight_submodules": subs, "status": verdict(ok)})
    sequences = []
    flo, fhi = M.dR.fil_range()
    for r in range(1, paged["radius"] + 1):
        for l in range(flo, fhi + 2):
            result = deligne_exact_sequence(M.dR, r, l)
            sequences.append({"r": r, "level": l, "strict_below": result["strict_below"], "status": result["status"]})
    weight_ss = pages(M.dR, "W")
    controls = {"strictness": strictness_control(ws.field), "filtrations": filtration_control(ws.field)}
    status = combine(
        [axioms["status"], paged["status"]]
        + [m["status"] for m in modules]
        + [s["status"] for s in sequences]
        + [verdict(weight_ss["converges"] and weight_ss["recursion"])]
        + [c["status"] for c in controls.values()]
    )
    return section(
        status,
        axioms=axioms["axioms"],
        pages=paged["pages"],
        radius=paged["radius"],
        modules=modules,
        exact_sequences=sequences,
        weight_ss_radius=weight_ss["radius"],
        controls=controls,
    )


# functoriality

def functoriality(ws: Workspace) -> dict:
    """f*∘Ψ_Y = Ψ_X∘f* on hypercohomology, with the η certificate, for the spec's morphism."""
    if ws.morphism is None or ws.target is None:
        return section(SKIPPED, "no morphism given")
    if max(ws.n, ws.target.n) >= ws.p:
        return section(SKIPPED, f"dimension is not below p = {ws.p}")
    support_x = ws.cohomology_weights()
    support_y = ws.target.cohomology_weights()
    lifts = [ws.lift] + sample_lifts(ws, 1)[-1:]
    cases = []
    for lift in lifts:
        data = ws.morphism_data(lift)
        certificates = []
        for k in ws.target.degrees():
            if not _has_degree(ws.target, k):
                continue
            certificates.append(functoriality_certificate(data, k, support_x, support_y))
        eta_zero = all(
            g["eta_zero"]
            for i in range(min(ws.target.n, ws.p - 1) + 1)
            for g in homotopy_eta(data, i)["generators"]
        )
        cases.append(
            {
                "source_lift": lift.name,
                "target_lift": ws.target.lift.name,
                "chart_assignment": list(data.chi),
                "eta_zero": eta_zero,
                "degrees": certificates,
                "status": combine(c["status"] for c in certificates) if certificates else PASS,
            }
        )
    return section(combine(c["status"] for c in cases), cases=cases)


def _has_degree(ws: Workspace, k: int) -> bool:
    return any(dims.get(k, 0) for dims in ws.higgs_dims().values())


SUITES = {
    "decomposition": decomposition,
    "splitting_laws": splitting_laws,
    "lifting_independence": lifting_independence,
    "homotopy": homotopy,
    "cartier": cartier,
    "truncation": truncation,
    "vanishing": vanishing,
    "residues": residues,
    "mflc": mflc,
    "functoriality": functoriality,
}
