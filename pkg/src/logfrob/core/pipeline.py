"""Run orchestration: spec → workspace → tables and check sections → report"""
import time
import traceback

from .. import __version__
from ..algebra.complexes import FilteredComplexFp, direct_sum
from ..errors import LogFrobError, SpecParseError
from ..geometry.toricgeom import Twist, ToricMorphism, chart_assignment, is_ample, validate
from ..utils.helpers import null_log
from .cech import euler_audit, filtered_dims, weight_complex
from .specseq import pages
from .verify import FAIL, PASS, SKIPPED, SUITES, combine, dr_dims, diamond_rows, hodge_numbers
from .workspace import Workspace

SCHEMA = "logfrob-report/1"
CHECK_ORDER = tuple(SUITES)


def resolve_checks(requested):
    """
    Expand a check list ("all" or names) into suite names in catalogue order.

    Raises:
        SpecParseError: an unknown check name
    """
    if not requested or requested == "all" or "all" in requested:
        return list(CHECK_ORDER)
    unknown = [name for name in requested if name not in SUITES]
    if unknown:
        raise SpecParseError("unknown check", checks=unknown, known=list(CHECK_ORDER))
    return [name for name in CHECK_ORDER if name in requested]


def build_workspace(spec, max_workers=None, log_func=null_log, radius=None):
    """
    Turn a parsed VarietySpec into a Workspace, target included.

    Raises:
        NotSmooth, NotComplete: the fan is not smooth and complete
        NoChartAssignment: the morphism does not map cones into cones or
            does not pull the target divisor back into D
    """
    validate(spec.fan_object(), spec.p)
    twists = [Twist(tuple(t)) for t in spec.twists]
    radius = spec.weight_radius if radius is None else radius
    target = None
    morphism = None
    if spec.morphism is not None:
        tspec = spec.morphism.target
        validate(tspec.fan_object(), spec.p)
        target = Workspace.build(
            f"{spec.spec_id}:target",
            spec.p,
            tspec.rays,
            tspec.max_cones,
            tspec.divisor_rays,
            tspec.lift,
            radius=radius,
            max_workers=max_workers,
            log_func=log_func,
        )
    ws = Workspace.build(
        spec.spec_id,
        spec.p,
        spec.rays,
        spec.max_cones,
        spec.divisor_rays,
        spec.lift,
        twists=twists,
        radius=radius,
        seed=spec.seed,
        random_lifts=spec.random_lifts,
        max_workers=max_workers,
        log_func=log_func,
    )
    if target is not None:
        morphism = ToricMorphism(
            tuple(tuple(int(x) for x in row) for row in spec.morphism.matrix),
            ws.atlas.fan,
            target.atlas.fan,
        )
        chart_assignment(morphism, ws.atlas.divisor, target.atlas.divisor)
        ws.target = target
        ws.morphism = morphism
    return ws


# tables

def header(spec) -> dict:
    return {
        "schema": SCHEMA,
        "tool": {"name": "logfrob", "version": __version__},
        "p": spec.p,
        "input": spec.to_dict(),
    }


def describe(ws):
    fan = ws.atlas.fan
    report = validate(fan, ws.p).to_dict()
    report.update(
        {
            "rays": [list(r) for r in fan.rays],
            "max_cones": [list(c) for c in fan.max_cones],
            "divisor_rays": list(ws.atlas.divisor.sorted()),
            "twists": [{"coeffs": list(t.coeffs), "ample": is_ample(fan, t)} for t in ws.twists],
            "lift": ws.lift.to_dict(),
            "weight_box": len(ws.support()),
            "cohomology_weights": [list(m) for m in ws.cohomology_weights()],
        }
    )
    if ws.morphism is not None:
        report["morphism"] = {
            "matrix": ws.morphism.matrix.tolist(),
            "target_rays": [list(r) for r in ws.target.atlas.fan.rays],
            "target_divisor_rays": list(ws.target.atlas.divisor.sorted()),
        }
    return report


def cohomology(ws):
    """Hodge diamond, dR and Higgs dimensions, and the W/Fil steps on H^k per weight."""
    higgs = {}
    for dims in ws.higgs_dims().values():
        for k, v in dims.items():
            higgs[k] = higgs.get(k, 0) + v
    per_weight = []
    for m, pm in zip(ws.cohomology_weights(), ws.dr_weights()):
        K = weight_complex(ws.atlas, pm, "dR").complex
        per_weight.append(
            {
                "weight": list(m),
                "dR_weight": list(pm),
                "dims": [K.cohomology_dims().get(k, 0) for k in ws.degrees()],
                "filtered": {str(k): filtered_dims(ws.atlas, pm, k) for k in ws.degrees() if K.cohomology(k).dim},
                "euler": euler_audit(ws.atlas, pm),
            }
        )
    return {
        "hodge": diamond_rows(hodge_numbers(ws)),
        "dR": [dims for _, dims in sorted(dr_dims(ws).items())],
        "higgs": [higgs.get(k, 0) for k in ws.degrees()],
        "weights": per_weight,
    }


def total_complex(ws) -> FilteredComplexFp:
    """The dR complex over the weights p·m′, as one filtered complex."""
    parts = [weight_complex(ws.atlas, pm, "dR").complex for pm in ws.dr_weights()]
    if not parts:
        return FilteredComplexFp(ws.field, {0: 0}, name="dR")
    return direct_sum(parts, name="dR")


def weight_ss(ws, r_max=None):
    """Weight and Hodge spectral sequences of the dR complex, page tables and radii."""
    K = total_complex(ws)
    out = {}
    for along in ("W", "Fil"):
        result = pages(K, along, r_max)
        out[along] = {
            "pages": [{"r": page.r, "spots": page.table()} for page in result["pages"]],
            "radius": result["radius"],
            "converges": result["converges"],
            "recursion": result["recursion"],
            "abutment": [result["convergence"][k]["H"] for k in K.degrees],
        }
    return out


# checks

def run_checks(ws, checks, log, timing=None):
    """Run every named suite; a suite that raises becomes a FAIL section carrying the error."""
    sections = {}
    for name in checks:
        log(f"🔍 Running check: {name}")
        started = time.time()
        try:
            result = SUITES[name](ws)
        except LogFrobError as e:
            log(f"❌ Check {name} raised {type(e).__name__}: {e}")
            result = {"status": FAIL, "error": e.to_dict()}
        except Exception as e:
            log(f"💥 Exception in check {name}: {str(e)}")
            log(f"Stack trace:\n{traceback.format_exc()}")
            result = {"status": FAIL, "error": {"error": type(e).__name__, "module": "logfrob", "message": str(e)}}
        elapsed = time.time() - started
        if timing is not None:
            timing[name] = round(elapsed, 3)
        icon = {PASS: "✅", FAIL: "❌", SKIPPED: "⏭️"}[result["status"]]
        log(f"{icon} {name}: {result['status']} ({elapsed:.2f}s)")
        sections[name] = result
    return sections


def run(spec, checks=None, max_workers=None, log_func=null_log, timing=False, radius=None):
    """
    Execute a spec end to end.

    Args:
        spec: Parsed VarietySpec
        checks: Check names or "all" (None = the spec's own list)
        max_workers: Per-weight pool size (None = LOGFROB_THREADS or cpu count)
        log_func: Function to call for logging messages
        timing: If True, wall-clock seconds per check go into the report
        radius: Weight radius override

    Returns:
        Report dictionary

    Raises:
        SpecParseError, NoChartAssignment, NotSmooth, NotComplete: input errors
    """
    log_func(f"🚀 Starting run for spec: {spec.spec_id} (p = {spec.p})")
    names = resolve_checks(checks if checks is not None else spec.checks)
    ws = build_workspace(spec, max_workers, log_func, radius)
    log_func(f"📋 Checks: {', '.join(names)}")

    clock = {} if timing else None
    started = time.time()
    report = header(spec)
    report.update({"describe": describe(ws), "cohomology": cohomology(ws), "weight_ss": weight_ss(ws)})
    report["checks"] = run_checks(ws, names, log_func, clock)
    statuses = [section["status"] for section in report["checks"].values()]
    report["status"] = combine(statuses) if statuses else PASS
    report["summary"] = {status: statuses.count(status) for status in (PASS, FAIL, SKIPPED)}
    if clock is not None:
        clock["total"] = round(time.time() - started, 3)
        report["timing"] = clock

    log_func(
        f"📊 Overall summary: {report['summary'][PASS]} passed, {report['summary'][FAIL]} failed, "
        f"{report['summary'][SKIPPED]} skipped"
    )
    return report


def exit_code(report) -> int:
    """0 when no check failed, 1 otherwise."""
    return 1 if report.get("status") == FAIL else 0
