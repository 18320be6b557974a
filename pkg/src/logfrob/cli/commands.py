"""Subcommand handlers; each returns the process exit code"""
import os
import sys
import time
import traceback

from .. import __version__
from ..core import pipeline
from ..core.verify import FAIL, PASS, SKIPPED, combine
from ..errors import LogFrobError, NoChartAssignment, NotComplete, NotSmooth, SpecParseError
from ..utils.database import get_database
from ..utils.helpers import make_logger, safe_print
from .gallery import gallery_ids, gallery_spec
from .report import write_report
from .spec_io import load_spec

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_LOG_DIR = "/tmp/logfrob_logs"

# Errors that mean the input is wrong rather than a theorem check failing
INPUT_ERRORS = (SpecParseError, NoChartAssignment, NotSmooth, NotComplete)


def _history():
    """The run-history database, or None when LOGFROB_DB is set to the empty string."""
    if os.environ.get("LOGFROB_DB") == "":
        return None
    return get_database()


def _parse_checks(value):
    if not value:
        return None
    return [name.strip() for name in value.split(",") if name.strip()]


def _load(args, log):
    if getattr(args, "input", None):
        return load_spec(args.input, log)
    if getattr(args, "id", None):
        return gallery_spec(args.id)
    raise SpecParseError("no input: pass --input <spec.json> or --id <gallery id>")


def _tables(args, log, *sections):
    spec = _load(args, log)
    ws = pipeline.build_workspace(spec, args.threads, log, args.weight_radius)
    report = pipeline.header(spec)
    for name in sections:
        log(f"🔍 Computing {name}")
        if name == "describe":
            report["describe"] = pipeline.describe(ws)
        elif name == "cohomology":
            report["cohomology"] = pipeline.cohomology(ws)
        elif name == "weight_ss":
            report["weight_ss"] = pipeline.weight_ss(ws)
    return spec.spec_id, report, EXIT_OK


def describe(args, log):
    return _tables(args, log, "describe")


def cohomology(args, log):
    return _tables(args, log, "describe", "cohomology")


def weight_ss(args, log):
    return _tables(args, log, "weight_ss")


def verify(args, log):
    spec = _load(args, log)
    report = pipeline.run(
        spec,
        checks=_parse_checks(args.checks),
        max_workers=args.threads,
        log_func=log,
        timing=args.timing,
        radius=args.weight_radius,
    )
    return spec.spec_id, report, pipeline.exit_code(report)


def gallery(args, log):
    """Run one gallery member (--id) or all of them, as one combined report."""
    names = [args.id] if args.id else gallery_ids()
    members = []
    for name in names:
        spec = gallery_spec(name)
        members.append(
            pipeline.run(
                spec,
                checks=_parse_checks(args.checks),
                max_workers=args.threads,
                log_func=log,
                timing=args.timing,
                radius=args.weight_radius,
            )
        )
    statuses = [m["status"] for m in members]
    report = {
        "schema": pipeline.SCHEMA,
        "tool": {"name": "logfrob", "version": __version__},
        "members": members,
        "status": combine(statuses),
        "summary": {status: statuses.count(status) for status in (PASS, FAIL, SKIPPED)},
    }
    return "gallery" if len(names) > 1 else names[0], report, pipeline.exit_code(report)


HANDLERS = {
    "describe": describe,
    "cohomology": cohomology,
    "weight-ss": weight_ss,
    "verify": verify,
    "gallery": gallery,
}


def execute(args, stream=None) -> int:
    """
    Run one subcommand: open the run record, log, write the report, close the record.

    Args:
        args: Parsed argparse namespace (command, input, id, out, format, ...)
        stream: Where the report goes without --out (default: stdout)

    Returns:
        Exit code: 0 no check failed, 1 a check failed, 2 bad input
    """
    stream = stream or sys.stdout
    db = _history()
    run_id = db.get_next_run_id() if db else f"run-{time.strftime('%Y%m%d-%H%M%S')}"
    log_dir = os.environ.get("LOGFROB_LOG_DIR", DEFAULT_LOG_DIR)
    log, logfile = make_logger(run_id, log_dir)
    if db:
        db.create_run(run_id, args.command, getattr(args, "input", None) or getattr(args, "id", None))

    log(f"🚀 logfrob {__version__}: {args.command}")
    started = time.time()
    spec_id = None
    report = None
    try:
        spec_id, report, code = HANDLERS[args.command](args, log)
    except INPUT_ERRORS as e:
        log(f"❌ Input error: {e}")
        safe_print(f"error: {e}", stream=sys.stderr)
        code = EXIT_USAGE
        report = {"schema": pipeline.SCHEMA, "status": FAIL, "error": e.to_dict()}
    except LogFrobError as e:
        log(f"❌ {type(e).__name__}: {e}")
        code = EXIT_FAIL
        report = {"schema": pipeline.SCHEMA, "status": FAIL, "error": e.to_dict()}
    except Exception as e:
        log(f"💥 Exception: {str(e)}")
        log(f"Stack trace:\n{traceback.format_exc()}")
        code = EXIT_FAIL
        report = {"schema": pipeline.SCHEMA, "status": FAIL, "error": {"error": type(e).__name__, "message": str(e)}}

    write_report(report, args.out, args.format, stream)
    elapsed = round(time.time() - started, 3)
    log(f"{'✅' if code == EXIT_OK else '❌'} Finished with exit code {code} in {elapsed:.2f}s")

    if db:
        db.finish_run(
            run_id,
            report.get("status", PASS),
            code,
            report=args.out,
            details={"spec_id": spec_id, "seconds": elapsed, "log": logfile, "summary": report.get("summary")},
        )
    return code
