#!/usr/bin/env python3
"""
logfrob - Main Entry Point

Exact F_p computations on smooth projective toric varieties with a
normal-crossing boundary and a Frobenius lift to Z/p²:
- Log de Rham hypercohomology with weight and Hodge filtrations
- The explicit Frobenius splitting of the de Rham complex
- Weight spectral sequences with their Fontaine-Laffaille structure
- Verification suites for decomposition, vanishing and functoriality
"""
import os
import sys
import argparse

# Add src directory to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from logfrob.cli.commands import HANDLERS, EXIT_USAGE, execute
from logfrob.cli.gallery import gallery_ids


def build_parser():
    """Build the argument parser; defaults come from environment variables"""
    env_threads = os.environ.get("LOGFROB_THREADS")
    env_threads = int(env_threads) if env_threads else None

    parser = argparse.ArgumentParser(
        prog="logfrob",
        description="Log de Rham cohomology, Frobenius splittings and weight spectral sequences over F_p",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  %(prog)s describe --input spec.json
  %(prog)s verify --input spec.json --checks decomposition,vanishing --out report.json
  %(prog)s gallery --id gm_p5 --format tsv

Gallery ids:
  {", ".join(gallery_ids())}

Environment Variables:
  LOGFROB_THREADS  - Worker threads for the per-weight pool (default: cpu count)
  LOGFROB_DB       - Run-history database (default: /tmp/logfrob_runs.db, empty disables)
  LOGFROB_LOG_DIR  - Per-run log directory (default: /tmp/logfrob_logs)

Exit codes: 0 no check failed, 1 a check failed, 2 bad input or usage
"""
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="Spec JSON file")
    common.add_argument("--id", help="Gallery id (instead of --input)")
    common.add_argument("--out", help="Report path (default: stdout)")
    common.add_argument("--format", choices=["json", "tsv"], default="json", help="Report format (default: json)")
    common.add_argument(
        "--checks",
        help="Comma-separated check names or 'all' (default: the spec's own list)",
    )
    common.add_argument("--weight-radius", type=int, default=None, help="Weight box radius override")
    common.add_argument(
        "--threads",
        type=int,
        default=env_threads,
        help=f"Per-weight worker threads (default: {env_threads or 'cpu count'}, env: LOGFROB_THREADS)",
    )
    common.add_argument("--timing", action="store_true", help="Add wall-clock seconds per check to the report")

    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(HANDLERS) + "}")
    helps = {
        "describe": "Fan, divisor, twists, lift and weight box of a spec",
        "cohomology": "Hodge numbers and filtered hypercohomology dimensions",
        "weight-ss": "Pages of the weight and Hodge spectral sequences",
        "verify": "Run verification checks and report PASS/FAIL/SKIPPED",
        "gallery": "Run the built-in specs (all, or one with --id)",
    }
    for name in HANDLERS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None):
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    if args.command != "gallery" and args.input and args.id:
        parser.error("--input and --id are mutually exclusive")
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
