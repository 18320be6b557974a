"""Command-line layer: spec parsing, reports, the gallery and subcommand handlers"""

from .spec_io import VarietySpec, MorphismSpec, parse_spec, load_spec
from .report import to_json, to_tsv, write_report
from .gallery import GALLERY, gallery_ids, gallery_spec
from .commands import HANDLERS, execute, EXIT_OK, EXIT_FAIL, EXIT_USAGE

__all__ = [
    "VarietySpec",
    "MorphismSpec",
    "parse_spec",
    "load_spec",
    "to_json",
    "to_tsv",
    "write_report",
    "GALLERY",
    "gallery_ids",
    "gallery_spec",
    "HANDLERS",
    "execute",
    "EXIT_OK",
    "EXIT_FAIL",
    "EXIT_USAGE",
]
