"""Utility functions and helpers"""

from .helpers import safe_print, make_logger, null_log
from .encoding import read_spec_text, decode_spec_bytes
from .database import RunDatabase, get_database, reset_database

__all__ = [
    "safe_print",
    "make_logger",
    "null_log",
    "read_spec_text",
    "decode_spec_bytes",
    "RunDatabase",
    "get_database",
    "reset_database",
]
