"""Report serialisation: stable JSON and TSV dimension tables"""
import json

import numpy as np


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def to_json(report, indent=2) -> str:
    return json.dumps(report, sort_keys=True, indent=indent, default=_default, ensure_ascii=False) + "\n"


def _rows(report):
    """Yield (spec, table, key, degree, value) rows of every dimension table in one report."""
    spec_id = report.get("input", {}).get("id", "")
    cohom = report.get("cohomology")
    if cohom:
        for k, dim in enumerate(cohom.get("dR", [])):
            yield spec_id, "dR", "-", k, dim
        for k, dim in enumerate(cohom.get("higgs", [])):
            yield spec_id, "higgs", "-", k, dim
        for entry in cohom.get("hodge", []):
            yield spec_id, "hodge", f"i={entry['i']}", entry["j"], entry["dim"]
    for along, data in sorted((report.get("weight_ss") or {}).items()):
        for page in data.get("pages", []):
            for spot in page["spots"]:
                yield spec_id, f"{along}_E{page['r']}", f"i={spot['i']}", spot["j"], spot["dim"]
    for name, section in (report.get("checks") or {}).items():
        yield spec_id, "check", name, "-", section.get("status")


def to_tsv(report) -> str:
    """One row per table entry; a gallery report concatenates its members."""
    reports = report["members"] if "members" in report else [report]
    lines = ["spec\ttable\tkey\tdegree\tvalue"]
    for member in reports:
        for row in _rows(member):
            lines.append("\t".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def render(report, fmt="json") -> str:
    if fmt == "tsv":
        return to_tsv(report)
    return to_json(report)


def write_report(report, out=None, fmt="json", stream=None):
    """
    Write a report to ``out`` (a path) or to ``stream``.

    Returns:
        The rendered text
    """
    text = render(report, fmt)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    elif stream is not None:
        stream.write(text)
        stream.flush()
    return text
