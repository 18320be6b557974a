"""VarietySpec: the JSON input of a run"""
import json
import os
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from ..algebra.exactlin import PrimeField
from ..errors import SpecParseError
from ..geometry.toricgeom import Fan, primitive
from ..utils.encoding import read_spec_text
from ..utils.helpers import null_log

TOP_LEVEL_KEYS = {
    "id",
    "p",
    "fan",
    "divisor_rays",
    "twist",
    "lift",
    "morphism",
    "weight_radius",
    "checks",
    "seed",
    "random_lifts",
}


@dataclass
class MorphismSpec:
    matrix: List[List[int]]
    target: "VarietySpec"


@dataclass
class VarietySpec:
    spec_id: str
    p: int
    rays: List[List[int]]
    max_cones: List[List[int]]
    divisor_rays: List[int] = dc_field(default_factory=list)
    twists: List[List[int]] = dc_field(default_factory=list)
    lift: Dict[int, Dict[int, Dict[tuple, int]]] = dc_field(default_factory=dict)
    morphism: Optional[MorphismSpec] = None
    weight_radius: Optional[int] = None
    checks: List[str] = dc_field(default_factory=lambda: ["all"])
    seed: int = 0
    random_lifts: int = 3

    @property
    def n(self) -> int:
        return len(self.rays[0])

    def fan_object(self) -> Fan:
        return Fan.from_lists(self.rays, self.max_cones)

    def to_dict(self) -> dict:
        """The spec in its input JSON shape, for the report's input echo."""
        out = {
            "id": self.spec_id,
            "p": self.p,
            "fan": {"rays": self.rays, "max_cones": self.max_cones},
            "divisor_rays": sorted(self.divisor_rays),
            "twist": self.twists,
            "lift": _lift_to_list(self.lift),
            "weight_radius": self.weight_radius,
            "checks": self.checks,
            "seed": self.seed,
            "random_lifts": self.random_lifts,
        }
        if self.morphism is not None:
            target = self.morphism.target
            out["morphism"] = {
                "matrix": self.morphism.matrix,
                "target": {
                    "fan": {"rays": target.rays, "max_cones": target.max_cones},
                    "divisor_rays": sorted(target.divisor_rays),
                    "lift": _lift_to_list(target.lift),
                },
            }
        return out


def _lift_to_list(lift) -> list:
    return [
        {"chart": chart, "ray": ray, "terms": [[list(m), c] for m, c in sorted(poly.items())]}
        for chart, rays in sorted(lift.items())
        for ray, poly in sorted(rays.items())
    ]


# parsing helpers

def _int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecParseError("expected an integer", at=where, got=value)
    return value


def _int_list(value, where) -> List[int]:
    if not isinstance(value, list):
        raise SpecParseError("expected a list of integers", at=where, got=value)
    return [_int(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _list(value, where) -> list:
    if not isinstance(value, list):
        raise SpecParseError("expected a list", at=where, got=value)
    return value


def _parse_fan(data, where):
    if not isinstance(data, dict) or "rays" not in data or "max_cones" not in data:
        raise SpecParseError("fan needs rays and max_cones", at=where)
    rays = [_int_list(r, f"{where}.rays[{i}]") for i, r in enumerate(_list(data["rays"], f"{where}.rays"))]
    if not rays or not rays[0]:
        raise SpecParseError("fan needs at least one ray of positive length", at=where)
    n = len(rays[0])
    for i, r in enumerate(rays):
        if len(r) != n:
            raise SpecParseError("rays of different lengths", at=f"{where}.rays[{i}]", ray=r, n=n)
        if not primitive(r):
            raise SpecParseError("ray is not primitive", at=f"{where}.rays[{i}]", ray=r)
    cones = [_int_list(c, f"{where}.max_cones[{i}]") for i, c in enumerate(_list(data["max_cones"], f"{where}.max_cones"))]
    if not cones:
        raise SpecParseError("fan needs at least one max cone", at=where)
    for i, c in enumerate(cones):
        bad = [r for r in c if not 0 <= r < len(rays)]
        if bad:
            raise SpecParseError("cone refers to unknown rays", at=f"{where}.max_cones[{i}]", rays=bad)
    return rays, cones


def _parse_divisor(value, num_rays, where) -> List[int]:
    rays = _int_list(value if value is not None else [], where)
    bad = [r for r in rays if not 0 <= r < num_rays]
    if bad:
        raise SpecParseError("divisor refers to unknown rays", at=where, rays=bad)
    return sorted(set(rays))


def _parse_twists(value, num_rays) -> List[List[int]]:
    if value is None:
        return []
    value = _list(value, "twist")
    if value and not isinstance(value[0], list):
        value = [value]
    twists = [_int_list(t, f"twist[{i}]") for i, t in enumerate(value)]
    for i, t in enumerate(twists):
        if len(t) != num_rays:
            raise SpecParseError("twist needs one coefficient per ray", at=f"twist[{i}]", got=len(t), rays=num_rays)
    return twists


def _parse_lift(value, rays, cones, where) -> Dict[int, Dict[int, Dict[tuple, int]]]:
    out: Dict[int, Dict[int, Dict[tuple, int]]] = {}
    n = len(rays[0])
    for idx, entry in enumerate(_list(value if value is not None else [], where)):
        at = f"{where}[{idx}]"
        if not isinstance(entry, dict) or not {"chart", "ray", "terms"} <= set(entry):
            raise SpecParseError("lift entry needs chart, ray and terms", at=at)
        chart = _int(entry["chart"], f"{at}.chart")
        ray = _int(entry["ray"], f"{at}.ray")
        if not 0 <= chart < len(cones):
            raise SpecParseError("lift refers to an unknown chart", at=at, chart=chart)
        if ray not in cones[chart]:
            raise SpecParseError("lift ray is not a coordinate of the chart", at=at, chart=chart, ray=ray)
        poly = out.setdefault(chart, {}).setdefault(ray, {})
        for t, term in enumerate(_list(entry["terms"], f"{at}.terms")):
            if not isinstance(term, list) or len(term) != 2:
                raise SpecParseError("term must be [weight, coefficient]", at=f"{at}.terms[{t}]")
            m = tuple(_int_list(term[0], f"{at}.terms[{t}][0]"))
            if len(m) != n:
                raise SpecParseError("term weight has the wrong length", at=f"{at}.terms[{t}]", n=n)
            poly[m] = poly.get(m, 0) + _int(term[1], f"{at}.terms[{t}][1]")
    return out


def parse_spec(data, spec_id: Optional[str] = None) -> VarietySpec:
    """
    Validate a decoded JSON object and build a VarietySpec.

    Raises:
        SpecParseError: naming the offending key, index or ray
    """
    if not isinstance(data, dict):
        raise SpecParseError("spec must be a JSON object")
    unknown = sorted(set(data) - TOP_LEVEL_KEYS)
    if unknown:
        raise SpecParseError("unknown top-level keys", keys=unknown)
    for key in ("p", "fan"):
        if key not in data:
            raise SpecParseError("missing required key", key=key)
    p = _int(data["p"], "p")
    try:
        PrimeField(p)
    except ValueError as exc:
        raise SpecParseError("p must be a prime", p=p) from exc
    rays, cones = _parse_fan(data["fan"], "fan")
    spec = VarietySpec(
        spec_id=str(data.get("id") or spec_id or "spec"),
        p=p,
        rays=rays,
        max_cones=cones,
        divisor_rays=_parse_divisor(data.get("divisor_rays"), len(rays), "divisor_rays"),
        twists=_parse_twists(data.get("twist"), len(rays)),
        lift=_parse_lift(data.get("lift"), rays, cones, "lift"),
    )
    if data.get("weight_radius") is not None:
        spec.weight_radius = _int(data["weight_radius"], "weight_radius")
        if spec.weight_radius < 0:
            raise SpecParseError("weight_radius must be non-negative", got=spec.weight_radius)
    if "seed" in data:
        spec.seed = _int(data["seed"], "seed")
    if "random_lifts" in data:
        spec.random_lifts = _int(data["random_lifts"], "random_lifts")
    if "checks" in data:
        checks = _list(data["checks"], "checks")
        if not all(isinstance(c, str) for c in checks):
            raise SpecParseError("checks must be strings", got=checks)
        spec.checks = list(checks)
    if data.get("morphism") is not None:
        spec.morphism = _parse_morphism(data["morphism"], spec)
    return spec


def _parse_morphism(data, source: VarietySpec) -> MorphismSpec:
    if not isinstance(data, dict) or "matrix" not in data or "target" not in data:
        raise SpecParseError("morphism needs matrix and target", at="morphism")
    tdata = data["target"]
    if not isinstance(tdata, dict) or "fan" not in tdata:
        raise SpecParseError("morphism target needs a fan", at="morphism.target")
    rays, cones = _parse_fan(tdata["fan"], "morphism.target.fan")
    target = VarietySpec(
        spec_id=f"{source.spec_id}:target",
        p=source.p,
        rays=rays,
        max_cones=cones,
        divisor_rays=_parse_divisor(tdata.get("divisor_rays"), len(rays), "morphism.target.divisor_rays"),
        lift=_parse_lift(tdata.get("lift"), rays, cones, "morphism.target.lift"),
    )
    matrix = [_int_list(row, f"morphism.matrix[{i}]") for i, row in enumerate(_list(data["matrix"], "morphism.matrix"))]
    if len(matrix) != target.n or any(len(row) != source.n for row in matrix):
        raise SpecParseError(
            "morphism matrix must be n_target × n_source",
            at="morphism.matrix",
            n_target=target.n,
            n_source=source.n,
        )
    return MorphismSpec(matrix, target)


def load_spec(path, log_func=null_log) -> VarietySpec:
    """
    Read and parse a spec file.

    Raises:
        SpecParseError: unreadable file, invalid JSON or invalid content
    """
    try:
        text = read_spec_text(path, log_func)
    except OSError as exc:
        raise SpecParseError("cannot read spec file", path=path, reason=str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError("spec is not valid JSON", path=path, line=exc.lineno, column=exc.colno) from exc
    return parse_spec(data, spec_id=os.path.splitext(os.path.basename(path))[0])
