"""Parsing and validating spec files."""
import json

import pytest

from logfrob.cli.spec_io import load_spec, parse_spec
from logfrob.errors import SpecParseError

P2_FAN = {"rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]]}


def minimal(**extra):
    return {"p": 5, "fan": P2_FAN, **extra}


def test_defaults():
    spec = parse_spec(minimal(), spec_id="plane")
    assert spec.spec_id == "plane"
    assert spec.n == 2
    assert spec.divisor_rays == [] and spec.twists == [] and spec.lift == {}
    assert spec.checks == ["all"]
    assert spec.seed == 0 and spec.random_lifts == 3
    assert spec.weight_radius is None and spec.morphism is None


def test_full_spec():
    spec = parse_spec(
        minimal(
            id="named",
            divisor_rays=[1, 0, 1],
            twist=[0, 0, 1],
            lift=[{"chart": 0, "ray": 1, "terms": [[[1, 0], 2], [[1, 0], 1], [[0, 0], 4]]}],
            weight_radius=4,
            checks=["cartier"],
            seed=9,
            random_lifts=1,
        )
    )
    assert spec.spec_id == "named"
    assert spec.divisor_rays == [0, 1]
    assert spec.twists == [[0, 0, 1]]
    assert spec.lift == {0: {1: {(1, 0): 3, (0, 0): 4}}}
    assert (spec.weight_radius, spec.checks, spec.seed, spec.random_lifts) == (4, ["cartier"], 9, 1)


def test_input_echo_shape():
    data = minimal(id="echo", divisor_rays=[0], twist=[[0, 0, 1]], lift=[{"chart": 1, "ray": 2, "terms": [[[0, 1], 2]]}])
    echo = parse_spec(data).to_dict()
    assert echo["fan"] == P2_FAN
    assert echo["lift"] == [{"chart": 1, "ray": 2, "terms": [[[0, 1], 2]]}]
    assert parse_spec(echo).to_dict() == echo


@pytest.mark.parametrize(
    "data, fragment",
    [
        ([], "JSON object"),
        (minimal(colour="red"), "unknown top-level"),
        ({"fan": P2_FAN}, "missing required"),
        (minimal(p=6), "prime"),
        (minimal(p=True), "integer"),
        ({"p": 5, "fan": {"rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]}}, "not primitive"),
        ({"p": 5, "fan": {"rays": [[1, 0], [1]], "max_cones": [[0, 1]]}}, "different lengths"),
        ({"p": 5, "fan": {"rays": [[1, 0], [0, 1]], "max_cones": [[0, 3]]}}, "unknown rays"),
        (minimal(divisor_rays=[5]), "unknown rays"),
        (minimal(twist=[1, 2]), "one coefficient per ray"),
        (minimal(lift=[{"chart": 0, "ray": 2, "terms": []}]), "not a coordinate"),
        (minimal(lift=[{"chart": 7, "ray": 0, "terms": []}]), "unknown chart"),
        (minimal(lift=[{"chart": 0, "ray": 0, "terms": [[[1], 1]]}]), "wrong length"),
        (minimal(weight_radius=-1), "non-negative"),
        (minimal(checks="all"), "expected a list"),
        (minimal(morphism={"matrix": [[1, 0]]}), "matrix and target"),
        (minimal(morphism={"matrix": [[1, 0, 0]], "target": {"fan": {"rays": [[1], [-1]], "max_cones": [[0], [1]]}}}), "n_target"),
    ],
)
def test_rejections(data, fragment):
    with pytest.raises(SpecParseError) as info:
        parse_spec(data)
    assert fragment in info.value.message


def test_non_primitive_ray_is_named():
    with pytest.raises(SpecParseError) as info:
        parse_spec({"p": 5, "fan": {"rays": [[1, 0], [0, 2]], "max_cones": [[0, 1]]}})
    assert info.value.context["at"] == "fan.rays[1]"
    assert info.value.context["ray"] == [0, 2]


def test_morphism():
    spec = parse_spec(
        minimal(
            id="x",
            morphism={"matrix": [[1, 0]], "target": {"fan": {"rays": [[1], [-1]], "max_cones": [[0], [1]]}, "divisor_rays": [0]}},
        )
    )
    assert spec.morphism.matrix == [[1, 0]]
    assert spec.morphism.target.spec_id == "x:target"
    assert spec.morphism.target.divisor_rays == [0]
    assert spec.to_dict()["morphism"]["target"]["divisor_rays"] == [0]


def test_load_spec(tmp_path):
    path = tmp_path / "plane.json"
    path.write_text(json.dumps(minimal()), encoding="utf-8")
    assert load_spec(str(path)).spec_id == "plane"


def test_load_spec_errors(tmp_path):
    with pytest.raises(SpecParseError, match="cannot read"):
        load_spec(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text('{"p": 5,', encoding="utf-8")
    with pytest.raises(SpecParseError) as info:
        load_spec(str(broken))
    assert info.value.context["line"] == 1
