"""Built-in specs, in catalogue order"""
from collections import OrderedDict

from ..errors import SpecParseError
from .spec_io import VarietySpec, parse_spec

P1 = {"rays": [[1], [-1]], "max_cones": [[0], [1]]}
P2 = {"rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]]}
P1XP1 = {"rays": [[1, 0], [0, 1], [-1, 0], [0, -1]], "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]]}
HIRZEBRUCH1 = {"rays": [[1, 0], [0, 1], [-1, 1], [0, -1]], "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]]}


def _entry(p, fan, divisor_rays, **extra):
    return {"p": p, "fan": fan, "divisor_rays": divisor_rays, "checks": ["all"], **extra}


GALLERY = OrderedDict(
    [
        ("gm_p5", _entry(5, P1, [0, 1])),
        ("p1_p5_noD", _entry(5, P1, [])),
        ("p2_p5_d0", _entry(5, P2, [])),
        ("p2_p5_d1", _entry(5, P2, [0])),
        ("p2_p5_d2", _entry(5, P2, [0, 1])),
        ("p2_p5_d3", _entry(5, P2, [0, 1, 2])),
        ("p1xp1_p5_noD", _entry(5, P1XP1, [])),
        ("p1xp1_p5_fiber", _entry(5, P1XP1, [0])),
        ("p1xp1_p5_full", _entry(5, P1XP1, [0, 1, 2, 3])),
        ("hirzebruch1_p5", _entry(5, HIRZEBRUCH1, [3])),
        ("p1_p2", _entry(2, P1, [0, 1], checks=["decomposition", "cartier", "truncation"])),
        ("p1xp1_p2", _entry(2, P1XP1, [0, 1, 2, 3], checks=["decomposition", "cartier", "truncation"])),
        (
            "p2_vanishing_p5",
            _entry(5, P2, [0, 1, 2], twist=[[0, 0, 1], [0, 0, 2]], checks=["vanishing"]),
        ),
        (
            "proj_functoriality_p5",
            _entry(
                5,
                P1XP1,
                [0, 2],
                morphism={"matrix": [[1, 0]], "target": {"fan": P1, "divisor_rays": [0, 1]}},
                checks=["homotopy", "functoriality"],
            ),
        ),
        ("p1_negative_twist_p5", _entry(5, P1, [], twist=[0, -3], checks=["vanishing"])),
    ]
)


def gallery_ids():
    return list(GALLERY)


def gallery_spec(name) -> VarietySpec:
    """
    Parse one gallery member.

    Raises:
        SpecParseError: unknown gallery id
    """
    if name not in GALLERY:
        raise SpecParseError("unknown gallery id", id=name, known=gallery_ids())
    data = dict(GALLERY[name])
    data["id"] = name
    return parse_spec(data)
