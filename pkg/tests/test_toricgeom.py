"""Fans, twists, weight slices and chart assignments."""
import itertools

import pytest

from logfrob.geometry.toricgeom import (
    DivisorSet,
    Fan,
    ToricMorphism,
    Twist,
    chart_assignment,
    coordinate_form_space,
    default_radius,
    form_space,
    is_ample,
    primitive,
    validate,
    wedge_basis_labels,
    weight_box,
    weight_level_space,
    weight_slice,
    weight_support,
)
from logfrob.errors import IncompatibleDivisors, NoChartAssignment, NotComplete, NotSmooth, RadiusTooSmall


def test_validate_projective_line(p1):
    report = validate(p1, 5)
    assert report.smooth and report.complete and report.dim_below_p
    assert report.cone_determinants == [1, -1]
    assert report.to_dict()["num_charts"] == 2


def test_validate_flags_dimension_not_below_p(p1xp1):
    assert not validate(p1xp1, 2).dim_below_p


def test_validate_rejects_singular_cone():
    fan = Fan.from_lists([[1, 0], [1, 2]], [[0, 1]])
    with pytest.raises(NotSmooth):
        validate(fan, 5)


def test_validate_rejects_incomplete_fan():
    fan = Fan.from_lists([[1, 0], [0, 1]], [[0, 1]])
    with pytest.raises(NotComplete):
        validate(fan, 5)


@pytest.mark.parametrize(
    "coeffs, ample",
    [((0, 0, 1), True), ((0, 0, 2), True), ((1, 1, 1), True), ((0, 0, 0), False), ((0, 0, -1), False)],
)
def test_ampleness_on_projective_plane(p2, coeffs, ample):
    assert is_ample(p2, Twist(coeffs)) is ample


def test_negative_twist_is_not_ample(p1):
    assert not is_ample(p1, Twist((0, -3)))
    assert not is_ample(p1, None)


def test_weight_box_of_twisted_line(p1):
    twist = Twist((0, 2))
    assert default_radius(p1, twist) == 8
    assert weight_box(p1, twist, 3) == ((-3,), (5,))


def test_weight_support_is_lex_ordered(p1):
    assert weight_support(p1, DivisorSet.of([0, 1]), radius=1) == [(-1,), (0,), (1,)]


def test_weight_support_audit_failure(p1):
    with pytest.raises(RadiusTooSmall):
        weight_support(p1, DivisorSet(), radius=1, audit=lambda m: False)


def test_log_forms_on_the_torus_chart(p1, f5):
    """dlog x is a log form along D and not a regular one."""
    D = DivisorSet.of([0, 1])
    ws = weight_slice(p1, (0,), (0,), D, None, f5)
    assert ws.zero_rays == (0,)
    assert ws.log_space.is_full() and ws.regular_space.is_zero()
    assert form_space(p1, (0,), (0,), 1, D, None, f5).dim == 1
    assert form_space(p1, (0,), (0,), 1, DivisorSet(), None, f5).dim == 0
    assert form_space(p1, (0,), (0,), 0, DivisorSet(), None, f5).dim == 1
    assert form_space(p1, (0,), (-1,), 0, D, None, f5).is_zero()
    assert weight_level_space(p1, (0,), (0,), 1, 0, D, None, f5).dim == 0
    assert weight_level_space(p1, (0,), (0,), 1, 1, D, None, f5).dim == 1


@pytest.mark.parametrize("divisor", [[], [0], [0, 1], [0, 1, 2]])
def test_form_space_matches_chart_coordinates(p2, f5, divisor):
    """The annihilator description agrees with monomial forms on every chart."""
    D = DivisorSet.of(divisor)
    for chart, cone in enumerate(p2.max_cones):
        for m in itertools.product(range(-2, 3), repeat=2):
            for i in range(3):
                assert form_space(p2, cone, m, i, D, None, f5) == coordinate_form_space(p2, chart, m, i, D, f5)


def test_chart_assignment_of_projection(p1xp1, p1):
    f = ToricMorphism(((1, 0),), p1xp1, p1)
    assert f.pull_character((3,)) == (3, 0)
    assert chart_assignment(f, DivisorSet.of([0, 2]), DivisorSet.of([0, 1])) == (0, 1, 1, 0)
    with pytest.raises(IncompatibleDivisors):
        chart_assignment(f, DivisorSet.of([0]), DivisorSet.of([0, 1]))


def test_chart_assignment_needs_a_target_cone(p1):
    line = Fan.from_lists([[1]], [[0]])
    f = ToricMorphism(((1,),), p1, line)
    with pytest.raises(NoChartAssignment):
        chart_assignment(f, DivisorSet(), DivisorSet())


def test_incompatible_divisors_is_a_chart_assignment_error():
    assert issubclass(IncompatibleDivisors, NoChartAssignment)


def test_primitive_and_labels():
    assert primitive([1, -1])
    assert not primitive([2, 4])
    assert not primitive([0, 3])
    assert wedge_basis_labels(2, 1) == ["e1", "e2"]
    assert wedge_basis_labels(3, 0) == ["1"]
