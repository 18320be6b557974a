"""Toric fans, weight slices and the log de Rham complex"""

from .toricgeom import (
    Fan,
    DivisorSet,
    Twist,
    ToricMorphism,
    validate,
    is_ample,
    weight_support,
    weight_slice,
    form_space,
    coordinate_form_space,
    chart_assignment,
    primitive,
)
from .logdr import FormSum, LogContext, residue, gr_weight_decompose, truncate

__all__ = [
    "Fan",
    "DivisorSet",
    "Twist",
    "ToricMorphism",
    "validate",
    "is_ample",
    "weight_support",
    "weight_slice",
    "form_space",
    "coordinate_form_space",
    "chart_assignment",
    "primitive",
    "FormSum",
    "LogContext",
    "residue",
    "gr_weight_decompose",
    "truncate",
]
