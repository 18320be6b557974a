"""Exact linear algebra over F_p and Z/p^2"""

from .exactlin import (
    PrimeField,
    FpScalar,
    ZpSqScalar,
    Subspace,
    Subquotient,
    Flag,
    kernel,
    rank,
    rank_kernel_image,
    inverse,
    solve,
    complement_space,
    subquotient_map,
)
from .complexes import FilteredComplexFp, direct_sum, induced_flags, subquotient_cohomology_dims

__all__ = [
    "PrimeField",
    "FpScalar",
    "ZpSqScalar",
    "Subspace",
    "Subquotient",
    "Flag",
    "kernel",
    "rank",
    "rank_kernel_image",
    "inverse",
    "solve",
    "complement_space",
    "subquotient_map",
    "FilteredComplexFp",
    "direct_sum",
    "induced_flags",
    "subquotient_cohomology_dims",
]
