"""Core functionality modules"""

from .cech import Atlas, CechCochain, CohomologyBasis, WeightComplex, hypercohomology, sheaf_cohomology, weight_complex
from .frobsplit import FrobLift, MorphismData, phi, psi_on_cohomology, functoriality_certificate
from .flmod import FLModule, FLMorphism, kernel_cokernel, strictness_check
from .specseq import MFLComplex, SpectralSequence, geometric_mflc, mfl_pages, pages
from .workspace import Workspace
from .verify import SUITES
from .pipeline import run, exit_code, resolve_checks, build_workspace

__all__ = [
    "Atlas",
    "CechCochain",
    "CohomologyBasis",
    "WeightComplex",
    "hypercohomology",
    "sheaf_cohomology",
    "weight_complex",
    "FrobLift",
    "MorphismData",
    "phi",
    "psi_on_cohomology",
    "functoriality_certificate",
    "FLModule",
    "FLMorphism",
    "kernel_cokernel",
    "strictness_check",
    "MFLComplex",
    "SpectralSequence",
    "geometric_mflc",
    "mfl_pages",
    "pages",
    "Workspace",
    "SUITES",
    "run",
    "exit_code",
    "resolve_checks",
    "build_workspace",
]
