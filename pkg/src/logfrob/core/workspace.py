"""Per-run state: the atlas of a parsed spec, its lifts and its weight supports"""
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Tuple

from ..algebra.exactlin import PrimeField
from ..geometry.toricgeom import DivisorSet, Fan, ToricMorphism, Twist, Weight, weight_support
from ..utils.helpers import null_log
from ..workers.processor import run_weight_jobs
from .cech import Atlas, shell_audit, weight_complex
from .frobsplit import FrobLift, MorphismData, validate_lift


@dataclass
class Workspace:
    """
    Everything the checks of one run share.

    ``atlas`` is the untwisted pair (X, D); ``twists`` are the line bundles
    the vanishing check runs on. Weight supports are computed once and the
    per-weight complexes are built on the worker pool before any check asks
    for them.
    """

    spec_id: str
    atlas: Atlas
    lift: FrobLift
    twists: List[Twist] = dc_field(default_factory=list)
    radius: Optional[int] = None
    seed: int = 0
    random_lifts: int = 3
    target: Optional["Workspace"] = None
    morphism: Optional[ToricMorphism] = None
    max_workers: Optional[int] = None
    log_func: Callable[[str], None] = null_log
    _memo: Dict[tuple, object] = dc_field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, spec_id, p, rays, max_cones, divisor_rays, perturbations=None, **kwargs) -> "Workspace":
        field = PrimeField(p)
        fan = Fan.from_lists(rays, max_cones)
        atlas = Atlas(fan, DivisorSet.of(divisor_rays), field)
        lift = FrobLift(atlas, perturbations or {}, name="spec" if perturbations else "canonical")
        validate_lift(lift)
        return cls(spec_id, atlas, lift, **kwargs)

    @property
    def field(self) -> PrimeField:
        return self.atlas.field

    @property
    def p(self) -> int:
        return self.atlas.p

    @property
    def n(self) -> int:
        return self.atlas.n

    def twisted(self, twist: Optional[Twist]) -> Atlas:
        return Atlas(self.atlas.fan, self.atlas.divisor, self.field, twist)

    def warm(self, atlas: Atlas, weights, kind: str = "higgs") -> Dict[Weight, Dict[int, int]]:
        """Build the weight complexes on the pool and return their cohomology dims."""
        weights = [tuple(m) for m in weights]

        def job(m):
            return weight_complex(atlas, m, kind).complex.cohomology_dims()

        results = self.warm_jobs(job, weights)
        return dict(zip(weights, results))

    def warm_jobs(self, job, weights) -> list:
        """Run a per-weight job on the pool, results in the order of ``weights``."""
        return run_weight_jobs(job, list(weights), self.max_workers, self.log_func)

    def support(self, atlas: Optional[Atlas] = None) -> List[Weight]:
        """The audited weight box of ``atlas`` (default: the untwisted pair)."""
        atlas = atlas or self.atlas
        key = ("support", atlas)
        if key not in self._memo:
            box = weight_support(atlas.fan, atlas.divisor, atlas.twist, self.radius)
            self.log_func(f"🔍 Weight box for {self.spec_id}: {len(box)} weight(s)")
            self._memo[("dims", atlas)] = self.warm(atlas, box, "higgs")
            self._memo[key] = weight_support(atlas.fan, atlas.divisor, atlas.twist, self.radius, audit=shell_audit(atlas))
        return self._memo[key]

    def cohomology_weights(self, atlas: Optional[Atlas] = None) -> List[Weight]:
        """Weights of the box whose Higgs complex carries cohomology, lex ordered."""
        atlas = atlas or self.atlas
        self.support(atlas)
        dims = self._memo[("dims", atlas)]
        return [m for m in sorted(dims) if any(dims[m].values())]

    def higgs_dims(self, atlas: Optional[Atlas] = None) -> Dict[Weight, Dict[int, int]]:
        atlas = atlas or self.atlas
        self.support(atlas)
        return self._memo[("dims", atlas)]

    def dr_weights(self) -> List[Weight]:
        return [tuple(self.p * x for x in m) for m in self.cohomology_weights()]

    def morphism_data(self, source_lift: Optional[FrobLift] = None) -> Optional[MorphismData]:
        if self.morphism is None or self.target is None:
            return None
        return MorphismData(self.morphism, source_lift or self.lift, self.target.lift)

    def degrees(self) -> Tuple[int, ...]:
        """Total degrees 0..2n, where hypercohomology can live."""
        return tuple(range(2 * self.n + 1))
