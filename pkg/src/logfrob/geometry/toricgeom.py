"""
Toric front-end: smooth complete fans, boundary divisors, twists, morphisms.

A max cone σ is the affine chart U_σ = Spec k[σ^∨ ∩ M]. Characters m ∈ M
are integer tuples, rays u_ρ ∈ N are integer tuples, and ⟨m, u⟩ is the
dot product. A form x^m ⊗ w with w ∈ Λ^i(M ⊗ F_p) stands for
x^m · dlog x^w; its weight is m.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..algebra.exactlin import PrimeField, Subspace, kernel
from ..algebra.exterior import basis_subsets, exterior_power, rank_of, wedge_subspace, wedge_vectors
from ..errors import IncompatibleDivisors, NoChartAssignment, NotComplete, NotSmooth, RadiusTooSmall

Weight = Tuple[int, ...]


def _int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    A = [[int(x) for x in r] for r in rows]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _unimodular_inverse(rows: Sequence[Sequence[int]]) -> np.ndarray:
    n = len(rows)
    A = [[Fraction(int(x)) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        scale = A[col][col]
        A[col] = [x / scale for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [x - factor * y for x, y in zip(A[r], A[col])]
    inv = np.array([[int(x) for x in r[n:]] for r in A], dtype=np.int64)
    return inv


@dataclass(frozen=True)
class Fan:
    """Rays in N = Z^n and max cones as sorted tuples of ray indices."""

    rays: Tuple[Tuple[int, ...], ...]
    max_cones: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_lists(cls, rays, max_cones) -> "Fan":
        return cls(
            tuple(tuple(int(x) for x in r) for r in rays),
            tuple(tuple(sorted(int(i) for i in c)) for c in max_cones),
        )

    @property
    def n(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @property
    def num_charts(self) -> int:
        return len(self.max_cones)

    def ray(self, index: int) -> Tuple[int, ...]:
        return self.rays[index]

    def ray_matrix(self, indices: Iterable[int]) -> np.ndarray:
        idx = list(indices)
        if not idx:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.array([self.rays[i] for i in idx], dtype=np.int64)

    def overlap(self, charts: Sequence[int]) -> Tuple[int, ...]:
        """Rays of the cone σ_{α₀} ∩ … ∩ σ_{α_r}."""
        common = set(self.max_cones[charts[0]])
        for a in charts[1:]:
            common &= set(self.max_cones[a])
        return tuple(sorted(common))

    def chart_characters(self, chart: int) -> np.ndarray:
        """Rows m_ρ (ρ in the cone, sorted) dual to the cone's rays: t_ρ = x^{m_ρ}."""
        U = self.ray_matrix(self.max_cones[chart])
        return _unimodular_inverse(U).T.copy()

    def is_face(self, rays: Iterable[int]) -> bool:
        s = set(rays)
        return any(s <= set(c) for c in self.max_cones)

    def pairing(self, m: Sequence[int], ray: int) -> int:
        return int(sum(int(a) * int(b) for a, b in zip(m, self.rays[ray])))


@dataclass(frozen=True)
class DivisorSet:
    rays_in_d: FrozenSet[int] = frozenset()

    @classmethod
    def of(cls, rays: Iterable[int]) -> "DivisorSet":
        return cls(frozenset(int(r) for r in rays))

    def __contains__(self, ray: int) -> bool:
        return ray in self.rays_in_d

    def sorted(self) -> Tuple[int, ...]:
        return tuple(sorted(self.rays_in_d))


@dataclass(frozen=True)
class Twist:
    """L = O(Σ a_ρ D_ρ)."""

    coeffs: Tuple[int, ...]

    @classmethod
    def zero(cls, num_rays: int) -> "Twist":
        return cls(tuple([0] * num_rays))

    def coeff(self, ray: int) -> int:
        return self.coeffs[ray]

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class ToricMorphism:
    """f: X_source → X_target given by a lattice map N_source → N_target (n_target × n_source)."""

    lattice_map: Tuple[Tuple[int, ...], ...]
    source: Fan
    target: Fan

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.lattice_map, dtype=np.int64).reshape(self.target.n, self.source.n)

    def pull_character(self, m: Sequence[int]) -> Weight:
        """f*(x^m) = x^{F^T m}."""
        return tuple(int(x) for x in self.matrix.T @ np.asarray(m, dtype=np.int64))


@dataclass
class ValidityReport:
    n: int
    p: int
    num_rays: int
    num_charts: int
    smooth: bool = True
    complete: bool = True
    dim_below_p: bool = True
    cone_determinants: List[int] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "num_rays": self.num_rays,
            "num_charts": self.num_charts,
            "smooth": self.smooth,
            "complete": self.complete,
            "dim_below_p": self.dim_below_p,
            "cone_determinants": list(self.cone_determinants),
        }


def validate(fan: Fan, p: int) -> ValidityReport:
    """Check smoothness and completeness of a fan.

    Raises:
        NotSmooth: a max cone whose rays are not a Z-basis of N.
        NotComplete: a facet not shared by exactly two max cones, or a
            disconnected dual graph.
    """
    n = fan.n
    dets = []
    for idx, cone in enumerate(fan.max_cones):
        if len(cone) != n:
            raise NotSmooth("max cone does not have n rays", cone=idx, rays=cone, n=n)
        det = _int_det(fan.ray_matrix(cone).tolist())
        if abs(det) != 1:
            raise NotSmooth("max cone is not unimodular", cone=idx, rays=cone, det=det)
        dets.append(det)

    facets: Dict[Tuple[int, ...], List[int]] = {}
    for idx, cone in enumerate(fan.max_cones):
        for drop in range(len(cone)):
            facet = cone[:drop] + cone[drop + 1:]
            facets.setdefault(facet, []).append(idx)
    for facet, owners in sorted(facets.items()):
        if len(owners) != 2:
            raise NotComplete("facet is not shared by exactly two max cones", facet=facet, owners=owners)

    seen = {0} if fan.max_cones else set()
    frontier = list(seen)
    while frontier:
        cur = frontier.pop()
        for owners in facets.values():
            if cur in owners:
                for other in owners:
                    if other not in seen:
                        seen.add(other)
                        frontier.append(other)
    if len(seen) != len(fan.max_cones):
        raise NotComplete("dual graph of the fan is disconnected", reached=len(seen), charts=len(fan.max_cones))

    return ValidityReport(
        n=n,
        p=p,
        num_rays=len(fan.rays),
        num_charts=fan.num_charts,
        dim_below_p=n < p,
        cone_determinants=dets,
    )


# twists and weight boxes

def cone_vertex(fan: Fan, chart: int, twist: Optional[Twist]) -> Weight:
    """m_σ with ⟨m_σ, u_ρ⟩ = −a_ρ for every ray ρ of σ."""
    cone = fan.max_cones[chart]
    a = np.array([twist.coeff(r) if twist else 0 for r in cone], dtype=np.int64)
    chars = fan.chart_characters(chart)
    return tuple(int(x) for x in -(a @ chars))


def is_ample(fan: Fan, twist: Optional[Twist]) -> bool:
    """Strict convexity of the support function of Σ a_ρ D_ρ."""
    if twist is None:
        return False
    for chart, cone in enumerate(fan.max_cones):
        vertex = cone_vertex(fan, chart, twist)
        for ray in range(len(fan.rays)):
            if ray in cone:
                continue
            if fan.pairing(vertex, ray) <= -twist.coeff(ray):
                return False
    return True


def default_radius(fan: Fan, twist: Optional[Twist]) -> int:
    biggest = max((abs(a) for a in twist.coeffs), default=0) if twist else 0
    return 2 * (biggest + fan.n + 1)


def weight_box(fan: Fan, twist: Optional[Twist], radius: int) -> Tuple[Weight, Weight]:
    vertices = [cone_vertex(fan, c, twist) for c in range(fan.num_charts)]
    lo = tuple(min(v[k] for v in vertices) - radius for k in range(fan.n))
    hi = tuple(max(v[k] for v in vertices) + radius for k in range(fan.n))
    return lo, hi


def in_shell(m: Weight, lo: Weight, hi: Weight, layers: int = 2) -> bool:
    return any(x < a + layers or x > b - layers for x, a, b in zip(m, lo, hi))


def weight_support(
    fan: Fan,
    divisor: DivisorSet,
    twist: Optional[Twist] = None,
    radius: Optional[int] = None,
    audit: Optional[Callable[[Weight], bool]] = None,
) -> List[Weight]:
    """Characters of the search box around the twist polytope, lex ordered.

    The box is the bounding box of the cone vertices m_σ widened by
    ``radius`` on every side. ``audit(m)`` must report exactness of the
    weight-m complex for every m in the two outermost layers.

    Raises:
        RadiusTooSmall: the audit failed on a shell weight.
    """
    if radius is None:
        radius = default_radius(fan, twist)
    lo, hi = weight_box(fan, twist, radius)
    weights = [tuple(w) for w in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])]
    if audit is not None:
        for m in weights:
            if in_shell(m, lo, hi) and not audit(m):
                raise RadiusTooSmall(
                    "weight complex on the shell is not exact",
                    radius=radius,
                    weight=m,
                    divisor=divisor.sorted(),
                )
    return weights


# forms in a fixed weight

class WeightSlice(NamedTuple):
    """Data of Ω^*(log D) ⊗ L on a cone in one weight.

    zero_rays are the rays ρ of the cone with a_ρ = ⟨m, u_ρ⟩ + twist_ρ = 0;
    log_space E and regular_space F are the annihilators of the u_ρ for
    ρ ∈ zero_rays ∖ D and ρ ∈ zero_rays respectively.
    """

    vanishes: bool
    zero_rays: Tuple[int, ...]
    log_space: Subspace
    regular_space: Subspace


def weight_slice(
    fan: Fan,
    cone_rays: Sequence[int],
    m: Sequence[int],
    divisor: DivisorSet,
    twist: Optional[Twist],
    field: PrimeField,
) -> WeightSlice:
    n = fan.n
    zero_rays = []
    for r in cone_rays:
        a = fan.pairing(m, r) + (twist.coeff(r) if twist else 0)
        if a < 0:
            empty = Subspace.zero(field, n)
            return WeightSlice(True, (), empty, empty)
        if a == 0:
            zero_rays.append(r)
    no_log = [r for r in zero_rays if r not in divisor]
    E = kernel(field, fan.ray_matrix(no_log), ncols=n) if no_log else Subspace.full(field, n)
    F = kernel(field, fan.ray_matrix(zero_rays), ncols=n) if zero_rays else Subspace.full(field, n)
    return WeightSlice(False, tuple(zero_rays), E, F)


def form_space(
    fan: Fan,
    cone_rays: Sequence[int],
    m: Sequence[int],
    i: int,
    divisor: DivisorSet,
    twist: Optional[Twist],
    field: PrimeField,
) -> Subspace:
    """Weight-m part of Γ(U_σ, Ω^i(log D) ⊗ L) as a subspace of Λ^i(M ⊗ F_p)."""
    ws = weight_slice(fan, cone_rays, m, divisor, twist, field)
    if ws.vanishes:
        return Subspace.zero(field, rank_of(fan.n, i))
    return exterior_power(field, fan.n, ws.log_space, i)


def weight_level_space(
    fan: Fan,
    cone_rays: Sequence[int],
    m: Sequence[int],
    i: int,
    l: int,
    divisor: DivisorSet,
    twist: Optional[Twist],
    field: PrimeField,
) -> Subspace:
    """W_l = Λ^l E ∧ Λ^{i−l} F in weight m."""
    ws = weight_slice(fan, cone_rays, m, divisor, twist, field)
    if ws.vanishes or l < 0:
        return Subspace.zero(field, rank_of(fan.n, i))
    l = min(l, i)
    return wedge_subspace(field, fan.n, ws.log_space, l, ws.regular_space, i - l)


def coordinate_form_space(
    fan: Fan,
    chart: int,
    m: Sequence[int],
    i: int,
    divisor: DivisorSet,
    field: PrimeField,
    twist: Optional[Twist] = None,
) -> Subspace:
    """Brute-force chart computation of the same space as form_space.

    On U_σ with coordinates t_ρ = x^{m_ρ} a weight-m form is spanned by the
    monomial forms t^b dt_J ∧ dlog t_S with S ⊆ D, J ∩ S = ∅ and b ≥ 0 of
    total weight m. Since dt_j = t_j dlog t_j such a form is t^a dlog t_{J∪S}
    with a = b + e_J, so it exists iff a ≥ 0 and a_j ≥ 1 on J.
    """
    cone = fan.max_cones[chart]
    chars = fan.chart_characters(chart)
    a = [fan.pairing(m, r) + (twist.coeff(r) if twist else 0) for r in cone]
    dim = rank_of(fan.n, i)
    if any(x < 0 for x in a):
        return Subspace.zero(field, dim)

    def admissible(T):
        for k in range(len(T) + 1):
            for S in itertools.combinations(T, k):
                if all(cone[s] in divisor for s in S) and all(a[j] >= 1 for j in T if j not in S):
                    return True
        return False

    vectors = [
        wedge_vectors(field, fan.n, [chars[t] for t in T])
        for T in itertools.combinations(range(len(cone)), i)
        if admissible(T)
    ]
    return Subspace.span(field, dim, vectors)


def chart_assignment(morphism: ToricMorphism, source_divisor: DivisorSet, target_divisor: DivisorSet) -> Tuple[int, ...]:
    """χ(α): the first target max cone containing f(σ_α), for every source chart.

    Raises:
        NoChartAssignment: some f(σ_α) lies in no target max cone.
        IncompatibleDivisors: f⁻¹E ⊄ D.
    """
    F = morphism.matrix
    src, dst = morphism.source, morphism.target
    chi = []
    for alpha, cone in enumerate(src.max_cones):
        images = [F @ np.array(src.rays[r], dtype=np.int64) for r in cone]
        found = None
        for beta in range(dst.num_charts):
            chars = dst.chart_characters(beta)
            if all((chars @ v >= 0).all() for v in images):
                found = beta
                break
        if found is None:
            raise NoChartAssignment("image of a source cone lies in no target cone", chart=alpha, rays=cone)
        chars = dst.chart_characters(found)
        target_cone = dst.max_cones[found]
        for r, v in zip(cone, images):
            if r in source_divisor:
                continue
            coeffs = chars @ v
            for pos, c in enumerate(coeffs.tolist()):
                if c > 0 and target_cone[pos] in target_divisor:
                    raise IncompatibleDivisors(
                        "pullback of the target divisor meets a source ray outside D",
                        source_ray=r,
                        target_ray=target_cone[pos],
                    )
        chi.append(found)
    return tuple(chi)


def wedge_basis_labels(n: int, i: int) -> List[str]:
    """Readable names e1^e2 of the lex basis of Λ^i, used in reports."""
    if i == 0:
        return ["1"]
    return ["^".join(f"e{j + 1}" for j in s) for s in basis_subsets(n, i)]


def primitive(vector: Sequence[int]) -> bool:
    return functools.reduce(math.gcd, [abs(int(x)) for x in vector], 0) == 1
