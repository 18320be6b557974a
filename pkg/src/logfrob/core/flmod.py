"""
Fontaine–Laffaille modules over F_p.

An FLModule is (V, Fil, ψ) with V = F_p^dim, Fil a decreasing flag and ψ an
isomorphism ⊕_l Gr^l V → V. Gr V is represented by the adapted basis that
``graded_basis`` computes from the flag, so ψ is a dim × dim matrix whose
columns follow that basis.
"""

from __future__ import annotations

from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..algebra.exactlin import Flag, PrimeField, Subquotient, Subspace, as_rows, complement_space, inverse, solve
from ..errors import NotAnFLMorphism, NotInvertible


def graded_basis(flag: Flag) -> Tuple[np.ndarray, List[int]]:
    """Rows adapted to the flag, highest level first, with their levels."""
    rows, levels = [], []
    for l in reversed(list(flag.levels())):
        comp = complement_space(flag.step(l), flag.step(l + 1))
        rows.extend(comp.basis)
        levels.extend([l] * comp.dim)
    basis = np.array(rows, dtype=np.int64).reshape(len(rows), flag.ambient_dim)
    return basis, levels


def graded_coordinates(flag: Flag, vectors, level: int) -> np.ndarray:
    """Gr^level coordinates of vectors of Fil^level, in the level-l part of graded_basis."""
    basis, levels = graded_basis(flag)
    field = flag.field
    vecs = as_rows(vectors, flag.ambient_dim)
    if not flag.step(level).contains(vecs):
        raise NotAnFLMorphism("vector is not in the filtration step", level=level)
    coords = field.matmul(vecs, inverse(field, basis)) if basis.shape[0] else np.zeros((vecs.shape[0], 0), dtype=np.int64)
    mask = np.array([lv == level for lv in levels], dtype=bool)
    return np.where(mask[None, :], coords, 0) % field.p


def strictness_check(field: PrimeField, matrix, src: Flag, dst: Flag) -> dict:
    """f(Fil^l src) = f(src) ∩ Fil^l dst for every l; FAIL carries a witness vector."""
    matrix = np.asarray(matrix, dtype=np.int64)
    image = Subspace.full(field, src.ambient_dim).image(matrix)
    lo = min(src.start, dst.start) - 1
    hi = max(src.stop, dst.stop) + 1
    for l in range(lo, hi + 1):
        left = src.step(l).image(matrix)
        right = image.intersect(dst.step(l))
        if left != right:
            extra = [v for v in right.basis if not left.contains(v)] or [v for v in left.basis if not right.contains(v)]
            witness = extra[0]
            return {"status": "FAIL", "level": l, "witness": [int(x) for x in witness], "dims": [left.dim, right.dim]}
    return {"status": "PASS", "level": None, "witness": None, "dims": [image.dim, image.dim]}


class FLModule:
    """(V, Fil, ψ) over F_p."""

    def __init__(self, field: PrimeField, fil: Flag, psi, name: str = ""):
        self.field = field
        self.fil = fil
        self.psi = np.asarray(psi, dtype=np.int64).reshape(fil.ambient_dim, fil.ambient_dim) % field.p
        self.name = name

    @property
    def dim(self) -> int:
        return self.fil.ambient_dim

    @classmethod
    def trivial(cls, field: PrimeField, dim: int = 1, level: int = 0) -> "FLModule":
        """F_p^dim concentrated in one Hodge level with ψ = 1."""
        flag = Flag([Subspace.full(field, dim)], start=level, decreasing=True)
        return cls(field, flag, field.identity(dim))

    def graded_basis(self):
        return graded_basis(self.fil)

    def hodge_numbers(self) -> dict:
        _, levels = self.graded_basis()
        out = {}
        for l in levels:
            out[l] = out.get(l, 0) + 1
        return dict(sorted(out.items()))

    def validate(self) -> dict:
        """ψ invertible and the flag finite and exhaustive."""
        try:
            inverse(self.field, self.psi)
            invertible = True
        except NotInvertible:
            invertible = False
        bottom = self.fil.step(self.fil.start - 1).is_full()
        top = self.fil.step(self.fil.stop).is_zero()
        ok = invertible and bottom and top
        return {
            "dim": self.dim,
            "hodge": {str(k): v for k, v in self.hodge_numbers().items()},
            "psi_invertible": invertible,
            "flag_finite": bottom and top,
            "status": "PASS" if ok else "FAIL",
        }

    def submodule(self, space: Subspace, name: str = "") -> "FLModule":
        """The induced FL structure on a ψ-stable subspace.

        Raises:
            NotAnFLMorphism: ψ does not map Gr(space) into space.
        """
        return _restrict(self, space, name or f"{self.name}|sub")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "fil_start": self.fil.start,
            "fil_dims": self.fil.dims(),
            "psi": self.psi.tolist(),
        }


def _restrict(M: FLModule, space: Subspace, name: str) -> FLModule:
    field = M.field
    if space.dim == 0:
        return FLModule(field, Flag([Subspace.zero(field, 0)], start=M.fil.start), np.zeros((0, 0)), name)
    steps = [Subspace.span(field, space.dim, space.coordinates(M.fil.step(l).intersect(space).basis)) for l in range(M.fil.start, M.fil.stop)]
    flag = Flag(steps, start=M.fil.start, decreasing=True)
    sub_basis, sub_levels = graded_basis(flag)
    cols = []
    for coords, level in zip(sub_basis, sub_levels):
        v = field.matmul(coords, space.basis)
        g = graded_coordinates(M.fil, v, level)[0]
        image = field.matmul(M.psi, g)
        if not space.contains(image):
            raise NotAnFLMorphism("ψ does not preserve the subspace", level=level)
        cols.append(space.coordinates(image)[0])
    return FLModule(field, flag, np.array(cols, dtype=np.int64).T, name)


class FLMorphism:
    """A filtered map f: V₁ → V₂ with f∘ψ₁ = ψ₂∘Gr(f)."""

    def __init__(self, source: FLModule, target: FLModule, matrix):
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim) % source.field.p

    @property
    def field(self) -> PrimeField:
        return self.source.field

    def graded(self) -> np.ndarray:
        """Gr(f) between the graded bases of source and target."""
        field = self.field
        src_basis, src_levels = self.source.graded_basis()
        out = np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        for col, (v, level) in enumerate(zip(src_basis, src_levels)):
            image = field.matmul(self.matrix, v)
            out[:, col] = graded_coordinates(self.target.fil, image, level)[0]
        return out

    def validate(self):
        """Raises NotAnFLMorphism unless f is filtered and intertwines ψ."""
        field = self.field
        for l in range(min(self.source.fil.start, self.target.fil.start), max(self.source.fil.stop, self.target.fil.stop) + 1):
            if not self.target.fil.step(l).contains_space(self.source.fil.step(l).image(self.matrix)):
                raise NotAnFLMorphism("map does not respect Fil", level=l)
        left = field.matmul(self.matrix, self.source.psi)
        right = field.matmul(self.target.psi, self.graded())
        if not np.array_equal(left, right):
            raise NotAnFLMorphism("map does not commute with ψ")
        return True


class KernelCokernel(NamedTuple):
    kernel: FLModule
    cokernel: FLModule
    strictness: dict


def kernel_cokernel(f: FLMorphism) -> KernelCokernel:
    """ker f and coker f with induced Fil and ψ.

    Raises:
        NotAnFLMorphism: f is not a morphism of FL modules, or f is not
            strict (impossible for a genuine one).
    """
    f.validate()
    field = f.field
    strict = strictness_check(field, f.matrix, f.source.fil, f.target.fil)
    if strict["status"] != "PASS":
        raise NotAnFLMorphism("morphism is not strict", level=strict["level"], witness=strict["witness"])
    ker_space = Subspace.preimage(field, f.matrix, Subspace.zero(field, f.target.dim))
    kernel = _restrict(f.source, ker_space, "ker")
    cokernel = _quotient(f.target, Subspace.full(field, f.source.dim).image(f.matrix), "coker")
    return KernelCokernel(kernel, cokernel, strict)


def _quotient(M: FLModule, image: Subspace, name: str) -> FLModule:
    field = M.field
    Q = Subquotient(Subspace.full(field, M.dim), image)
    if Q.dim == 0:
        return FLModule(field, Flag([Subspace.zero(field, 0)], start=M.fil.start), np.zeros((0, 0)), name)
    steps = [
        Subspace.span(field, Q.dim, Q.coordinates((M.fil.step(l) + image).basis))
        for l in range(M.fil.start, M.fil.stop)
    ]
    flag = Flag(steps, start=M.fil.start, decreasing=True)
    q_basis, q_levels = graded_basis(flag)
    cols = []
    for coords, level in zip(q_basis, q_levels):
        step = M.fil.step(level)
        lift = lift_into(Q, step, coords)
        if lift is None:
            raise NotAnFLMorphism("quotient class has no lift to the filtration step", level=level)
        g = graded_coordinates(M.fil, lift, level)[0]
        cols.append(Q.coordinates(field.matmul(M.psi, g))[0])
    return FLModule(field, flag, np.array(cols, dtype=np.int64).T, name)


def lift_into(Q: Subquotient, step: Subspace, coords) -> Optional[np.ndarray]:
    """A vector of ``step`` ∩ Q.big whose class in Q has the given coordinates."""
    field = Q.field
    inside = step.intersect(Q.big)
    target = np.asarray(coords, dtype=np.int64).reshape(-1)
    if inside.dim == 0:
        return np.zeros(Q.big.ambient_dim, dtype=np.int64) if not target.any() else None
    images = Q.coordinates(inside.basis)
    x = solve(field, images.T, target)
    if x is None:
        return None
    return field.matmul(x, inside.basis)
