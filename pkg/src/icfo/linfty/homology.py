from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from icfo.linfty.algebra import LieNAlgebra, from_entries
from icfo.linfty.linalg import Vector, apply, echelon, extend_basis, nullspace, rank, solve, transpose
from icfo.linfty.morphisms import LInftyMorphism, MorphismError, check_morphism, strict_morphism

logger = logging.getLogger(__name__)


def to_global(L: LieNAlgebra, i: int, v: Vector) -> dict[int, Fraction]:
    start = L.basis_in_degree(i).start
    return {start + j: x for j, x in enumerate(v) if x}


def to_local(L: LieNAlgebra, i: int, v: dict[int, Fraction]) -> Vector:
    basis = L.basis_in_degree(i)
    out = [Fraction(0)] * len(basis)
    for b, x in v.items():
        if b not in basis:
            raise ValueError(f"basis element {b} is not in degree {i}")
        out[b - basis.start] = x
    return out


@dataclass(frozen=True, eq=False)
class Homology:
    """H_i(L, l_1) with chosen cycle representatives in each degree."""

    algebra: LieNAlgebra
    cycles: tuple[tuple[Vector, ...], ...]
    boundaries: tuple[tuple[Vector, ...], ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    def is_cycle(self, i: int, v: Vector) -> bool:
        return not any(apply(self.algebra.differential(i), v))

    def coordinates(self, i: int, v: Vector) -> Vector:
        """Class of the cycle v in the chosen basis of H_i."""
        reps, bds = self.cycles[i], self.boundaries[i]
        dim = self.algebra.dims[i]
        cols = list(reps) + list(bds)
        if not cols:
            if any(v):
                raise ValueError(f"{v} is not a cycle in degree {i}")
            return []
        A = transpose(cols, dim) if dim else []
        x = solve(A, v, len(cols))
        if x is None:
            raise ValueError(f"{v} is not a cycle in degree {i}")
        return x[: len(reps)]


def homology(L: LieNAlgebra) -> Homology:
    cycles, boundaries = [], []
    for i in range(L.n):
        dim = L.dims[i]
        z = nullspace(L.differential(i), dim) if dim else []
        b: list[Vector] = []
        if i + 1 < L.n and L.dims[i + 1]:
            images = transpose(L.differential(i + 1), L.dims[i + 1])
            b = [list(row) for row in echelon(images, dim).rows]
        reps = extend_basis(b, z, dim)
        cycles.append(tuple(reps))
        boundaries.append(tuple(b))
    H = Homology(L, tuple(cycles), tuple(boundaries))
    logger.debug("homology of %r: %s", L, list(H.dims))
    return H


def homology_map(phi: LInftyMorphism, source: Homology | None = None, target: Homology | None = None) -> list[list[list[Fraction]]]:
    """Matrices of H_i(phi_1), rows indexed by the target's homology basis."""
    HL = homology(phi.source) if source is None else source
    HM = homology(phi.target) if target is None else target
    out = []
    for i in range(min(phi.source.n, phi.target.n)):
        cols = []
        for z in HL.cycles[i]:
            image = phi.linear(to_global(phi.source, i, z))
            cols.append(HM.coordinates(i, to_local(phi.target, i, image)))
        out.append(transpose(cols, HM.dims[i]) if cols else [[] for _ in range(HM.dims[i])])
    for i in range(min(phi.source.n, phi.target.n), max(phi.source.n, phi.target.n)):
        rows = HM.dims[i] if i < phi.target.n else 0
        out.append([[] for _ in range(rows)])
    return out


@dataclass(frozen=True)
class QuasiIsoReport:
    ok: bool
    source_dims: tuple[int, ...]
    target_dims: tuple[int, ...]
    failed_degree: int | None = None


def is_quasi_iso(phi: LInftyMorphism, *, check: bool = True) -> QuasiIsoReport:
    if check and not check_morphism(phi).ok:
        raise MorphismError(f"{phi!r} is not an L-infinity morphism")
    HL, HM = homology(phi.source), homology(phi.target)
    ds = HL.dims + (0,) * max(0, phi.target.n - phi.source.n)
    dt = HM.dims + (0,) * max(0, phi.source.n - phi.target.n)
    mats = homology_map(phi, HL, HM)
    for i, (a, b) in enumerate(zip(ds, dt)):
        if a != b or (a and rank(mats[i], a) != a):
            return QuasiIsoReport(False, HL.dims, HM.dims, i)
    return QuasiIsoReport(True, HL.dims, HM.dims)


def h0_lie_algebra(L: LieNAlgebra, H: Homology | None = None) -> LieNAlgebra:
    """The Lie algebra on H_0(L) induced by l_2 on cycle representatives."""
    H = homology(L) if H is None else H
    reps = H.cycles[0]
    entries = []
    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            value = L.evaluate(2, [to_global(L, 0, reps[a]), to_global(L, 0, reps[b])])
            coords = H.coordinates(0, to_local(L, 0, value))
            entries.append(((a, b), {c: x for c, x in enumerate(coords) if x}))
    names = None
    if L.names:
        names = []
        for z in reps:
            lead = next(j for j, x in enumerate(z) if x)
            names.append(f"[{L.label(L.basis_in_degree(0).start + lead)}]")
    return from_entries(1, (len(reps),), {2: entries}, names=names, name=f"H0({L.name})")


def h0_well_defined(L: LieNAlgebra, H: Homology | None = None) -> bool:
    """l_2(d w, x) is a boundary for every w in L_1 and x in L_0."""
    H = homology(L) if H is None else H
    if L.n < 2:
        return True
    ech = echelon([list(r) for r in H.boundaries[0]], L.dims[0])
    for w in L.basis_in_degree(1):
        dw = L.bracket(1, (w,))
        for x in L.basis_in_degree(0):
            value = L.evaluate(2, [dw, {x: Fraction(1)}])
            if not ech.contains(to_local(L, 0, value)):
                return False
    return True


def h0_map(phi: LInftyMorphism, source: Homology | None = None, target: Homology | None = None) -> LInftyMorphism:
    """H_0(phi_1) as a strict morphism of the H_0 Lie algebras."""
    HL = homology(phi.source) if source is None else source
    HM = homology(phi.target) if target is None else target
    A, B = h0_lie_algebra(phi.source, HL), h0_lie_algebra(phi.target, HM)
    mat = homology_map(phi, HL, HM)[0]
    linear = {c: {r: mat[r][c] for r in range(len(mat)) if mat[r][c]} for c in range(A.size)}
    return strict_morphism(A, B, linear, name="H0")
