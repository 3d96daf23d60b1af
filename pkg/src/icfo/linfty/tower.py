"""
Postnikov truncations of a Lie n-algebra and the tower connecting them.

For 0 <= m <= n-1 the truncation tau_{<=m} L keeps L_i for i < m and puts
coker(l_1: L_{m+1} -> L_m) in degree m; tau_{<m} L puts im(l_1: L_m -> L_{m-1})
in degree m instead. Brackets are induced as p o l_k o (lift, ..., lift), and
every connecting map in the tower is p_B o lift_A.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Literal, Mapping, Sequence

from icfo.linfty.algebra import JacobiError, LieNAlgebra, Vec, vec_add, vec_clean
from icfo.linfty.graded import sorted_tuples
from icfo.linfty.homology import h0_lie_algebra, homology, to_global, to_local
from icfo.linfty.linalg import Echelon, Vector, apply, echelon, nullspace, solve, transpose
from icfo.linfty.morphisms import LInftyMorphism, MorphismError, compose, equal_morphisms, strict_morphism

logger = logging.getLogger(__name__)

Kind = Literal["leq", "lt"]


@dataclass(frozen=True, eq=False)
class Truncation:
    source: LieNAlgebra
    kind: Kind
    m: int
    lifts: tuple[Vector, ...]
    image: Echelon
    ambiguity: tuple[Vector, ...]
    algebra: LieNAlgebra | None = None

    @property
    def label(self) -> str:
        return f"<={self.m}" if self.kind == "leq" else f"<{self.m}"

    @property
    def top(self) -> range:
        start = sum(self.source.dims[: self.m])
        return range(start, start + len(self.lifts))

    def lift(self, b: int) -> Vec:
        """A representative in L of the basis element b of the truncation."""
        top = self.top
        if b < top.start:
            return {b: Fraction(1)}
        return to_global(self.source, self.m, self.lifts[b - top.start])

    def lift_vector(self, v: Mapping[int, Fraction]) -> Vec:
        acc: dict[int, Fraction] = {}
        for b, c in v.items():
            vec_add(acc, self.lift(b), c)
        return vec_clean(acc)

    def project(self, v: Mapping[int, Fraction]) -> Vec:
        L, m = self.source, self.m
        top = L.basis_in_degree(m)
        out = {b: Fraction(c) for b, c in v.items() if b < top.start and c}
        local = to_local(L, m, {b: c for b, c in v.items() if b in top})
        if not any(local):
            return vec_clean(out)
        if self.kind == "leq":
            reduced = self.image.reduce(local)
            coords = [reduced[c] for c in self.image.free_columns()]
        else:
            coords = self.image.coordinates(apply(L.differential(m), local))
        start = self.top.start
        for j, x in enumerate(coords):
            if x:
                out[start + j] = x
        return vec_clean(out)


def _truncation_data(L: LieNAlgebra, m: int, kind: Kind) -> Truncation:
    if not 0 <= m < L.n:
        raise ValueError(f"truncation degree must lie in [0, {L.n - 1}], got {m}")
    dim = L.dims[m]
    if kind == "leq":
        rows: list[Vector] = []
        if m + 1 < L.n and L.dims[m + 1]:
            rows = transpose(L.differential(m + 1), L.dims[m + 1])
        ech = echelon(rows, dim)
        lifts = []
        for c in ech.free_columns():
            e = [Fraction(0)] * dim
            e[c] = Fraction(1)
            lifts.append(e)
        ambiguity = tuple(list(r) for r in ech.rows)
    else:
        if m == 0 or not dim or not L.dims[m - 1]:
            ech = Echelon((), (), L.dims[m - 1] if m else 0)
        else:
            ech = echelon(transpose(L.differential(m), dim), L.dims[m - 1])
        d = L.differential(m)
        lifts = []
        for row in ech.rows:
            y = solve(d, list(row), dim)
            if y is None:
                raise JacobiError(f"image row {list(row)} of l_1 on degree {m} has no preimage")
            lifts.append(y)
        ambiguity = tuple(nullspace(d, dim)) if dim else ()
    return Truncation(L, kind, m, tuple(lifts), ech, ambiguity)


def _skew_tuples(size: int, k: int, lparity) -> list[tuple[int, ...]]:
    # stored keys: even entries at most once, odd entries may repeat
    return list(sorted_tuples(range(size), k, lambda b: 1 - lparity(b)))


def _induced(data: Truncation) -> LieNAlgebra:
    L, m = data.source, data.m
    dims = tuple(L.dims[:m]) + (len(data.lifts),)
    degrees = [i for i, d in enumerate(dims) for _ in range(d)]
    size = len(degrees)
    parity = lambda b: degrees[b] % 2  # noqa: E731

    for z in data.ambiguity:
        zg = to_global(L, m, z)
        if not zg:
            continue
        for k in sorted(L.brackets):
            for rest in combinations_with_replacement(range(size), k - 1):
                if m + sum(degrees[b] for b in rest) + k - 2 > m:
                    continue
                value = data.project(L.evaluate(k, [zg] + [data.lift(b) for b in rest]))
                if value:
                    raise JacobiError(
                        f"induced l_{k} on tau{data.label} {L!r} is not well defined: "
                        f"{z} in degree {m} with {list(rest)} gives {value}"
                    )

    brackets: dict[int, dict[tuple[int, ...], Vec]] = {}
    for k in sorted(L.brackets):
        for key in _skew_tuples(size, k, parity):
            if sum(degrees[b] for b in key) + k - 2 > m:
                continue
            value = data.project(L.evaluate(k, [data.lift(b) for b in key]))
            if value:
                brackets.setdefault(k, {})[key] = value

    names = None
    if L.names:
        top = [f"[{L.label(b)}]" if data.kind == "leq" else f"d{L.label(b)}" for b in _leads(data)]
        names = tuple(L.names[: sum(L.dims[:m])]) + tuple(top)
    name = f"tau{data.label}({L.name})" if L.name else f"tau{data.label}"
    return LieNAlgebra(m + 1, dims, brackets, names, name)


def _leads(data: Truncation) -> list[int]:
    start = data.source.basis_in_degree(data.m).start
    return [start + next(j for j, x in enumerate(v) if x) for v in data.lifts]


def _truncate(L: LieNAlgebra, m: int, kind: Kind) -> Truncation:
    data = _truncation_data(L, m, kind)
    T = _induced(data)
    logger.debug("tau%s of %r has dims %s", data.label, L, list(T.dims))
    return Truncation(data.source, kind, m, data.lifts, data.image, data.ambiguity, T)


def truncate_leq(L: LieNAlgebra, m: int) -> Truncation:
    """tau_{<=m} L, the Lie (m+1)-algebra with coker(l_1) on top."""
    return _truncate(L, m, "leq")


def truncate_lt(L: LieNAlgebra, m: int) -> Truncation:
    """tau_{<m} L, the Lie (m+1)-algebra with im(l_1) on top."""
    return _truncate(L, m, "lt")


def connecting_map(A: Truncation, B: Truncation) -> LInftyMorphism:
    """The strict map p_B o lift_A between two truncations of the same algebra."""
    if A.source is not B.source:
        raise MorphismError("truncations of different algebras")
    linear = {b: B.project(A.lift(b)) for b in range(A.algebra.size)}
    return strict_morphism(A.algebra, B.algebra, linear, name=f"{A.label}->{B.label}")


@dataclass(frozen=True, eq=False)
class Tower:
    algebra: LieNAlgebra
    stages: tuple[Truncation, ...]
    maps: tuple[LInftyMorphism, ...]

    def labels(self) -> list[str]:
        return [s.label for s in self.stages]


def tower(L: LieNAlgebra) -> Tower:
    """L = tau<=n-1 -> tau<n-1 -> tau<=n-2 -> ... -> tau<1 -> tau<=0."""
    stages = [truncate_leq(L, L.n - 1)]
    for m in range(L.n - 1, 0, -1):
        stages.append(truncate_lt(L, m))
        stages.append(truncate_leq(L, m - 1))
    maps = tuple(connecting_map(a, b) for a, b in zip(stages, stages[1:]))
    return Tower(L, tuple(stages), maps)


def _evaluate_component(phi: LInftyMorphism, k: int, vectors: Sequence[Mapping[int, Fraction]]) -> Vec:
    acc: dict[int, Fraction] = {}

    def rec(pos: int, chosen: tuple[int, ...], coeff: Fraction) -> None:
        if pos == len(vectors):
            vec_add(acc, phi.component(k, chosen), coeff)
            return
        for b, c in vectors[pos].items():
            rec(pos + 1, chosen + (b,), coeff * c)

    rec(0, (), Fraction(1))
    return vec_clean(acc)


def truncate_morphism(phi: LInftyMorphism, A: Truncation, B: Truncation) -> LInftyMorphism:
    """p_B o phi_k o (lift_A, ..., lift_A) for every arity."""
    S = A.algebra
    degrees = [S.degree(b) for b in range(S.size)]
    taylor: dict[int, dict[tuple[int, ...], Vec]] = {}
    for k in sorted(phi.taylor):
        for key in _skew_tuples(S.size, k, S.lparity):
            if sum(degrees[b] for b in key) + k - 1 > B.m:
                continue
            value = B.project(_evaluate_component(phi, k, [A.lift(b) for b in key]))
            if value:
                taylor.setdefault(k, {})[key] = value
    return LInftyMorphism(S, B.algebra, taylor, name=f"tau{A.label}({phi.name})")


@dataclass(frozen=True, eq=False)
class TowerMorphism:
    source: Tower
    target: Tower
    components: tuple[LInftyMorphism, ...]
    squares: tuple[bool, ...]

    @property
    def commutes(self) -> bool:
        return all(self.squares)


def tower_morphism(phi: LInftyMorphism, source: Tower | None = None, target: Tower | None = None) -> TowerMorphism:
    """The ladder of truncated morphisms, every square checked exactly."""
    if phi.source.n != phi.target.n:
        raise MorphismError(f"towers of {phi.source!r} and {phi.target!r} have different lengths")
    TL = tower(phi.source) if source is None else source
    TM = tower(phi.target) if target is None else target
    components = tuple(truncate_morphism(phi, a, b) for a, b in zip(TL.stages, TM.stages))
    squares = []
    for i, (top, bottom) in enumerate(zip(TL.maps, TM.maps)):
        ok = equal_morphisms(compose(bottom, components[i]), compose(components[i + 1], top))
        if not ok:
            logger.debug("square %d of the ladder for %r does not commute", i, phi)
        squares.append(ok)
    return TowerMorphism(TL, TM, components, tuple(squares))


def h0_comparison(L: LieNAlgebra) -> LInftyMorphism:
    """H_0(L) -> tau<=0 L sending a class to the projection of its representative."""
    H = homology(L)
    A = h0_lie_algebra(L, H)
    T = truncate_leq(L, 0)
    linear = {j: T.project(to_global(L, 0, z)) for j, z in enumerate(H.cycles[0])}
    return strict_morphism(A, T.algebra, linear, name="H0->tau<=0")
