"""
L-infinity morphisms, checked and composed through their duals
C*(L') -> C*(L) on Chevalley-Eilenberg algebras.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from icfo.linfty.algebra import Bracket, LieNAlgebra, vec_add, vec_clean
from icfo.linfty.ce import ce_algebra, expansion_sign, generator_images
from icfo.linfty.graded import (
    Monomial,
    Poly,
    apply_algebra_map,
    decalage_sign,
    koszul_sort,
    multiplicity_factor,
    poly_add,
)

logger = logging.getLogger(__name__)


class MorphismError(ValueError):
    """Taylor coefficients of the wrong shape or degree."""


@dataclass(frozen=True, eq=False)
class LInftyMorphism:
    source: LieNAlgebra
    target: LieNAlgebra
    taylor: Mapping[int, Bracket] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        L, M = self.source, self.target
        for k, table in self.taylor.items():
            if k < 1:
                raise MorphismError(f"Taylor arity must be positive, got {k}")
            for inputs, out in table.items():
                if len(inputs) != k or any(not 0 <= b < L.size for b in inputs):
                    raise MorphismError(f"phi_{k} entry {list(inputs)} has bad indices")
                sign, key = koszul_sort(inputs, L.lparity, skew=True)
                if key != tuple(inputs) or not sign:
                    raise MorphismError(f"phi_{k} entry {list(inputs)} is not a sorted non-vanishing tuple")
                want = sum(L.degree(b) for b in inputs) + k - 1
                for b, c in out.items():
                    if not 0 <= b < M.size:
                        raise MorphismError(f"phi_{k}{list(inputs)} has output index {b} out of range")
                    if c and M.degree(b) != want:
                        raise MorphismError(
                            f"phi_{k}{list(inputs)} lands in degree {M.degree(b)}, expected {want}"
                        )

    def __repr__(self) -> str:
        return f"<LInftyMorphism {self.name or '?'} {self.source!r} -> {self.target!r}>"

    def component(self, k: int, inputs: Sequence[int]) -> dict[int, Fraction]:
        sign, key = koszul_sort(inputs, self.source.lparity, skew=True)
        if not sign:
            return {}
        out = self.taylor.get(k, {}).get(key)
        return {b: sign * c for b, c in out.items()} if out else {}

    def linear(self, v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """phi_1 on a vector."""
        acc: dict[int, Fraction] = {}
        for b, c in v.items():
            vec_add(acc, self.component(1, (b,)), c)
        return vec_clean(acc)

    def matrix(self, i: int) -> list[list[Fraction]]:
        """phi_1 restricted to degree i (rows indexed by the target's degree-i basis)."""
        rows = self.target.basis_in_degree(i)
        cols = self.source.basis_in_degree(i)
        out = [[Fraction(0)] * len(cols) for _ in rows]
        for c, b in enumerate(cols):
            for t, x in self.component(1, (b,)).items():
                out[t - rows.start][c] = x
        return out

    def is_strict(self) -> bool:
        return all(not table for k, table in self.taylor.items() if k > 1)

    @cached_property
    def shifted(self) -> dict[int, Bracket]:
        table: dict[int, Bracket] = {}
        for k, entries in self.taylor.items():
            for key, out in entries.items():
                s = decalage_sign([self.source.degree(b) for b in key])
                vec = vec_clean({b: s * c for b, c in out.items()})
                if vec:
                    table.setdefault(k, {})[key] = vec
        return table

    @cached_property
    def dual(self) -> dict[int, Poly]:
        """Images of the target's generators in C*(source)."""
        return generator_images(self.shifted, self.source.vparity, odd=False)


def morphism_from_dual(
    source: LieNAlgebra,
    target: LieNAlgebra,
    images: Mapping[int, Poly],
    *,
    name: str = "",
) -> LInftyMorphism:
    """Read the Taylor coefficients back off generator images."""
    table: dict[int, dict[Monomial, dict[int, Fraction]]] = {}
    for a, poly in images.items():
        for mono, c in poly.items():
            if not mono:
                raise MorphismError("dual map has a constant term")
            k = len(mono)
            shifted = c * multiplicity_factor(mono) * expansion_sign(mono, source.vparity, odd=False)
            value = shifted * decalage_sign([source.degree(b) for b in mono])
            table.setdefault(k, {}).setdefault(mono, {})[a] = value
    taylor = {k: {key: vec_clean(v) for key, v in t.items()} for k, t in table.items()}
    return LInftyMorphism(source, target, taylor, name=name)


@dataclass(frozen=True)
class MorphismReport:
    ok: bool
    generator: int | None = None
    lhs: Poly | None = None
    rhs: Poly | None = None


def check_morphism(phi: LInftyMorphism) -> MorphismReport:
    """delta o phi^v = phi^v o delta' on every generator of C*(target)."""
    ce_s = ce_algebra(phi.source)
    ce_t = ce_algebra(phi.target)
    images = phi.dual
    for a in range(phi.target.size):
        lhs = ce_s.d(images.get(a, {}))
        rhs = apply_algebra_map(ce_t.d_generator(a), images, ce_s.parity)
        if poly_add(lhs, {m: -c for m, c in rhs.items()}):
            logger.debug("%r fails on generator %d", phi, a)
            return MorphismReport(False, a, lhs, rhs)
    return MorphismReport(True)


def compose(psi: LInftyMorphism, phi: LInftyMorphism) -> LInftyMorphism:
    """psi o phi, computed as phi^v o psi^v."""
    if phi.target is not psi.source and (phi.target.n, phi.target.dims) != (psi.source.n, psi.source.dims):
        raise MorphismError(f"cannot compose {psi!r} after {phi!r}")
    images = {
        a: apply_algebra_map(poly, phi.dual, phi.source.vparity) for a, poly in psi.dual.items()
    }
    name = f"{psi.name}.{phi.name}" if psi.name and phi.name else ""
    return morphism_from_dual(phi.source, psi.target, images, name=name)


def strict_morphism(
    source: LieNAlgebra,
    target: LieNAlgebra,
    linear: Mapping[int, Mapping[int, object]],
    *,
    name: str = "",
) -> LInftyMorphism:
    """phi_1 given as {source basis: {target basis: coefficient}}, no higher terms."""
    taylor = {1: {(b,): vec_clean({t: Fraction(c) for t, c in out.items()}) for b, out in linear.items()}}
    taylor[1] = {k: v for k, v in taylor[1].items() if v}
    return LInftyMorphism(source, target, taylor, name=name)


def from_matrices(
    source: LieNAlgebra,
    target: LieNAlgebra,
    blocks: Sequence[Sequence[Sequence[object]]],
    *,
    name: str = "",
) -> LInftyMorphism:
    """Strict morphism from one matrix per degree (rows: target basis in that degree)."""
    linear: dict[int, dict[int, object]] = {}
    for i, block in enumerate(blocks):
        rows, cols = target.basis_in_degree(i), source.basis_in_degree(i)
        for r, row in enumerate(block):
            for c, x in enumerate(row):
                if Fraction(x):
                    linear.setdefault(cols[c], {})[rows[r]] = x
    return strict_morphism(source, target, linear, name=name)


def identity_morphism(L: LieNAlgebra) -> LInftyMorphism:
    return strict_morphism(L, L, {b: {b: 1} for b in range(L.size)}, name="id")


def zero_morphism(source: LieNAlgebra, target: LieNAlgebra) -> LInftyMorphism:
    return LInftyMorphism(source, target, {}, name="0")


def equal_morphisms(phi: LInftyMorphism, psi: LInftyMorphism) -> bool:
    def norm(m: LInftyMorphism) -> dict:
        return {k: {key: v for key, v in t.items() if v} for k, t in m.taylor.items() if any(t.values())}

    return norm(phi) == norm(psi)


def taylor_entries(phi: LInftyMorphism) -> Iterable[tuple[int, Monomial, dict[int, Fraction]]]:
    for k in sorted(phi.taylor):
        for key in sorted(phi.taylor[k]):
            yield k, key, phi.taylor[k][key]
