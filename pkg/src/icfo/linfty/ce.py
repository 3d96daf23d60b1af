"""
Chevalley-Eilenberg algebras: the free graded-commutative algebra on the dual
of L[1] with the differential dual to the shifted brackets,

    sum_a (delta xi^a) e_a = sum_k 1/k! l_k(Xi, ..., Xi),   Xi = sum_a xi^a e_a.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from icfo.linfty.algebra import LieNAlgebra
from icfo.linfty.graded import Monomial, Poly, apply_derivation, multiplicity_factor, pair_parity, poly_add

logger = logging.getLogger(__name__)


def expansion_sign(mono: Monomial, parity, *, odd: bool) -> int:
    """Sign picked up by xi^{b_1}...xi^{b_k} when pulled out of a k-ary operation on Xi."""
    total = pair_parity(mono, parity)
    if odd:
        total += sum(parity(b) for b in mono)
    return -1 if total % 2 else 1


def generator_images(
    table: Mapping[int, Mapping[Monomial, Mapping[int, Fraction]]],
    parity,
    *,
    odd: bool,
) -> dict[int, Poly]:
    """Polynomials in the source generators dual to shifted multilinear data."""
    images: dict[int, dict[Monomial, Fraction]] = {}
    for k in sorted(table):
        for key, out in table[k].items():
            weight = Fraction(expansion_sign(key, parity, odd=odd), multiplicity_factor(key))
            for a, c in out.items():
                slot = images.setdefault(a, {})
                slot[key] = slot.get(key, Fraction(0)) + weight * c
    return {a: poly_add(p) for a, p in images.items()}


@dataclass(frozen=True, eq=False)
class CEAlgebra:
    algebra: LieNAlgebra
    degrees: tuple[int, ...]
    differential: Mapping[int, Poly]

    @property
    def n_generators(self) -> int:
        return len(self.degrees)

    def parity(self, g: int) -> int:
        return self.degrees[g] % 2

    def d(self, p: Poly) -> Poly:
        return apply_derivation(p, self.differential, self.parity)

    def d_generator(self, g: int) -> Poly:
        return dict(self.differential.get(g, {}))

    def describe(self, p: Poly) -> str:
        if not p:
            return "0"
        names = [f"xi_{self.algebra.label(g)}" for g in range(self.n_generators)]
        terms = []
        for mono, c in sorted(p.items()):
            body = "*".join(names[g] for g in mono) or "1"
            terms.append(f"{c}*{body}")
        return " + ".join(terms)


def ce_algebra(L: LieNAlgebra) -> CEAlgebra:
    degrees = tuple(L.degree(b) + 1 for b in range(L.size))
    images = generator_images(L.shifted, L.vparity, odd=True)
    return CEAlgebra(L, degrees, images)


@dataclass(frozen=True)
class SquareReport:
    ok: bool
    generator: int | None = None
    value: Poly | None = None


def check_d_squared(ce: CEAlgebra) -> SquareReport:
    """delta^2 on every generator; delta is a derivation so this decides delta^2 = 0."""
    for g in range(ce.n_generators):
        value = ce.d(ce.d_generator(g))
        if value:
            logger.debug("delta^2 xi_%d = %s", g, ce.describe(value))
            return SquareReport(False, g, value)
    return SquareReport(True)
