"""
Sign bookkeeping for graded objects and graded-commutative polynomials.

A monomial is a sorted tuple of generator indices; odd generators appear at
most once. Polynomials are dicts from monomials to Fractions without zero
coefficients.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]
Parity = Callable[[int], int]


def koszul_sort(seq: Sequence[int], parity: Parity, *, skew: bool = False) -> tuple[int, Monomial]:
    """
    Sort seq in a graded-symmetric (or graded-skew) tensor. Returns the sign
    and the sorted tuple; sign 0 when the entry vanishes by symmetry.
    """
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        k = i
        while k > 0 and items[k - 1] > items[k]:
            a, b = items[k - 1], items[k]
            s = -1 if parity(a) and parity(b) else 1
            sign *= -s if skew else s
            items[k - 1], items[k] = b, a
            k -= 1
    out = tuple(items)
    for a, b in zip(out, out[1:]):
        if a == b and bool(parity(a)) != skew:
            return 0, out
    return sign, out


def decalage_sign(degrees: Sequence[int]) -> int:
    """(-1)^{sum_i (k - i) |x_i|}, the sign between l_k and the shifted bracket."""
    k = len(degrees)
    return -1 if sum((k - 1 - i) * d for i, d in enumerate(degrees)) % 2 else 1


def multiplicity_factor(mono: Monomial) -> int:
    out = 1
    for c in Counter(mono).values():
        out *= factorial(c)
    return out


def pair_parity(mono: Monomial, parity: Parity) -> int:
    """sum over i < j of |b_i||b_j|, mod 2."""
    total = 0
    seen = 0
    for b in mono:
        p = parity(b)
        total += p * seen
        seen += p
    return total % 2


def poly_clean(p: Mapping[Monomial, Fraction]) -> Poly:
    return {m: Fraction(c) for m, c in p.items() if c}


def poly_add(*polys: Mapping[Monomial, Fraction]) -> Poly:
    out: dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p.items():
            out[m] = out.get(m, Fraction(0)) + c
    return poly_clean(out)


def poly_scale(p: Mapping[Monomial, Fraction], c) -> Poly:
    return poly_clean({m: v * c for m, v in p.items()})


def poly_mul(p: Mapping[Monomial, Fraction], q: Mapping[Monomial, Fraction], parity: Parity) -> Poly:
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            sign, mono = koszul_sort(m1 + m2, parity)
            if sign:
                out[mono] = out.get(mono, Fraction(0)) + sign * c1 * c2
    return poly_clean(out)


def monomial(*gens: int, parity: Parity) -> Poly:
    sign, mono = koszul_sort(gens, parity)
    return {mono: Fraction(sign)} if sign else {}


ONE: Poly = {(): Fraction(1)}


def apply_derivation(p: Mapping[Monomial, Fraction], images: Mapping[int, Poly], parity: Parity) -> Poly:
    """The odd derivation with the given values on generators, applied to p."""
    terms = []
    for mono, c in p.items():
        for i, g in enumerate(mono):
            sign = -1 if sum(parity(b) for b in mono[:i]) % 2 else 1
            left = {mono[:i]: Fraction(sign) * c}
            right = {mono[i + 1:]: Fraction(1)}
            terms.append(poly_mul(poly_mul(left, images.get(g, {}), parity), right, parity))
    return poly_add(*terms)


def apply_algebra_map(
    p: Mapping[Monomial, Fraction],
    images: Mapping[int, Poly],
    target_parity: Parity,
) -> Poly:
    """The degree-preserving algebra map with the given values on generators."""
    terms = []
    for mono, c in p.items():
        acc: Poly = {(): Fraction(c)}
        for g in mono:
            acc = poly_mul(acc, images.get(g, {}), target_parity)
            if not acc:
                break
        terms.append(acc)
    return poly_add(*terms)


def sorted_tuples(items: Sequence[int], k: int, parity: Parity) -> Iterable[Monomial]:
    """Sorted k-tuples with repetition, odd entries used at most once."""
    if k == 0:
        yield ()
        return

    def rec(start: int, left: int, acc: tuple[int, ...]):
        if left == 0:
            yield acc
            return
        for pos in range(start, len(items)):
            b = items[pos]
            if acc and acc[-1] == b and parity(b):
                continue
            yield from rec(pos if not parity(b) else pos + 1, left - 1, acc + (b,))

    yield from rec(0, k, ())
