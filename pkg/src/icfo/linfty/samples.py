from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterator

import numpy as np

from icfo.linfty.algebra import LieNAlgebra, from_entries
from icfo.linfty.graded import sorted_tuples
from icfo.linfty.linalg import rank, solve
from icfo.linfty.morphisms import LInftyMorphism, from_matrices, strict_morphism

logger = logging.getLogger(__name__)

SL2_NAMES = ("e", "f", "h")
SL2_BRACKETS = [((0, 1), {2: 1}), ((2, 0), {0: 2}), ((2, 1), {1: -2})]


def sl2() -> LieNAlgebra:
    """sl_2 as a Lie 1-algebra: [e,f] = h, [h,e] = 2e, [h,f] = -2f."""
    return from_entries(1, (3,), {2: SL2_BRACKETS}, names=SL2_NAMES, name="sl2")


def perturbed_sl2() -> LieNAlgebra:
    """sl_2 with [h,e] = e; violates the Jacobi identity on (e, f, h)."""
    entries = [((0, 1), {2: 1}), ((2, 0), {0: 1}), ((2, 1), {1: -2})]
    return from_entries(1, (3,), {2: entries}, names=SL2_NAMES, name="sl2[h,e]=e")


def string_lie2() -> LieNAlgebra:
    """
    The string Lie 2-algebra: sl_2 in degree 0, a central line c in degree 1,
    l_1 = 0 and l_3(x, y, z) = <x, [y, z]> c with the Killing form.
    """
    # <e, [f, h]> = <e, 2f> = 2 * 4
    return from_entries(
        2,
        (3, 1),
        {2: SL2_BRACKETS, 3: [((0, 1, 2), {3: 8})]},
        names=SL2_NAMES + ("c",),
        name="string(sl2)",
    )


def abelian(dims: tuple[int, ...], *, name: str = "") -> LieNAlgebra:
    return LieNAlgebra(len(dims), tuple(dims), {}, None, name or f"ab{list(dims)}")


def line() -> LieNAlgebra:
    """The abelian Lie algebra Q in degree 0."""
    return LieNAlgebra(1, (1,), {}, ("c",), "Q")


def zero_algebra(n: int = 1) -> LieNAlgebra:
    return LieNAlgebra(n, (0,) * n, {}, None, "0")


def contractible() -> LieNAlgebra:
    """Q --id--> Q as a Lie 2-algebra."""
    return from_entries(2, (1, 1), {1: [((1,), {0: 1})]}, names=("x", "y"), name="Q->Q")


def split_contractible() -> LieNAlgebra:
    """Q (+) (Q --id--> Q): a degree-0 line a next to the contractible pair b <- c."""
    return from_entries(2, (2, 1), {1: [((2,), {1: 1})]}, names=("a", "b", "c"), name="Q+(Q->Q)")


def split_projection() -> LInftyMorphism:
    """Q (+) (Q -> Q) -> Q onto the line a."""
    target = LieNAlgebra(2, (1, 0), {}, ("a",), "Q")
    return strict_morphism(split_contractible(), target, {0: {0: 1}}, name="pr")


def scaling(L: LieNAlgebra, c) -> LInftyMorphism:
    return strict_morphism(L, L, {b: {b: c} for b in range(L.size)}, name=f"{c}*id")


def subalgebra_inclusion() -> LInftyMorphism:
    """The Cartan line <h> inside sl_2."""
    source = LieNAlgebra(1, (1,), {}, ("h",), "<h>")
    return strict_morphism(source, sl2(), {0: {2: 1}}, name="incl")


def bracket_breaking() -> LInftyMorphism:
    """A linear map sl_2 -> sl_2 that is trivially a chain map but does not respect [ , ]."""
    return strict_morphism(sl2(), sl2(), {0: {0: 1}, 1: {1: 1}}, name="kill-h")


def string_projection() -> LInftyMorphism:
    """string(sl2) -> sl2 (as a Lie 2-algebra with nothing in degree 1)."""
    target = from_entries(2, (3, 0), {2: SL2_BRACKETS}, names=SL2_NAMES, name="sl2")
    return strict_morphism(string_lie2(), target, {b: {b: 1} for b in range(3)}, name="pr")


# random data

def _rational(rng: np.random.Generator) -> Fraction:
    num = int(rng.choice([-3, -2, -1, 1, 2, 3]))
    return Fraction(num, int(rng.choice([1, 2])))


def perturbation_slots(L: LieNAlgebra) -> list[tuple[int, tuple[int, ...], int]]:
    """(arity, sorted inputs, output) triples a structure constant of L may occupy."""
    slots = []
    stored = lambda b: 1 - L.lparity(b)  # noqa: E731
    for k in range(2, L.max_arity + 1):
        for key in sorted_tuples(range(L.size), k, stored):
            want = sum(L.degree(b) for b in key) + k - 2
            for out in L.basis_in_degree(want):
                slots.append((k, key, out))
    return slots


def perturb(L: LieNAlgebra, k: int, key: tuple[int, ...], out: int, delta) -> LieNAlgebra:
    """L with one structure constant of l_k shifted by delta."""
    brackets = {a: {kk: dict(v) for kk, v in t.items()} for a, t in L.brackets.items()}
    slot = brackets.setdefault(k, {}).setdefault(tuple(key), {})
    slot[out] = slot.get(out, Fraction(0)) + Fraction(delta)
    if not slot[out]:
        del slot[out]
    brackets = {a: {kk: v for kk, v in t.items() if v} for a, t in brackets.items()}
    return LieNAlgebra(L.n, L.dims, brackets, L.names, f"{L.name}~")


def random_perturbations(L: LieNAlgebra, count: int, *, seed: int = 0) -> Iterator[LieNAlgebra]:
    """Single-constant perturbations of L drawn from a seeded generator."""
    rng = np.random.default_rng(seed)
    slots = perturbation_slots(L)
    if not slots:
        raise ValueError(f"{L!r} has no structure constants to perturb")
    for _ in range(count):
        k, key, out = slots[int(rng.integers(len(slots)))]
        yield perturb(L, k, key, out, _rational(rng))


def _random_matrix(rng: np.random.Generator, rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(int(x)) for x in rng.integers(-2, 3, size=cols)] for _ in range(rows)]


def _complex(d: list[list[Fraction]], dims: tuple[int, int], name: str) -> LieNAlgebra:
    entries = []
    for j in range(dims[1]):
        out = {i: d[i][j] for i in range(dims[0]) if d[i][j]}
        if out:
            entries.append(((dims[0] + j,), out))
    return from_entries(2, dims, {1: entries}, name=name)


def random_chain_map(rng: np.random.Generator, *, max_dim: int = 3) -> LInftyMorphism:
    """
    A strict morphism between random two-term complexes L_1 -> L_0 and
    M_1 -> M_0: phi_0 is invertible and d_L is chosen as phi_0^-1 d_M phi_1.
    """
    a0 = int(rng.integers(1, max_dim + 1))
    a1, b1 = (int(x) for x in rng.integers(0, max_dim, size=2))
    while True:
        phi0 = _random_matrix(rng, a0, a0)
        if rank(phi0, a0) == a0:
            break
    phi1 = _random_matrix(rng, b1, a1)
    dM = _random_matrix(rng, a0, b1)
    target = [[sum((dM[i][r] * phi1[r][j] for r in range(b1)), Fraction(0)) for j in range(a1)] for i in range(a0)]
    dL = [[Fraction(0)] * a1 for _ in range(a0)]
    for j in range(a1):
        y = solve(phi0, [target[i][j] for i in range(a0)], a0)
        for i in range(a0):
            dL[i][j] = y[i]
    L = _complex(dL, (a0, a1), "L")
    M = _complex(dM, (a0, b1), "M")
    return from_matrices(L, M, [phi0, phi1], name="phi")


def random_chain_maps(count: int, *, seed: int = 0, max_dim: int = 3) -> list[LInftyMorphism]:
    rng = np.random.default_rng(seed)
    return [random_chain_map(rng, max_dim=max_dim) for _ in range(count)]
