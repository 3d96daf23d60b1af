"""
Seeded random groupoids and functors between them, for the agreement and
factorization suites. Every sample is a valid simplicial map by construction.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from icfo.simplicial.core import (
    INDEX,
    SimplicialMorphism,
    identity,
    morphism_from_labels,
    point,
    terminal_map,
)
from icfo.simplicial.nerves import (
    FiniteGroup,
    FiniteGroupoid,
    GroupoidComponent,
    GroupoidFunctor,
    cyclic_group,
    eilenberg_maclane_z2_2,
    group_homomorphisms,
    nerve,
    nerve_map,
    trivial_group,
)

logger = logging.getLogger(__name__)

SMALL_GROUPS: tuple[FiniteGroup, ...] = (trivial_group(), cyclic_group(2), cyclic_group(3))
MAX_OBJECTS = 4


def random_groupoid(rng: np.random.Generator, *, max_objects: int = MAX_OBJECTS) -> FiniteGroupoid:
    """One or two components, at most max_objects objects in total."""
    n_components = int(rng.integers(1, 3))
    budget = max_objects
    comps = []
    for c in range(n_components):
        left = n_components - c - 1
        if budget - left < 1:
            break
        objects = int(rng.integers(1, budget - left + 1))
        budget -= objects
        comps.append(GroupoidComponent(objects, SMALL_GROUPS[int(rng.integers(len(SMALL_GROUPS)))]))
    name = "+".join(f"{c.objects}x{c.group.name}" for c in comps)
    return FiniteGroupoid(tuple(comps), name=name)


def random_functor(rng: np.random.Generator, source: FiniteGroupoid, target: FiniteGroupoid) -> GroupoidFunctor:
    component_map, object_maps, homs, twists = [], [], [], []
    for comp in source.components:
        t = int(rng.integers(len(target.components)))
        tgt = target.components[t]
        candidates = group_homomorphisms(comp.group, tgt.group)
        component_map.append(t)
        object_maps.append(tuple(int(x) for x in rng.integers(tgt.objects, size=comp.objects)))
        homs.append(candidates[int(rng.integers(len(candidates)))])
        twists.append(tuple(int(x) for x in rng.integers(tgt.group.order, size=comp.objects)))
    return GroupoidFunctor(
        source=source,
        target=target,
        component_map=tuple(component_map),
        object_maps=tuple(object_maps),
        homs=tuple(homs),
        twists=tuple(twists),
    )


@dataclass(frozen=True, eq=False)
class RandomMorphism:
    name: str
    morphism: SimplicialMorphism
    level: int


def random_groupoid_morphism(rng: np.random.Generator, cap: int, *, index: int = 0) -> RandomMorphism:
    A, B = random_groupoid(rng), random_groupoid(rng)
    F = random_functor(rng, A, B)
    X, Y = nerve(A, cap), nerve(B, cap)
    f = nerve_map(F, X, Y)
    return RandomMorphism(f"gpd{index}:{A.name}->{B.name}", f, 1)


def z2_cocycle_map(cap: int, *, twisted: bool = True) -> SimplicialMorphism:
    """
    N(Z/2) -> K(Z/2, 2) classifying the cocycle c(a, b) = a b (or 0); a chain
    (g_1..g_m) goes to the 2-cocycle (i, j, k) -> c(g_i+1..g_j, g_j+1..g_k).
    """
    G = cyclic_group(2)
    X = nerve(G, cap)
    K = eilenberg_maclane_z2_2(cap)

    def image(m: int, chain) -> tuple[int, ...]:
        _, _, elts = chain
        out = []
        for i in range(m + 1):
            for j in range(i + 1, m + 1):
                for k in range(j + 1, m + 1):
                    a = sum(elts[i:j]) % 2
                    b = sum(elts[j:k]) % 2
                    out.append(a * b if twisted else 0)
        return tuple(out)

    return morphism_from_labels(X, K, image, name="c" if twisted else "0")


def two_groupoid_morphisms(cap: int) -> list[RandomMorphism]:
    """The fixed pool of maps touching the K(Z/2, 2) model."""
    K = eilenberg_maclane_z2_2(cap)
    pt = point(cap)
    base = SimplicialMorphism(pt, K, tuple(np.zeros(1, dtype=INDEX) for _ in range(cap + 1)), name="base")
    return [
        RandomMorphism("K->pt", terminal_map(K), 2),
        RandomMorphism("pt->K", base, 2),
        RandomMorphism("id_K", identity(K), 2),
        RandomMorphism("N(Z2)->K twisted", z2_cocycle_map(cap), 2),
        RandomMorphism("N(Z2)->K zero", z2_cocycle_map(cap, twisted=False), 2),
    ]


def random_morphisms(
    count: int,
    *,
    seed: int = 0,
    cap: int = 3,
    two_groupoids: bool = False,
) -> Iterator[RandomMorphism]:
    """
    count seeded functor nerves at the given cap. With two_groupoids every
    fifth draw comes from the K(Z/2, 2) pool, built one level higher.
    """
    rng = np.random.default_rng(seed)
    pool = two_groupoid_morphisms(cap + 1) if two_groupoids else []
    for k in range(count):
        if pool and k % 5 == 4:
            yield pool[int(rng.integers(len(pool)))]
        else:
            sample = random_groupoid_morphism(rng, cap, index=k)
            logger.debug("random morphism %s", sample.name)
            yield sample


def random_composable_pair(rng: np.random.Generator, cap: int) -> tuple[SimplicialMorphism, SimplicialMorphism]:
    """f: X -> Y, g: Y -> Z between random groupoid nerves."""
    A, B, C = random_groupoid(rng), random_groupoid(rng), random_groupoid(rng)
    X, Y, Z = nerve(A, cap), nerve(B, cap), nerve(C, cap)
    f = nerve_map(random_functor(rng, A, B), X, Y)
    g = nerve_map(random_functor(rng, B, C), Y, Z)
    return f, g
