"""
Finite groups, finite groupoids and their nerves, plus a finite model of
K(Z/2, 2) by normalized 2-cocycles.

A groupoid is a disjoint union of components Gamma(S, G): objects S, arrows
(a, b, g) : a -> b for g in G, composed diagrammatically as
(a, b, g) then (b, c, h) = (a, c, g h). Every finite groupoid is of this form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product as cartesian
from math import comb
from typing import Sequence

from icfo.simplicial.core import SimplicialMorphism, SimplicialSet, from_labels, morphism_from_labels


@dataclass(frozen=True)
class FiniteGroup:
    """Elements 0..order-1 with a multiplication table; 0 is the identity."""

    table: tuple[tuple[int, ...], ...]
    name: str = ""
    element_names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        k = len(self.table)
        if k == 0 or any(len(row) != k for row in self.table):
            raise ValueError("group table must be square and non-empty")
        if any(self.table[0][g] != g or self.table[g][0] != g for g in range(k)):
            raise ValueError("element 0 must be the identity")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(0)

    def check_axioms(self) -> bool:
        k = self.order
        assoc = all(
            self.table[self.table[a][b]][c] == self.table[a][self.table[b][c]]
            for a in range(k)
            for b in range(k)
            for c in range(k)
        )
        return assoc and all(0 in row for row in self.table)


def cyclic_group(k: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((a + b) % k for b in range(k)) for a in range(k)), name=f"Z{k}")


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    # (a b)(x) = a(b(x))
    table = tuple(tuple(index[tuple(a[b[x]] for x in range(n))] for b in perms) for a in perms)
    return FiniteGroup(table, name=f"S{n}", element_names=tuple("".join(map(str, p)) for p in perms))


def group_from_table(table: Sequence[Sequence[int]], *, name: str = "") -> FiniteGroup:
    G = FiniteGroup(tuple(tuple(int(v) for v in row) for row in table), name=name)
    if not G.check_axioms():
        raise ValueError(f"table {name or ''} is not a group")
    return G


def group_homomorphisms(G: FiniteGroup, H: FiniteGroup) -> list[tuple[int, ...]]:
    """All homomorphisms G -> H by brute force (G, H tiny)."""
    out = []
    for images in cartesian(range(H.order), repeat=G.order - 1):
        phi = (0,) + images
        if all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in range(G.order) for b in range(G.order)):
            out.append(phi)
    return out


def is_group_isomorphism(G: FiniteGroup, H: FiniteGroup, phi: Sequence[int]) -> bool:
    return (
        G.order == H.order
        and len(set(phi)) == H.order
        and all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in range(G.order) for b in range(G.order))
    )


def groups_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    if G.order != H.order:
        return False
    return any(len(set(phi)) == H.order for phi in group_homomorphisms(G, H))


@dataclass(frozen=True)
class GroupoidComponent:
    objects: int
    group: FiniteGroup


@dataclass(frozen=True)
class FiniteGroupoid:
    components: tuple[GroupoidComponent, ...]
    name: str = ""

    @property
    def n_objects(self) -> int:
        return sum(c.objects for c in self.components)


def group_groupoid(G: FiniteGroup) -> FiniteGroupoid:
    return FiniteGroupoid((GroupoidComponent(1, G),), name=G.name)


def pair_groupoid(k: int) -> FiniteGroupoid:
    return FiniteGroupoid((GroupoidComponent(k, trivial_group()),), name=f"pair{k}")


def disjoint_groupoid(*parts: FiniteGroupoid) -> FiniteGroupoid:
    return FiniteGroupoid(tuple(c for p in parts for c in p.components), name="+".join(p.name for p in parts))


# Chain label: (component, vertices a_0..a_m, elements g_1..g_m)
Chain = tuple[int, tuple[int, ...], tuple[int, ...]]


def _chain_face(gpd: FiniteGroupoid):
    def face(m: int, chain: Chain, i: int) -> Chain:
        c, verts, elts = chain
        G = gpd.components[c].group
        v = verts[:i] + verts[i + 1:]
        if i == 0:
            return c, v, elts[1:]
        if i == m:
            return c, v, elts[:-1]
        return c, v, elts[: i - 1] + (G.mul(elts[i - 1], elts[i]),) + elts[i + 1:]

    return face


def _chain_degeneracy(m: int, chain: Chain, i: int) -> Chain:
    c, verts, elts = chain
    return c, verts[: i + 1] + verts[i:], elts[:i] + (0,) + elts[i:]


def nerve(gpd: FiniteGroupoid | FiniteGroup, cap: int, *, name: str = "") -> SimplicialSet:
    if isinstance(gpd, FiniteGroup):
        gpd = group_groupoid(gpd)
    levels = []
    for m in range(cap + 1):
        level: list[Chain] = []
        for c, comp in enumerate(gpd.components):
            for verts in cartesian(range(comp.objects), repeat=m + 1):
                for elts in cartesian(range(comp.group.order), repeat=m):
                    level.append((c, verts, elts))
        levels.append(level)
    return from_labels(cap, levels, _chain_face(gpd), _chain_degeneracy, name=name or f"N({gpd.name})")


@dataclass(frozen=True)
class GroupoidFunctor:
    """
    Functor between finite groupoids. Component c goes to component
    component_map[c]; object a to object_maps[c][a]; the arrow (a, b, g) to
    (F a, F b, twist_a . hom(g) . twist_b^-1).
    """

    source: FiniteGroupoid
    target: FiniteGroupoid
    component_map: tuple[int, ...]
    object_maps: tuple[tuple[int, ...], ...]
    homs: tuple[tuple[int, ...], ...]
    twists: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for c, comp in enumerate(self.source.components):
            tgt = self.target.components[self.component_map[c]]
            H = tgt.group
            if len(self.object_maps[c]) != comp.objects or any(not 0 <= o < tgt.objects for o in self.object_maps[c]):
                raise ValueError(f"object map of component {c} is malformed")
            phi = self.homs[c]
            G = comp.group
            if any(phi[G.mul(a, b)] != H.mul(phi[a], phi[b]) for a in range(G.order) for b in range(G.order)):
                raise ValueError(f"group map of component {c} is not a homomorphism")

    def on_chain(self, chain: Chain) -> Chain:
        c, verts, elts = chain
        t = self.component_map[c]
        H = self.target.components[t].group
        phi, tw = self.homs[c], self.twists[c]
        new_elts = tuple(
            H.mul(H.mul(tw[verts[k]], phi[g]), H.inverse(tw[verts[k + 1]])) for k, g in enumerate(elts)
        )
        return t, tuple(self.object_maps[c][a] for a in verts), new_elts


def nerve_map(F: GroupoidFunctor, source: SimplicialSet, target: SimplicialSet) -> SimplicialMorphism:
    return morphism_from_labels(source, target, lambda m, chain: F.on_chain(chain), name="N(F)")


def to_point_functor(gpd: FiniteGroupoid) -> GroupoidFunctor:
    pt = group_groupoid(trivial_group())
    return GroupoidFunctor(
        source=gpd,
        target=pt,
        component_map=tuple(0 for _ in gpd.components),
        object_maps=tuple(tuple(0 for _ in range(c.objects)) for c in gpd.components),
        homs=tuple(tuple(0 for _ in range(c.group.order)) for c in gpd.components),
        twists=tuple(tuple(0 for _ in range(c.objects)) for c in gpd.components),
    )


# K(Z/2, 2)
def _triangles(m: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(m + 1), 3))


def _cocycle_levels(m: int) -> list[tuple[int, ...]]:
    """Normalized Z/2 2-cocycles on Delta[m], as values on (i<j<k)."""
    free_edges = [(i, j) for i, j in combinations(range(1, m + 1), 2)]
    tris = _triangles(m)
    out = set()
    for bits in cartesian((0, 1), repeat=len(free_edges)):
        b = dict(zip(free_edges, bits))
        val = tuple((b.get((j, k), 0) + b.get((i, k), 0) + b.get((i, j), 0)) % 2 for i, j, k in tris)
        out.add(val)
    if len(out) != 2 ** comb(m, 2):
        raise AssertionError(f"cocycle parametrization is not injective at level {m}")
    return sorted(out)


def _restrict(m: int, z: tuple[int, ...], theta: Sequence[int]) -> tuple[int, ...]:
    index = {t: k for k, t in enumerate(_triangles(m))}
    out = []
    for i, j, k in _triangles(len(theta) - 1):
        tri = (theta[i], theta[j], theta[k])
        out.append(z[index[tri]] if len(set(tri)) == 3 else 0)
    return tuple(out)


def eilenberg_maclane_z2_2(cap: int) -> SimplicialSet:
    """K(Z/2, 2): level m is the set of normalized 2-cocycles on Delta[m] (2^C(m,2) elements)."""
    levels = [_cocycle_levels(m) for m in range(cap + 1)]

    def face(m: int, z, i: int):
        return _restrict(m, z, [v for v in range(m + 1) if v != i])

    def degeneracy(m: int, z, i: int):
        return _restrict(m, z, [v if v <= i else v - 1 for v in range(m + 2)])

    return from_labels(cap, levels, face, degeneracy, name="K(Z2,2)")
