"""
Connected components and simplicial homotopy groups of finite Kan complexes.

pi_n(X, *) is the coequalizer of Hom(cyl S^n, X) => Hom(S^n, X) (through the
two ends i0, i1 of the cylinder) restricted to maps at the basepoint. The
product of [x] and [y] is read off the face d_n of any filler z of the horn
Lambda[n+1, n] with d_{n+1} z = x, d_{n-1} z = y and all other faces at the
basepoint; independence of representatives and fillers is verified.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Sequence

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from icfo.kan.checks import KanConditionError, find_fillers
from icfo.simplicial.core import CapError, SimplicialMorphism, SimplicialSet, act
from icfo.simplicial.hom import generators, hom_enumerate
from icfo.simplicial.nerves import FiniteGroup
from icfo.simplicial.shapes import cyl_sphere

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Components:
    class_of: tuple[int, ...]
    representatives: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.representatives)

    def members(self, c: int) -> list[int]:
        return [v for v, k in enumerate(self.class_of) if k == c]


def pi0(X: SimplicialSet) -> Components:
    """Coequalizer of d_0, d_1: X_1 => X_0, with components numbered by their least vertex."""
    graph = nx.Graph()
    graph.add_nodes_from(range(X.sizes[0]))
    if X.cap >= 1:
        graph.add_edges_from(zip(X.faces[1][1].tolist(), X.faces[1][0].tolist()))
    comps = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    class_of = [0] * X.sizes[0]
    for k, comp in enumerate(comps):
        for v in comp:
            class_of[v] = k
    return Components(tuple(class_of), tuple(c[0] for c in comps))


def pi0_map(f: SimplicialMorphism, source: Components | None = None, target: Components | None = None) -> tuple[int, ...]:
    source = pi0(f.source) if source is None else source
    target = pi0(f.target) if target is None else target
    return tuple(target.class_of[int(f.components[0][v])] for v in source.representatives)


@dataclass(frozen=True)
class HomotopyGroup:
    """Classes of n-simplices with boundary at the basepoint; class 0 is the identity."""

    n: int
    basepoint: int
    classes: tuple[tuple[int, ...], ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.classes)

    @property
    def identity(self) -> int:
        return 0

    def class_of(self, simplex: int) -> int:
        for k, members in enumerate(self.classes):
            if simplex in members:
                return k
        raise KeyError(f"{simplex} is not a spherical {self.n}-simplex at {self.basepoint}")

    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.table, name=f"pi{self.n}")

    def is_trivial(self) -> bool:
        return self.order == 1


def _classes(X: SimplicialSet, n: int, basepoint: int, *, max_cells: int | None) -> tuple[list[int], dict[int, int]]:
    cyl = cyl_sphere(n, n + 1)
    S = cyl.sphere
    homs_s = hom_enumerate(S, X, max_cells=max_cells)
    gens = generators(S)
    vcol = next(c for c, (m, _) in enumerate(gens) if m == 0)
    tcol = next(c for c, (m, _) in enumerate(gens) if m == n)
    at_base = np.flatnonzero(homs_s.images[:, vcol] == basepoint)
    cells = homs_s.images[at_base, tcol]

    homs_c = hom_enumerate(cyl.obj, X, max_cells=max_cells)
    ends0 = homs_s.locate(homs_c.precompose(cyl.i0))
    ends1 = homs_s.locate(homs_c.precompose(cyl.i1))
    uf = UnionFind(range(len(homs_s)))
    for a, b in zip(ends0.tolist(), ends1.tolist()):
        uf.union(a, b)

    root_of = {int(x): uf[int(r)] for r, x in zip(at_base, cells)}
    order: dict = {}
    for x in sorted(root_of):
        order.setdefault(root_of[x], len(order))
    return sorted(root_of), {x: order[root_of[x]] for x in root_of}


def pi_n(
    X: SimplicialSet,
    basepoint: int,
    n: int,
    *,
    verify: bool = True,
    max_cells: int | None = None,
) -> HomotopyGroup:
    if n < 1:
        raise ValueError(f"pi_n needs n >= 1, got {n}")
    if not 0 <= basepoint < X.sizes[0]:
        raise ValueError(f"basepoint {basepoint} is not a vertex of {X!r}")
    if X.cap < n + 1:
        raise CapError(f"pi_{n} needs cap >= {n + 1}, have {X.cap}")

    cells, raw_class = _classes(X, n, basepoint, max_cells=max_cells)
    base_cell = int(act(X, (0,) * (n + 1), 0, basepoint))
    # renumber so the class of the degenerate cell comes first
    shift = raw_class[base_cell]
    k = len(set(raw_class.values()))
    renumber = {c: (0 if c == shift else c + 1 if c < shift else c) for c in range(k)}
    cls = {x: renumber[c] for x, c in raw_class.items()}
    classes = tuple(tuple(sorted(x for x in cells if cls[x] == c)) for c in range(k))

    degenerate = int(act(X, (0,) * n, 0, basepoint))
    table = [[-1] * k for _ in range(k)]
    for a, b in cartesian(range(k), repeat=2):
        pairs = cartesian(classes[a], classes[b]) if verify else [(classes[a][0], classes[b][0])]
        for x, y in pairs:
            faces = {i: degenerate for i in range(n + 2) if i != n}
            faces[n + 1] = x
            faces[n - 1] = y
            fillers = find_fillers(X, n + 1, n, faces)
            if not len(fillers):
                raise KanConditionError(f"no filler for Lambda[{n + 1},{n}] with faces ({x}, {y}) in {X!r}")
            for z in fillers if verify else fillers[:1]:
                prod = cls.get(int(X.faces[n + 1][n][z]))
                if prod is None:
                    raise KanConditionError(f"product face of filler {int(z)} is not spherical")
                if table[a][b] == -1:
                    table[a][b] = prod
                elif table[a][b] != prod:
                    raise ValueError(f"pi_{n} product of classes {a}, {b} depends on representatives or fillers")

    group = HomotopyGroup(n, basepoint, classes, tuple(tuple(row) for row in table))
    if verify:
        problems = group_axiom_violations(group.table)
        if problems:
            raise ValueError(f"pi_{n} of {X!r} fails group axioms: {problems[0]}")
    logger.debug("pi_%d(%r, %d) has order %d", n, X, basepoint, group.order)
    return group


def group_axiom_violations(table: Sequence[Sequence[int]]) -> list[str]:
    k = len(table)
    out = []
    for a in range(k):
        if table[0][a] != a or table[a][0] != a:
            out.append(f"class 0 is not a unit for {a}")
        if 0 not in table[a]:
            out.append(f"class {a} has no inverse")
    for a, b, c in cartesian(range(k), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            out.append(f"associativity fails on ({a}, {b}, {c})")
            break
    return out


def homotopy_groups(X: SimplicialSet, n: int, *, max_cells: int | None = None) -> dict[int, list[HomotopyGroup]]:
    """pi_1..pi_n at the least vertex of every component."""
    comps = pi0(X)
    return {
        k: [pi_n(X, v, k, max_cells=max_cells) for v in comps.representatives] for k in range(1, n + 1)
    }


def induced_map(f: SimplicialMorphism, G: HomotopyGroup, H: HomotopyGroup) -> tuple[int, ...]:
    if int(f.components[0][G.basepoint]) != H.basepoint:
        raise ValueError("map does not send basepoint to basepoint")
    n = G.n
    return tuple(H.class_of(int(f.components[n][members[0]])) for members in G.classes)


def is_isomorphism_of_tables(
    phi: Sequence[int], G: Sequence[Sequence[int]], H: Sequence[Sequence[int]]
) -> bool:
    k = len(G)
    if len(H) != k or len(set(phi)) != k:
        return False
    return all(phi[G[a][b]] == H[phi[a]][phi[b]] for a in range(k) for b in range(k))
