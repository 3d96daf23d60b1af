from __future__ import annotations

import logging

import numpy as np
from networkx.utils import UnionFind

from icfo.simplicial.constructions import (
    product,
    product_projections,
    pushout,
    quotient,
    skeleton,
    subcomplex,
)
from icfo.simplicial.core import INDEX, CapError, SimplicialMorphism, SimplicialSet, truncate_cap
from icfo.simplicial.hom import hom_enumerate, representable
from icfo.simplicial.shapes import std_simplex

logger = logging.getLogger(__name__)


def collapsed_prism(m: int, n: int) -> tuple[SimplicialSet, SimplicialMorphism, SimplicialMorphism]:
    """
    P = Delta[m] x Delta[1] with sk_{n-1} Delta[m] x Delta[1] collapsed onto
    sk_{n-1} Delta[m], together with its two ends Delta[m] -> P.
    """
    cap = m + 1
    simplex = std_simplex(m, cap)
    interval = std_simplex(1, cap)
    prism = product(simplex, interval)
    pr1, _ = product_projections(simplex, interval, prism)

    collapse = None
    P = prism
    if n > 0:
        sk = skeleton(simplex, n - 1)
        masks = [np.isin(pr1.components[p], sk.components[p]) for p in range(cap + 1)]
        sub = subcomplex(prism, masks)
        onto = SimplicialMorphism(
            sub.source,
            sk.source,
            tuple(np.searchsorted(sk.components[p], pr1.components[p][sub.components[p]]) for p in range(cap + 1)),
        )
        po = pushout(sub, onto)
        P, collapse = po.obj, po.left

    base = std_simplex(m, m)
    ends = []
    for e in (0, 1):
        comps = []
        for p in range(m + 1):
            ids = np.array([prism.index_of(p, (t, (e,) * (p + 1))) for t in base.labels[p]], dtype=INDEX)
            comps.append(ids if collapse is None else collapse.components[p][ids])
        ends.append(SimplicialMorphism(base, truncate_cap(P, m), tuple(comps), name=f"end{e}"))
    return P, ends[0], ends[1]


def truncate(
    X: SimplicialSet,
    n: int,
    D: int,
    *,
    max_cells: int | None = None,
) -> SimplicialMorphism:
    """
    The quotient map X -> tau_{<=n} X. Level m identifies the two ends of
    every map P -> X; the output has cap min(D, cap(X) - 1).
    """
    if n < 0:
        raise ValueError(f"truncation degree must be non-negative, got {n}")
    cap = min(D, X.cap - 1)
    if cap < n + 1:
        raise CapError(f"truncation to degree {n} needs cap >= {n + 2} on the input, have {X.cap}")
    relation: dict[int, list[tuple[int, int]]] = {}
    expected: list[int] = []
    for m in range(cap + 1):
        P, end0, end1 = collapsed_prism(m, n)
        homs = hom_enumerate(P, X, max_cells=max_cells)
        # row x of the representable set is the m-simplex x itself
        simplices = representable(end0.source, X)
        a = simplices.locate(homs.precompose(end0))
        b = simplices.locate(homs.precompose(end1))
        relation[m] = list(zip(a.tolist(), b.tolist()))
        uf = UnionFind(range(X.sizes[m]))
        for u, v in relation[m]:
            uf.union(u, v)
        expected.append(len({uf[x] for x in range(X.sizes[m])}))
        logger.debug("truncation level %d: %d homotopies, %d classes", m, len(relation[m]), expected[-1])

    q = quotient(truncate_cap(X, cap), relation, name=f"tau<={n}({X.name})")
    got = list(q.target.sizes)
    if got != expected:
        raise RuntimeError(f"levelwise homotopy classes {expected} are not closed under the structure maps ({got})")
    return q
