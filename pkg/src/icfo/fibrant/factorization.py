"""
Factorization f = p o i through M = Y^{Delta[1]} x_{d0, Y, f} X, with i the
section x |-> (s0 f x, x) and p = d1 o pr. The construction is functorial in
commuting squares of maps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from icfo.fibrant.path_object import PathObject, path_map, path_object
from icfo.kan.pullback import pullback_along_fibration
from icfo.simplicial.constructions import restrict_cap
from icfo.simplicial.core import CapError, SimplicialMorphism, SimplicialSet
from icfo.simplicial.hom import match_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Factorization:
    # f keeps its own cap; M, i and p stop at the factorization level
    f: SimplicialMorphism
    path: PathObject
    M: SimplicialSet
    i: SimplicialMorphism
    p: SimplicialMorphism
    to_path: SimplicialMorphism
    to_source: SimplicialMorphism

    @property
    def cap(self) -> int:
        return self.M.cap

    def pairs(self, m: int) -> np.ndarray:
        """Level m of M as rows (path index, source index)."""
        return np.stack([self.to_path.components[m], self.to_source.components[m]], axis=1)


def factorize(
    f: SimplicialMorphism,
    D: int,
    *,
    path: PathObject | None = None,
    check: bool = False,
    max_cells: int | None = None,
) -> Factorization:
    X, Y = f.source, f.target
    if X.cap < D or f.cap < D:
        raise CapError(f"factorization up to level {D} needs a map with cap >= {D}, have {f.cap}")
    PY = path_object(Y, D, max_cells=max_cells) if path is None else path
    if PY.cap != D:
        raise CapError(f"path object has cap {PY.cap}, factorization asked for {D}")

    fD = restrict_cap(f, D)
    fp = pullback_along_fibration(PY.d0, fD, D, check=check, max_cells=max_cells)
    M = fp.obj
    table = [np.stack([fp.left.components[m], fp.right.components[m]], axis=1) for m in range(D + 1)]

    comps = []
    for m in range(D + 1):
        xs = np.arange(X.sizes[m])
        rows = np.stack([PY.s0.components[m][fD.components[m]], xs], axis=1)
        comps.append(match_rows(rows, table[m]))
    i = SimplicialMorphism(fD.source, M, tuple(comps), name="i")
    p = replace(PY.d1.compose(fp.left), name="p")
    logger.debug("factorized %r through M with sizes %s", f, list(M.sizes))
    return Factorization(f=f, path=PY, M=M, i=i, p=p, to_path=fp.left, to_source=fp.right)


def factorization_map(
    F: Factorization,
    G: Factorization,
    u: SimplicialMorphism,
    v: SimplicialMorphism,
) -> SimplicialMorphism:
    """
    M_F -> M_G induced by a square v o F.f = G.f o u, sending (gamma, x) to
    (v gamma, u x). v acts on paths, so it needs one level more than M.
    """
    cap = min(F.cap, G.cap)
    for m in range(cap + 1):
        if not np.array_equal(v.components[m][F.f.components[m]], G.f.components[m][u.components[m]]):
            raise ValueError(f"square does not commute at level {m}")
    Pv = path_map(v, F.path, G.path)
    comps = []
    for m in range(cap + 1):
        rows = np.stack(
            [Pv.components[m][F.to_path.components[m]], u.components[m][F.to_source.components[m]]], axis=1
        )
        comps.append(match_rows(rows, G.pairs(m)))
    if any((c < 0).any() for c in comps):
        raise ValueError("induced map leaves the target factorization")
    return SimplicialMorphism(F.M, G.M, tuple(comps), name="M(u,v)")
