"""
Path objects X^{Delta[1]} as the codiagonal of the decalage.

An n-simplex is a tuple (p_0, ..., p_n) of (n+1)-simplices of X glued by
d_{i+1} p_i = d_{i+1} p_{i+1}; p_l is the image of the prism cell x_l of
Delta[n] x Delta[1]. Structure maps:

    d_i (p) = (d_{i+1} p_0, ..., d_{i+1} p_{i-1}, d_i p_{i+1}, ..., d_i p_n)
    s_i (p) = (s_{i+1} p_0, ..., s_{i+1} p_i, s_i p_i, ..., s_i p_n)

with evaluation d0 = d_0 p_0 (the end at vertex 1), d1 = d_{n+1} p_n (the end
at vertex 0) and constant paths s0(x) = (s_0 x, ..., s_n x).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from icfo.extension.prism import prism, prism_triangulation
from icfo.kan.checks import KanConditionError, check_kan_all
from icfo.simplicial.core import INDEX, CapError, SimplicialMorphism, SimplicialSet, terminal_map, truncate_cap
from icfo.simplicial.hom import extensions, generators, match_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PathObject:
    base: SimplicialSet
    obj: SimplicialSet
    tuples: tuple[np.ndarray, ...]
    s0: SimplicialMorphism
    d0: SimplicialMorphism
    d1: SimplicialMorphism

    @property
    def cap(self) -> int:
        return self.obj.cap


def _level(X: SimplicialSet, n: int) -> np.ndarray:
    cols = [f"p{k}" for k in range(n + 1)]
    frame = pd.DataFrame({"p0": np.arange(X.sizes[n + 1], dtype=INDEX)})
    for i in range(n):
        frame["key"] = X.faces[n + 1][i + 1][frame[f"p{i}"].to_numpy()]
        nxt = pd.DataFrame({f"p{i + 1}": np.arange(X.sizes[n + 1], dtype=INDEX), "key": X.faces[n + 1][i + 1]})
        frame = frame.merge(nxt, on="key", how="inner").drop(columns="key")
    frame = frame.sort_values(cols, kind="mergesort")
    return frame[cols].to_numpy(dtype=INDEX).reshape(-1, n + 1)


def path_object(X: SimplicialSet, D: int, *, check: bool = False, max_cells: int | None = None) -> PathObject:
    if X.cap < D + 1:
        raise CapError(f"path object up to level {D} needs cap >= {D + 1}, have {X.cap}")
    if check:
        report = check_kan_all(terminal_map(X), D + 1, max_cells=max_cells)
        if not report.ok:
            bad = report.first_failure
            raise KanConditionError(f"{X!r} is not an infinity-groupoid: Kan({bad.m},{bad.j}) fails")

    tuples = [_level(X, n) for n in range(D + 1)]
    F, S = X.faces, X.degeneracies

    faces = [np.zeros((0, len(tuples[0])), dtype=INDEX)]
    for n in range(1, D + 1):
        P = tuples[n]
        arr = np.empty((n + 1, len(P)), dtype=INDEX)
        for i in range(n + 1):
            cols = [F[n + 1][i + 1][P[:, k]] for k in range(i)] + [F[n + 1][i][P[:, k]] for k in range(i + 1, n + 1)]
            arr[i] = match_rows(np.stack(cols, axis=1), tuples[n - 1])
        faces.append(arr)
    degens = []
    for n in range(D):
        P = tuples[n]
        arr = np.empty((n + 1, len(P)), dtype=INDEX)
        for i in range(n + 1):
            cols = (
                [S[n + 1][i + 1][P[:, k]] for k in range(i + 1)]
                + [S[n + 1][i][P[:, i]]]
                + [S[n + 1][i][P[:, k]] for k in range(i + 1, n + 1)]
            )
            arr[i] = match_rows(np.stack(cols, axis=1), tuples[n + 1])
        degens.append(arr)
    if any((a < 0).any() for a in faces[1:] + degens):
        raise KanConditionError(f"structure maps of the path object of {X!r} leave the glued tuples")

    obj = SimplicialSet(
        cap=D,
        sizes=tuple(len(t) for t in tuples),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        name=f"{X.name}^Delta[1]",
    )
    Xd = truncate_cap(X, D)
    d0 = SimplicialMorphism(obj, Xd, tuple(F[n + 1][0][tuples[n][:, 0]] for n in range(D + 1)), name="d0")
    d1 = SimplicialMorphism(obj, Xd, tuple(F[n + 1][n + 1][tuples[n][:, n]] for n in range(D + 1)), name="d1")
    consts = []
    for n in range(D + 1):
        xs = np.arange(X.sizes[n], dtype=INDEX)
        rows = np.stack([S[n][k][xs] for k in range(n + 1)], axis=1)
        consts.append(match_rows(rows, tuples[n]))
    s0 = SimplicialMorphism(Xd, obj, tuple(consts), name="s0")
    logger.debug("path object of %r: sizes %s", X, list(obj.sizes))
    return PathObject(base=X, obj=obj, tuples=tuple(tuples), s0=s0, d0=d0, d1=d1)


def path_map(v: SimplicialMorphism, PX: PathObject, PY: PathObject) -> SimplicialMorphism:
    """Y^{Delta[1]} applied to v: X -> Y, acting on every entry of a tuple."""
    cap = min(PX.cap, PY.cap)
    if v.cap < cap + 1:
        raise CapError(f"path map up to level {cap} needs a map with cap >= {cap + 1}")
    comps = tuple(match_rows(v.components[n + 1][PX.tuples[n]], PY.tuples[n]) for n in range(cap + 1))
    return SimplicialMorphism(PX.obj, PY.obj, comps, name="P(v)")


@dataclass(frozen=True, eq=False)
class PathComparison:
    """Levelwise comparison of Hom(Delta[n] x Delta[1], X) with the path object."""

    agrees: bool
    levels: tuple[tuple[int, int], ...]
    first_mismatch: int | None


def path_object_oracle(
    X: SimplicialSet,
    D: int,
    *,
    path: PathObject | None = None,
    max_cells: int | None = None,
) -> PathComparison:
    """
    Level n computed as Hom(Delta[n] x Delta[1], X), streamed block by block;
    each map is compared with the path object through its values on the
    prism cells.
    """
    path = path_object(X, D, max_cells=max_cells) if path is None else path
    levels = []
    first_bad = None
    for n in range(D + 1):
        P = prism(n)
        gens = generators(P)
        column = {g: c for c, g in enumerate(gens)}
        cells = [column[(n + 1, x)] for x in prism_triangulation(n, P)]
        table = path.tuples[n]
        seen = np.zeros(len(table), dtype=bool)
        n_maps = 0
        ok = True
        for _, rows in extensions(P, X, np.full((1, len(gens)), -1, dtype=INDEX), max_cells=max_cells):
            n_maps += len(rows)
            where = match_rows(rows[:, cells], table)
            found = where[where >= 0]
            if len(found) < len(where) or seen[found].any() or len(np.unique(found)) < len(found):
                ok = False
            seen[found] = True
        ok = ok and n_maps == len(table) and bool(seen.all())
        levels.append((n_maps, len(table)))
        if not ok and first_bad is None:
            first_bad = n
        logger.debug("path oracle level %d: %d maps vs %d tuples", n, *levels[-1])
    return PathComparison(agrees=first_bad is None, levels=tuple(levels), first_mismatch=first_bad)
