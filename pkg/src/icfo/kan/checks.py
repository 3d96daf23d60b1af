"""
Kan conditions, n-groupoids and hypercovers over finite sets.

Covers are surjections, so every condition reduces to the surjectivity (or
bijectivity) of a map of finite sets onto a set of commuting squares.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import pandas as pd

from icfo.simplicial.core import (
    INDEX,
    CapError,
    SimplicialMorphism,
    SimplicialSet,
    empty,
    terminal_map,
)
from icfo.simplicial.hom import describe_row, generators, lifts, simplex_rows
from icfo.simplicial.shapes import boundary, horn, std_simplex

logger = logging.getLogger(__name__)

Verdict = Literal["cover", "unique", "fail"]


class KanConditionError(ValueError):
    """A horn filler or cover required by a construction is missing."""


@dataclass(frozen=True)
class KanResult:
    m: int
    j: int
    verdict: Verdict
    n_squares: int
    n_simplices: int
    witness: dict | None = None

    @property
    def is_cover(self) -> bool:
        return self.verdict in ("cover", "unique")


@dataclass(frozen=True)
class KanReport:
    results: tuple[KanResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.is_cover for r in self.results)

    @property
    def first_failure(self) -> KanResult | None:
        return next((r for r in self.results if not r.is_cover), None)


def _require_cap(f: SimplicialMorphism, m: int) -> None:
    if f.cap < m:
        raise CapError(f"condition at level {m} needs both caps >= {m}, map has cap {f.cap}")


@dataclass(frozen=True)
class RelativeCover:
    """
    The map X_m -> Hom(K, X) x_{Hom(K, Y)} Y_m, x |-> (x|K, f x), for K a
    simplicial subset of Delta[m]: the number of squares, how many are hit,
    and one unhit square when there is one.
    """

    m: int
    n_squares: int
    n_hit: int
    n_simplices: int
    unhit: dict | None = None

    @property
    def surjective(self) -> bool:
        return self.n_hit == self.n_squares

    @property
    def bijective(self) -> bool:
        return self.surjective and self.n_simplices == self.n_hit


def relative_cover(
    f: SimplicialMorphism,
    K: SimplicialSet,
    m: int,
    *,
    max_cells: int | None = None,
) -> RelativeCover:
    """
    Counted fiber by fiber: Y_m is grouped by restriction t to K and the maps
    K -> X over each t are enumerated as lifts along f. The hit squares are
    the distinct pairs (x|K, f x).
    """
    _require_cap(f, m)
    X, Y = f.source, f.target
    gens = generators(K)
    cols = [f"g{c}" for c in range(len(gens))]
    simplex = std_simplex(m, m)
    xs = np.arange(X.sizes[m], dtype=INDEX)
    ys = np.arange(Y.sizes[m], dtype=INDEX)

    pairs = pd.DataFrame(simplex_rows(K, X, m, xs), columns=cols)
    pairs["y"] = f.components[m]
    pairs = pairs.drop_duplicates()

    def unhit(a: np.ndarray, y: int) -> dict:
        row = simplex_rows(simplex, Y, m, np.array([y], dtype=INDEX))[0]
        return {"source_part": describe_row(K, X, a), "target_part": describe_row(simplex, Y, row)}

    if not gens:
        # nothing to restrict to: the squares are Y_m
        missing = np.setdiff1d(ys, pairs["y"].to_numpy(dtype=INDEX))
        witness = unhit(np.zeros(0, dtype=INDEX), int(missing[0])) if len(missing) else None
        return RelativeCover(m, len(ys), len(pairs), len(xs), witness)

    upper = pd.DataFrame(simplex_rows(K, Y, m, ys), columns=cols)
    upper["y"] = ys
    fibers = upper.groupby(cols, sort=True)["y"].apply(np.asarray)
    targets = np.array(list(fibers.index), dtype=INDEX).reshape(len(fibers), len(gens))
    counts = np.array([len(v) for v in fibers], dtype=INDEX)
    hits_per_a = pairs.groupby(cols, sort=False).size().rename("_h").reset_index()

    n_squares = 0
    witness = None
    for origin, a in lifts(K, f, targets, max_cells=max_cells):
        n_squares += int(counts[origin].sum())
        if witness is not None:
            continue
        got = pd.DataFrame(a, columns=cols).merge(hits_per_a, on=cols, how="left")["_h"]
        short = np.flatnonzero(got.fillna(0).to_numpy(dtype=INDEX) < counts[origin])
        if len(short):
            k = int(short[0])
            seen = pairs.loc[(pairs[cols] == a[k]).all(axis=1), "y"].to_numpy(dtype=INDEX)
            witness = unhit(a[k], int(np.setdiff1d(fibers.iloc[int(origin[k])], seen)[0]))
    return RelativeCover(m, n_squares, len(pairs), len(xs), witness)


def relative_horn(f: SimplicialMorphism, m: int, j: int, *, max_cells: int | None = None) -> RelativeCover:
    """X_m -> Hom(Lambda[m,j], X) x_{Hom(Lambda[m,j], Y)} Y_m."""
    _require_cap(f, m)
    return relative_cover(f, horn(m, j, m), m, max_cells=max_cells)


def check_kan(f: SimplicialMorphism, m: int, j: int, *, max_cells: int | None = None) -> KanResult:
    if m < 1 or not 0 <= j <= m:
        raise ValueError(f"Kan condition needs m >= 1 and 0 <= j <= m, got ({m}, {j})")
    cover = relative_horn(f, m, j, max_cells=max_cells)
    if not cover.surjective:
        witness = {"m": m, "j": j, "unfilled_horn": cover.unhit}
        verdict: Verdict = "fail"
    else:
        witness = None
        verdict = "unique" if cover.bijective else "cover"
    logger.debug("Kan(%d,%d) for %r: %s", m, j, f, verdict)
    return KanResult(m, j, verdict, cover.n_squares, cover.n_simplices, witness)


def check_kan_all(f: SimplicialMorphism, D: int, *, max_cells: int | None = None) -> KanReport:
    results = [check_kan(f, m, j, max_cells=max_cells) for m in range(1, D + 1) for j in range(m + 1)]
    return KanReport(tuple(results))


def is_kan_fibration(f: SimplicialMorphism, D: int, *, max_cells: int | None = None) -> bool:
    return check_kan_all(f, D, max_cells=max_cells).ok


@dataclass(frozen=True)
class NGroupoidReport:
    ok: bool
    n: int
    D: int
    results: tuple[KanResult, ...]
    failure: KanResult | None = None


def is_n_groupoid(X: SimplicialSet, n: int, D: int, *, max_cells: int | None = None) -> NGroupoidReport:
    """Kan(m, j) for 1 <= m <= n and Kan!(m, j) for n < m <= D."""
    if D > X.cap:
        raise CapError(f"n-groupoid check up to {D} needs cap >= {D}, have {X.cap}")
    f = terminal_map(X)
    results = []
    failure = None
    for m in range(1, D + 1):
        for j in range(m + 1):
            r = check_kan(f, m, j, max_cells=max_cells)
            results.append(r)
            good = r.is_cover if m <= n else r.verdict == "unique"
            if not good and failure is None:
                failure = r
    return NGroupoidReport(failure is None, n, D, tuple(results), failure)


def is_infinity_groupoid(X: SimplicialSet, D: int, *, max_cells: int | None = None) -> bool:
    return is_kan_fibration(terminal_map(X), D, max_cells=max_cells)


def detect_groupoid_level(X: SimplicialSet, D: int, *, max_cells: int | None = None) -> int | None:
    """Smallest n < D with X an n-groupoid up to D, or None."""
    for n in range(0, D):
        if is_n_groupoid(X, n, D, max_cells=max_cells).ok:
            return n
    return None


@dataclass(frozen=True)
class LevelResult:
    m: int
    surjective: bool
    n_squares: int
    n_hit: int
    witness: dict | None = None


@dataclass(frozen=True)
class HypercoverReport:
    D: int
    levels: tuple[LevelResult, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(lv.surjective for lv in self.levels)

    @property
    def first_failure(self) -> LevelResult | None:
        return next((lv for lv in self.levels if not lv.surjective), None)


def boundary_shape(m: int) -> SimplicialSet:
    """dDelta[m], with the empty object for m = 0."""
    return empty(0) if m == 0 else boundary(m, m)


def acyclic_cover(f: SimplicialMorphism, m: int, *, max_cells: int | None = None) -> RelativeCover:
    """q_m: X_m -> Hom(dDelta[m], X) x_{Hom(dDelta[m], Y)} Y_m (Y_0 for m = 0)."""
    return relative_cover(f, boundary_shape(m), m, max_cells=max_cells)


def check_hypercover(f: SimplicialMorphism, D: int, *, max_cells: int | None = None) -> HypercoverReport:
    levels = []
    for m in range(D + 1):
        cover = acyclic_cover(f, m, max_cells=max_cells)
        witness = None if cover.surjective else {"m": m, "unhit_boundary": cover.unhit}
        levels.append(LevelResult(m, cover.surjective, cover.n_squares, cover.n_hit, witness))
        logger.debug("Acyc(%d) for %r: %d/%d", m, f, cover.n_hit, cover.n_squares)
    return HypercoverReport(D, tuple(levels))


def find_fillers(X: SimplicialSet, m: int, j: int, faces: dict[int, int]) -> np.ndarray:
    """All z in X_m with d_i z = faces[i] for every i != j."""
    if set(faces) != {i for i in range(m + 1) if i != j}:
        raise ValueError(f"horn ({m}, {j}) needs faces for {sorted(set(range(m + 1)) - {j})}")
    mask = np.ones(X.sizes[m], dtype=bool)
    for i, y in faces.items():
        mask &= X.faces[m][i] == y
    return np.flatnonzero(mask).astype(INDEX)


def find_filler(X: SimplicialSet, m: int, j: int, faces: dict[int, int]) -> int | None:
    found = find_fillers(X, m, j, faces)
    return int(found[0]) if len(found) else None


def has_horn_fillers(X: SimplicialSet, m: int, j: int, *, max_cells: int | None = None) -> bool:
    """Plain Kan-complex test: every Lambda[m, j] -> X extends over Delta[m]."""
    return relative_horn(terminal_map(X), m, j, max_cells=max_cells).surjective
