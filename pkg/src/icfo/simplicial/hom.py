"""
Exhaustive enumeration of simplicial maps K -> X.

A map out of K is fixed by the images of the non-degenerate simplices of K
(its generators) and is valid iff every generator image has the faces that
the images of its faces prescribe. HomSet stores one row per map and one
column per generator, generators ordered by (dimension, id).

Partial maps grow one generator at a time, each step a pandas merge of the
rows against the simplices of X keyed by their faces (and by their image
under f when maps are lifted along f: X -> Y). A block of rows whose next
step would exceed the cell budget is split in half and finished depth first,
so the budget bounds memory, not the size of the answer. Only a single
partial map that cannot grow within budget raises EnumerationLimit.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np
import pandas as pd

from icfo.config.settings import get_settings
from icfo.simplicial.core import (
    INDEX,
    CapError,
    SimplicialMorphism,
    SimplicialSet,
    act,
)

logger = logging.getLogger(__name__)

Generator = tuple[int, int]
Lift = tuple[SimplicialMorphism, np.ndarray]


class EnumerationLimit(RuntimeError):
    """A Hom enumeration would exceed the configured cell budget."""

    def __init__(self, what: str, cells: int, limit: int):
        self.cells = cells
        self.limit = limit
        super().__init__(f"enumerating {what} needs {cells} cells, above ICFO_MAX_CELLS={limit}")


def generators(K: SimplicialSet) -> tuple[Generator, ...]:
    return tuple((m, int(x)) for m in range(K.cap + 1) for x in K.nondegenerate(m))


def _limit(max_cells: int | None) -> int:
    return get_settings().max_cells if max_cells is None else max_cells


@dataclass(frozen=True, eq=False)
class HomSet:
    source: SimplicialSet
    target: SimplicialSet
    generators: tuple[Generator, ...]
    images: np.ndarray

    def __len__(self) -> int:
        return int(self.images.shape[0])

    def __repr__(self) -> str:
        return f"<HomSet {self.source!r} -> {self.target!r}: {len(self)} maps>"

    @cached_property
    def column(self) -> dict[Generator, int]:
        return {g: c for c, g in enumerate(self.generators)}

    def evaluate(self, m: int, y: int, rows: np.ndarray | None = None) -> np.ndarray:
        """Image of the simplex y in K_m under every map (or the selected rows)."""
        k, root, surj = self.source.normal_form(m, y)
        col = self.images[:, self.column[(k, root)]]
        if rows is not None:
            col = col[rows]
        if k == m:
            return col
        return act(self.target, surj, k, col)

    def precompose(self, g: SimplicialMorphism) -> np.ndarray:
        """Rows of Hom(A, X) obtained as h o g for g: A -> K, over A's generators."""
        gens = generators(g.source)
        if not gens:
            return np.zeros((len(self), 0), dtype=INDEX)
        cols = [self.evaluate(m, int(g.components[m][a])) for m, a in gens]
        return np.stack(cols, axis=1).astype(INDEX)

    def postcompose(self, f: SimplicialMorphism) -> np.ndarray:
        """Rows of Hom(K, Y) obtained as f o h, over the same generators."""
        return _postcompose(self.generators, self.images, f)

    def locate(self, rows: np.ndarray) -> np.ndarray:
        """Index of each row in this set, -1 when absent."""
        return match_rows(rows, self.images)

    def morphism(self, k: int) -> SimplicialMorphism:
        K, X = self.source, self.target
        cap = min(K.cap, X.cap)
        sel = np.array([k], dtype=INDEX)
        comps = []
        for m in range(cap + 1):
            comps.append(
                np.fromiter((self.evaluate(m, y, sel)[0] for y in range(K.sizes[m])), dtype=INDEX, count=K.sizes[m])
            )
        return SimplicialMorphism(K, X, tuple(comps))

    def describe(self, k: int) -> list[dict]:
        """Generator -> image listing of one map, with labels when available."""
        return describe_row(self.source, self.target, self.images[k], self.generators)


def _plain(label):
    if isinstance(label, tuple):
        return [_plain(v) for v in label]
    if isinstance(label, np.integer):
        return int(label)
    return label


def describe_row(
    K: SimplicialSet,
    X: SimplicialSet,
    row: Sequence[int],
    gens: Sequence[Generator] | None = None,
) -> list[dict]:
    gens = generators(K) if gens is None else gens
    return [
        {"dim": m, "source": _plain(K.label(m, x)), "image": _plain(X.label(m, int(y)))}
        for (m, x), y in zip(gens, row)
    ]


def _postcompose(gens: Sequence[Generator], rows: np.ndarray, f: SimplicialMorphism) -> np.ndarray:
    if not gens:
        return rows.copy()
    cols = [f.components[m][rows[:, c]] for c, (m, _) in enumerate(gens)]
    return np.stack(cols, axis=1).astype(INDEX)


def match_rows(rows: np.ndarray, table: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=INDEX)
    if rows.ndim != 2 or table.ndim != 2 or rows.shape[1] != table.shape[1]:
        raise ValueError(f"row shapes {rows.shape} and {table.shape} do not match")
    if rows.shape[1] == 0:
        return np.full(rows.shape[0], 0 if table.shape[0] else -1, dtype=INDEX)
    cols = [f"g{c}" for c in range(rows.shape[1])]
    left = pd.DataFrame(rows, columns=cols)
    left["_pos"] = np.arange(rows.shape[0], dtype=INDEX)
    right = pd.DataFrame(table, columns=cols)
    right["_idx"] = np.arange(table.shape[0], dtype=INDEX)
    joined = left.merge(right, on=cols, how="left").sort_values("_pos", kind="mergesort")
    return joined["_idx"].fillna(-1).to_numpy(dtype=INDEX)


@dataclass(frozen=True, eq=False)
class _Candidates:
    """X_m keyed by faces (and f-image); counts holds the number of simplices per key."""

    keys: tuple[str, ...]
    table: pd.DataFrame
    counts: pd.DataFrame | None


@lru_cache(maxsize=64)
def _candidates(X: SimplicialSet, m: int, f: SimplicialMorphism | None) -> _Candidates:
    frame = pd.DataFrame({"z": np.arange(X.sizes[m], dtype=INDEX)})
    keys = [f"d{i}" for i in range(m + 1)] if m > 0 else []
    for i, key in enumerate(keys):
        frame[key] = X.faces[m][i].astype(INDEX)
    if f is not None:
        frame["f"] = f.components[m].astype(INDEX)
        keys.append("f")
    counts = frame.groupby(keys, sort=False).size().rename("_n").reset_index() if keys else None
    return _Candidates(tuple(keys), frame, counts)


def _grow(query: np.ndarray, cands: _Candidates, width: int, limit: int):
    """
    (cells, pos, z): every candidate z for the partial row at pos, or pos =
    None when the grown block would hold more than limit cells.
    """
    n_rows = len(query)
    if not cands.keys:
        per_row = len(cands.table)
        cells = n_rows * per_row * width
        if cells > limit:
            return cells, None, None
        pos = np.repeat(np.arange(n_rows, dtype=INDEX), per_row)
        return cells, pos, np.tile(cands.table["z"].to_numpy(dtype=INDEX), n_rows)

    keys = list(cands.keys)
    left = pd.DataFrame(query, columns=keys)
    sizes = left.merge(cands.counts, on=keys, how="left")["_n"]
    cells = int(sizes.fillna(0).sum()) * width
    if cells > limit:
        return cells, None, None
    left["_pos"] = np.arange(n_rows, dtype=INDEX)
    joined = left.merge(cands.table, on=keys, how="inner").sort_values(["_pos", "z"], kind="mergesort")
    return cells, joined["_pos"].to_numpy(dtype=INDEX), joined["z"].to_numpy(dtype=INDEX)


def _face_deps(K: SimplicialSet, gens: Sequence[Generator], column: dict[Generator, int]) -> list[set[int]]:
    deps = []
    for m, x in gens:
        needed = set()
        for i in range(m + 1 if m > 0 else 0):
            k, root, _ = K.normal_form(m - 1, int(K.faces[m][i][x]))
            needed.add(column[(k, root)])
        deps.append(needed)
    return deps


def _processing_order(K: SimplicialSet, gens: Sequence[Generator], placed: Sequence[int] = ()) -> list[int]:
    """
    Free generators after their faces. Whenever some generator has all its
    faces placed, the highest-dimensional such one goes next; a new vertex is
    taken only when none is ready.
    """
    column = {g: c for c, g in enumerate(gens)}
    deps = _face_deps(K, gens, column)
    done = set(placed)
    free = [c for c in range(len(gens)) if c not in done]
    order: list[int] = []

    def settle() -> None:
        while True:
            ready = [c for c in free if c not in done and gens[c][0] > 0 and deps[c] <= done]
            if not ready:
                return
            c = max(ready, key=lambda c: (gens[c][0], -c))
            order.append(c)
            done.add(c)

    settle()
    for v in free:
        if gens[v][0] == 0 and v not in done:
            order.append(v)
            done.add(v)
            settle()
    leftover = [c for c in free if c not in done]
    if leftover:
        raise ValueError(f"generators {[gens[c] for c in leftover]} have faces outside the complex")
    return order


def _search(
    K: SimplicialSet,
    X: SimplicialSet,
    start: np.ndarray,
    over: Lift | None,
    limit: int,
    done: np.ndarray | None = None,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    gens = generators(K)
    G = len(gens)
    start = np.asarray(start, dtype=INDEX)
    if start.ndim != 2 or start.shape[1] != G:
        raise ValueError(f"partial maps out of {K!r} need {G} columns, got shape {start.shape}")
    if not len(start):
        return
    filled = start >= 0
    if (filled.any(axis=0) & ~filled.all(axis=0)).any():
        raise ValueError("partial maps must fix the same generators")
    order = _processing_order(K, gens, np.flatnonzero(filled[0]).tolist())
    top = max((gens[c][0] for c in order), default=-1)
    if top > X.cap:
        raise CapError(f"Hom({K!r}, {X!r}) needs target cap >= {top}, have {X.cap}")

    f, targets = over if over is not None else (None, None)
    if targets is not None:
        targets = np.asarray(targets, dtype=INDEX)
        if targets.shape != start.shape:
            raise ValueError(f"lift targets have shape {targets.shape}, expected {start.shape}")
    column = {g: c for c, g in enumerate(gens)}
    what = f"Hom({K.name or K!r}, {X.name or X!r})"

    stack = [(0, np.arange(len(start), dtype=INDEX), start)]
    while stack:
        step, origin, block = stack.pop()
        if done is not None:
            keep = ~done[origin]
            if not keep.all():
                origin, block = origin[keep], block[keep]
                if not len(block):
                    continue
        if step == len(order):
            yield origin, block
            continue

        c = order[step]
        m, x = gens[c]
        cols = []
        for i in range(m + 1 if m > 0 else 0):
            k, root, surj = K.normal_form(m - 1, int(K.faces[m][i][x]))
            col = block[:, column[(k, root)]]
            cols.append(col if k == m - 1 else act(X, surj, k, col))
        if targets is not None:
            cols.append(targets[origin, c])
        query = np.stack(cols, axis=1) if cols else np.zeros((len(block), 0), dtype=INDEX)

        cells, pos, z = _grow(query, _candidates(X, m, f), G, limit)
        if pos is None:
            if len(block) == 1:
                raise EnumerationLimit(what, cells, limit)
            half = len(block) // 2
            stack.append((step, origin[half:], block[half:]))
            stack.append((step, origin[:half], block[:half]))
            continue
        if not len(pos):
            continue
        grown = block[pos]
        grown[:, c] = z
        stack.append((step + 1, origin[pos], grown))


def extensions(
    K: SimplicialSet,
    X: SimplicialSet,
    start: np.ndarray,
    *,
    over: Lift | None = None,
    max_cells: int | None = None,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """
    Maps K -> X extending the partial rows of start (-1 marks a free
    generator), in blocks (origin, rows) with origin the index of the partial
    row each map extends. The fixed generators must span a subcomplex of K.
    With over = (f, targets) only maps h with f o h = targets[origin] are
    produced, targets being full rows of Hom(K, Y).
    """
    yield from _search(K, X, start, over, _limit(max_cells))


def extendable(
    K: SimplicialSet,
    X: SimplicialSet,
    start: np.ndarray,
    *,
    over: Lift | None = None,
    max_cells: int | None = None,
) -> np.ndarray:
    """Whether each partial row of start extends to a map K -> X."""
    found = np.zeros(len(start), dtype=bool)
    for origin, _ in _search(K, X, start, over, _limit(max_cells), done=found):
        found[origin] = True
    return found


def lifts(
    K: SimplicialSet,
    f: SimplicialMorphism,
    targets: np.ndarray,
    *,
    max_cells: int | None = None,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Maps h: K -> X with f o h equal to one of the rows of targets (maps K -> Y)."""
    start = np.full(np.shape(targets), -1, dtype=INDEX)
    yield from extensions(K, f.source, start, over=(f, targets), max_cells=max_cells)


def hom_enumerate(
    K: SimplicialSet,
    X: SimplicialSet,
    *,
    max_cells: int | None = None,
) -> HomSet:
    limit = _limit(max_cells)
    gens = generators(K)
    G = len(gens)
    what = f"Hom({K.name or K!r}, {X.name or X!r})"
    blocks = []
    total = 0
    for _, block in _search(K, X, np.full((1, G), -1, dtype=INDEX), None, limit):
        total += len(block)
        if total * G > limit:
            raise EnumerationLimit(what, total * G, limit)
        blocks.append(block)
    rows = np.concatenate(blocks) if blocks else np.zeros((0, G), dtype=INDEX)
    if G and len(rows):
        rows = rows[np.lexsort(rows.T[::-1])]
    logger.debug("%s: %d maps over %d generators", what, len(rows), G)
    return HomSet(source=K, target=X, generators=gens, images=rows)


def simplex_rows(K: SimplicialSet, X: SimplicialSet, m: int, xs: np.ndarray) -> np.ndarray:
    """
    Restrictions of the m-simplices xs of X to K, a simplicial subset of
    Delta[m] labelled by vertex tuples, as rows of Hom(K, X).
    """
    cols = [act(X, K.label(d, y), m, xs) for d, y in generators(K)]
    return np.stack(cols, axis=1).astype(INDEX) if cols else np.zeros((len(xs), 0), dtype=INDEX)


def representable(K: SimplicialSet, X: SimplicialSet) -> HomSet:
    """Hom(Delta[m], X) read off X_m directly; row x is the simplex x."""
    if K.simplex is None or K.labels is None:
        raise ValueError(f"representable needs a standard simplex, got {K!r}")
    m = K.simplex
    if m > X.cap:
        raise CapError(f"Hom({K!r}, {X!r}) needs target cap >= {m}, have {X.cap}")
    images = simplex_rows(K, X, m, np.arange(X.sizes[m], dtype=INDEX))
    return HomSet(source=K, target=X, generators=generators(K), images=images)


def hom_of(K: SimplicialSet, X: SimplicialSet, *, max_cells: int | None = None) -> HomSet:
    if K.simplex is not None and K.labels is not None:
        return representable(K, X)
    return hom_enumerate(K, X, max_cells=max_cells)


def image_columns(j: SimplicialMorphism) -> np.ndarray:
    """Generator column of B holding the image of each generator of A, for an inclusion j: A -> B."""
    A, B = j.source, j.target
    column = {g: c for c, g in enumerate(generators(B))}
    out = []
    for m, a in generators(A):
        k, root, _ = B.normal_form(m, int(j.components[m][a]))
        if k != m:
            raise ValueError(f"{j!r} sends the generator {(m, a)} to a degenerate simplex")
        out.append(column[(k, root)])
    if len(set(out)) != len(out):
        raise ValueError(f"{j!r} is not injective on generators")
    return np.array(out, dtype=INDEX)


@dataclass(frozen=True, eq=False)
class SquareBlock:
    """
    Commuting squares (a, b) for j: A -> B and f: X -> Y, i.e. a: A -> X and
    b: B -> Y with f o a = b o j, as generator rows.
    """

    arrow: SimplicialMorphism
    fibration: SimplicialMorphism
    a: np.ndarray
    b: np.ndarray

    def __len__(self) -> int:
        return int(self.a.shape[0])

    def describe(self, k: int) -> dict:
        j, f = self.arrow, self.fibration
        return {
            "source_part": describe_row(j.source, f.source, self.a[k]),
            "target_part": describe_row(j.target, f.target, self.b[k]),
        }


def relative_squares(
    j: SimplicialMorphism,
    f: SimplicialMorphism,
    *,
    max_cells: int | None = None,
) -> Iterator[SquareBlock]:
    """
    Hom(A -> B, X -> Y) for an inclusion j, block by block: each a: A -> X,
    then each b: B -> Y extending f o a along j.
    """
    A, B = j.source, j.target
    gens_a = generators(A)
    slots = image_columns(j)
    width = len(generators(B))
    for _, a in extensions(A, f.source, np.full((1, len(gens_a)), -1, dtype=INDEX), max_cells=max_cells):
        start = np.full((len(a), width), -1, dtype=INDEX)
        start[:, slots] = _postcompose(gens_a, a, f)
        for origin, b in extensions(B, f.target, start, max_cells=max_cells):
            yield SquareBlock(j, f, a[origin], b)


def squares_extend(
    j: SimplicialMorphism,
    alpha: SimplicialMorphism,
    beta: SimplicialMorphism,
    squares: SquareBlock,
    *,
    max_cells: int | None = None,
) -> np.ndarray:
    """
    For squares (a', b') over j': A' -> B', whether some square (a, b) over
    j: A -> B restricts to (a', b') along the inclusions alpha: A' -> A and
    beta: B' -> B (with j o alpha = beta o j').
    """
    f = squares.fibration
    A, B = j.source, j.target
    gens_a = generators(A)
    width = len(generators(B))
    start = np.full((len(squares), len(gens_a)), -1, dtype=INDEX)
    start[:, image_columns(alpha)] = squares.a
    a_slots, b_slots = image_columns(j), image_columns(beta)

    hit = np.zeros(len(squares), dtype=bool)
    for origin, a in extensions(A, f.source, start, max_cells=max_cells):
        pending = ~hit[origin]
        origin, a = origin[pending], a[pending]
        if not len(a):
            continue
        rows = np.full((len(a), width), -1, dtype=INDEX)
        rows[:, b_slots] = squares.b[origin]
        rows[:, a_slots] = _postcompose(gens_a, a, f)
        ok = extendable(B, f.target, rows, max_cells=max_cells)
        hit[origin[ok]] = True
    return hit
