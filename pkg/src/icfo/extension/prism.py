"""
Prism certificates: Delta[n] x Delta[1] built from horn-shaped pieces.

The prism is triangulated by the (n+1)-simplices x_0..x_n, x_l having vertex
sequence (0,0), ..., (l,0), (l,1), ..., (n,1). Its faces in the missing
facet d_j Delta[n] x Delta[1] are y_l = d_{j+1} x_l (l < j) and
y_l = d_j x_l (l > j). The boundary filtration adds one x_l per stage.

For j < n the stages run l = 0, ..., n:

  - l != j, n: y_l along Lambda[n, k] with k = l + 1 (l < j) or k = l
    (l > j), then x_l along Lambda[n+1, l+1];
  - l = j: x_j along Lambda[n+1, j+1];
  - l = n: x_n along Lambda[n+1, j], its missing face being y_n.

For j = n the stages run l = n, ..., 0, mirroring the case j = 0:

  - l = n: x_n along Lambda[n+1, n];
  - 0 < l < n: y_l = d_{n+1} x_l along Lambda[n, l], then x_l along
    Lambda[n+1, l];
  - l = 0: x_0 along Lambda[n+1, n+1].

z_l = d_k y_l is the face created together with y_l.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from icfo.extension.certificate import ExtensionCertificate, Step
from icfo.simplicial.constructions import closure_masks, product, subcomplex
from icfo.simplicial.core import SimplicialSet
from icfo.simplicial.shapes import std_simplex

logger = logging.getLogger(__name__)

Label = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class PrismStage:
    l: int
    missing: tuple[int, ...]
    y_face: int | None
    z_face: int | None
    y_horn: int | None
    x_horn: int


@dataclass(frozen=True, eq=False)
class PrismFiltration:
    n: int
    j: int
    top_cells: tuple[int, ...]
    order: tuple[PrismStage, ...]
    stages: tuple[tuple[np.ndarray, ...], ...]

    @property
    def y_faces(self) -> tuple[int | None, ...]:
        by_l = {st.l: st.y_face for st in self.order}
        return tuple(by_l[l] for l in range(self.n + 1))

    @property
    def z_faces(self) -> tuple[int | None, ...]:
        by_l = {st.l: st.z_face for st in self.order}
        return tuple(by_l[l] for l in range(self.n + 1))

    def stage_counts(self) -> list[list[int]]:
        return [[int(mask.sum()) for mask in stage] for stage in self.stages]


@dataclass(frozen=True, eq=False)
class PrismCertificate:
    certificate: ExtensionCertificate
    filtration: PrismFiltration


def prism(n: int) -> SimplicialSet:
    """Delta[n] x Delta[1] with cap n + 1."""
    return product(std_simplex(n, n + 1), std_simplex(1, n + 1), name=f"Delta[{n}]xDelta[1]")


def prism_cell(n: int, l: int) -> Label:
    return tuple(range(l + 1)) + tuple(range(l, n + 1)), (0,) * (l + 1) + (1,) * (n + 1 - l)


def prism_triangulation(n: int, P: SimplicialSet | None = None) -> list[int]:
    """Ids of x_0..x_n among the (n+1)-simplices of the prism."""
    if n < 0:
        raise ValueError(f"prism needs n >= 0, got {n}")
    P = prism(n) if P is None else P
    return [P.index_of(n + 1, prism_cell(n, l)) for l in range(n + 1)]


def _in_horn(t: tuple[int, ...], n: int, j: int) -> bool:
    return any(i not in t for i in range(n + 1) if i != j)


def _masks(P: SimplicialSet, keep) -> list[np.ndarray]:
    return [np.array([keep(lab) for lab in P.labels[m]], dtype=bool) for m in range(P.cap + 1)]


def _boundary_piece(P: SimplicialSet, n: int, j: int) -> list[np.ndarray]:
    return _masks(P, lambda lab: _in_horn(lab[0], n, j) or len(set(lab[1])) == 1)


def _add(P: SimplicialSet, present: list[np.ndarray], m: int, x: int) -> None:
    for level, mask in enumerate(closure_masks(P, {m: [x]})):
        present[level] |= mask


def _missing_faces(P: SimplicialSet, present: list[np.ndarray], m: int, x: int) -> list[int]:
    return [i for i in range(m + 1) if not present[m - 1][P.faces[m][i][x]]]


Attachment = tuple[int, int | None, int | None, int]


def attachment_order(n: int, j: int) -> list[Attachment]:
    """
    (l, face of x_l attached first as y_l, horn index of y_l, horn index of
    x_l) for every stage, in order. The face entries are None when x_l is
    attached on its own.
    """
    _check_range(n, j)
    if j == n:
        out: list[Attachment] = [(n, None, None, n)]
        out += [(l, n + 1, l, l) for l in range(n - 1, 0, -1)]
        return out + [(0, None, None, n + 1)]
    out = []
    for l in range(n + 1):
        if l == j:
            out.append((l, None, None, l + 1))
        elif l == n:
            out.append((l, None, None, j))
        elif l < j:
            out.append((l, j + 1, l + 1, l + 1))
        else:
            out.append((l, j, l, l + 1))
    return out


def _boundary_filtration(
    P: SimplicialSet, n: int, j: int, present: list[np.ndarray]
) -> tuple[list[Step], PrismFiltration]:
    tops = prism_triangulation(n, P)
    steps: list[Step] = []
    order: list[PrismStage] = []
    stages = [tuple(mask.copy() for mask in present)]
    for l, yi, k, xi in attachment_order(n, j):
        x = tops[l]
        missing = tuple(_missing_faces(P, present, n + 1, x))
        y = z = None
        if yi is not None:
            y = int(P.faces[n + 1][yi][x])
            z = int(P.faces[n][k][y])
            steps.append(Step(n, k, y))
            _add(P, present, n, y)
        steps.append(Step(n + 1, xi, x))
        _add(P, present, n + 1, x)
        order.append(PrismStage(l, missing, y, z, k, xi))
        stages.append(tuple(mask.copy() for mask in present))
        logger.debug("prism n=%d j=%d: attached x_%d (missing %s)", n, j, l, missing)

    filt = PrismFiltration(n=n, j=j, top_cells=tuple(tops), order=tuple(order), stages=tuple(stages))
    return steps, filt


def _check_range(n: int, j: int) -> None:
    if n < 1:
        raise ValueError(f"prism certificates need n >= 1, got {n}")
    if not 0 <= j <= n:
        raise ValueError(f"horn index j={j} out of range for n={n}")


def boundary_prism_cert(n: int, j: int) -> PrismCertificate:
    """Lambda[n,j] x Delta[1] u Delta[n] x dDelta[1] -> Delta[n] x Delta[1]."""
    _check_range(n, j)
    P = prism(n)
    base = _boundary_piece(P, n, j)
    inc = subcomplex(P, base, name=f"Lambda[{n},{j}]xDelta[1] u Delta[{n}]xdDelta[1]")
    steps, filt = _boundary_filtration(P, n, j, [mask.copy() for mask in base])
    cert = ExtensionCertificate(inc, tuple(steps), name=f"boundary_prism({n},{j})")
    return PrismCertificate(cert, filt)


def horn_prism_cert(n: int, j: int) -> PrismCertificate:
    """Lambda[n,j] x Delta[1] -> Delta[n] x Delta[1]: both ends first, then the boundary filtration."""
    _check_range(n, j)
    P = prism(n)
    base = _masks(P, lambda lab: _in_horn(lab[0], n, j))
    inc = subcomplex(P, base, name=f"Lambda[{n},{j}]xDelta[1]")
    present = [mask.copy() for mask in base]
    steps: list[Step] = []
    full = tuple(range(n + 1))
    for e in (0, 1):
        end = P.index_of(n, (full, (e,) * (n + 1)))
        steps.append(Step(n, j, end))
        _add(P, present, n, end)
    rest, filt = _boundary_filtration(P, n, j, present)
    cert = ExtensionCertificate(inc, tuple(steps + rest), name=f"horn_prism({n},{j})")
    return PrismCertificate(cert, filt)


def check_filtration(filt: PrismFiltration, P: SimplicialSet | None = None) -> list[str]:
    """
    Problems with a recorded filtration: the first stage must be the boundary
    piece and the last the whole prism; the stages must follow
    attachment_order(n, j); y_l may only miss z_l, and once y_l is in, x_l
    may only miss the face its horn leaves out.
    """
    n, j = filt.n, filt.j
    P = prism(n) if P is None else P
    problems: list[str] = []
    if not all((a == b).all() for a, b in zip(filt.stages[0], _boundary_piece(P, n, j))):
        problems.append("first stage is not Lambda x Delta[1] u Delta x dDelta[1]")
    if not all(mask.all() for mask in filt.stages[-1]):
        problems.append("last stage is not the whole prism")
    expected = attachment_order(n, j)
    if len(filt.order) != len(expected):
        problems.append(f"{len(filt.order)} stages recorded, expected {len(expected)}")
    for pos, (st, (l, yi, k, xi)) in enumerate(zip(filt.order, expected)):
        if st.l != l:
            problems.append(f"stage {pos} attaches x_{st.l}, expected x_{l}")
            continue
        x = filt.top_cells[l]
        y = None if yi is None else int(P.faces[n + 1][yi][x])
        if (st.y_face, st.y_horn, st.x_horn) != (y, k, xi):
            problems.append(f"stage {pos} records y={st.y_face} along {st.y_horn}, x_{l} along {st.x_horn}")
            continue
        present = [mask.copy() for mask in filt.stages[pos]]
        if y is not None:
            if _missing_faces(P, present, n, y) != [k] or st.z_face != int(P.faces[n][k][y]):
                problems.append(f"y_{l} does not miss exactly its face d_{k}")
            _add(P, present, n, y)
        if _missing_faces(P, present, n + 1, x) != [xi]:
            problems.append(f"x_{l} does not miss exactly its face d_{xi}")
    return problems
