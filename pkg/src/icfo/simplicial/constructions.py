from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
from networkx.utils import UnionFind

from icfo.simplicial.core import (
    INDEX,
    SimplicialMorphism,
    SimplicialSet,
    truncate_cap,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Pushout:
    obj: SimplicialSet
    left: SimplicialMorphism
    right: SimplicialMorphism


@dataclass(frozen=True)
class FiberProduct:
    obj: SimplicialSet
    left: SimplicialMorphism
    right: SimplicialMorphism


# Products
def product(K: SimplicialSet, L: SimplicialSet, *, name: str = "") -> SimplicialSet:
    """Levelwise product; the pair (a, b) at level m has id a * |L_m| + b."""
    cap = min(K.cap, L.cap)
    width = [L.sizes[m] for m in range(cap + 1)]

    def _pair(m: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a[:, None] * width[m] + b[None, :]).reshape(-1)

    faces = [np.zeros((0, K.sizes[0] * L.sizes[0]), dtype=INDEX)]
    for m in range(1, cap + 1):
        faces.append(np.stack([_pair(m - 1, K.faces[m][i], L.faces[m][i]) for i in range(m + 1)]))
    degens = [np.stack([_pair(m + 1, K.degeneracies[m][i], L.degeneracies[m][i]) for i in range(m + 1)]) for m in range(cap)]
    labels = None
    if K.labels is not None and L.labels is not None:
        labels = tuple(tuple((a, b) for a in K.labels[m] for b in L.labels[m]) for m in range(cap + 1))
    return SimplicialSet(
        cap=cap,
        sizes=tuple(K.sizes[m] * L.sizes[m] for m in range(cap + 1)),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        labels=labels,
        name=name or (f"{K.name}x{L.name}" if K.name and L.name else ""),
    )


def product_projections(
    K: SimplicialSet, L: SimplicialSet, P: SimplicialSet
) -> tuple[SimplicialMorphism, SimplicialMorphism]:
    if P.cap != min(K.cap, L.cap) or any(P.sizes[m] != K.sizes[m] * L.sizes[m] for m in range(P.cap + 1)):
        raise ValueError(f"{P!r} is not the product of {K!r} and {L!r}")
    first = tuple(np.arange(P.sizes[m], dtype=INDEX) // max(L.sizes[m], 1) for m in range(P.cap + 1))
    second = tuple(np.arange(P.sizes[m], dtype=INDEX) % max(L.sizes[m], 1) for m in range(P.cap + 1))
    return SimplicialMorphism(P, K, first, name="pr1"), SimplicialMorphism(P, L, second, name="pr2")


def pairing(f: SimplicialMorphism, g: SimplicialMorphism, *, target: SimplicialSet | None = None) -> SimplicialMorphism:
    """(f, g): X -> Y x Z for f: X -> Y, g: X -> Z."""
    if f.source is not g.source and f.source.sizes != g.source.sizes:
        raise ValueError("pairing needs morphisms with a common source")
    P = target if target is not None else product(f.target, g.target)
    cap = min(f.cap, g.cap, P.cap)
    comps = tuple(f.components[m] * g.target.sizes[m] + g.components[m] for m in range(cap + 1))
    return SimplicialMorphism(truncate_cap(f.source, cap), truncate_cap(P, cap), comps, name="pair")


def product_map(f: SimplicialMorphism, g: SimplicialMorphism) -> SimplicialMorphism:
    """f x g: K x L -> K' x L'."""
    P = product(f.source, g.source)
    pr1, pr2 = product_projections(f.source, g.source, P)
    return pairing(f.compose(pr1), g.compose(pr2))


# Coproducts
def _coproduct(X: SimplicialSet, Y: SimplicialSet) -> tuple[SimplicialSet, tuple[int, ...]]:
    cap = min(X.cap, Y.cap)
    offset = tuple(X.sizes[m] for m in range(cap + 1))
    faces = [np.zeros((0, X.sizes[0] + Y.sizes[0]), dtype=INDEX)]
    for m in range(1, cap + 1):
        faces.append(np.concatenate([X.faces[m], Y.faces[m] + offset[m - 1]], axis=1))
    degens = [np.concatenate([X.degeneracies[m], Y.degeneracies[m] + offset[m + 1]], axis=1) for m in range(cap)]
    labels = None
    if X.labels is not None and Y.labels is not None:
        labels = tuple(
            tuple((0, lab) for lab in X.labels[m]) + tuple((1, lab) for lab in Y.labels[m]) for m in range(cap + 1)
        )
    obj = SimplicialSet(
        cap=cap,
        sizes=tuple(X.sizes[m] + Y.sizes[m] for m in range(cap + 1)),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        labels=labels,
    )
    return obj, offset


def disjoint_union(X: SimplicialSet, Y: SimplicialSet, *, name: str = "") -> SimplicialSet:
    obj, _ = _coproduct(X, Y)
    return SimplicialSet(obj.cap, obj.sizes, obj.faces, obj.degeneracies, obj.labels, name=name)


# Quotients
def quotient(
    X: SimplicialSet,
    relation: Mapping[int, Iterable[tuple[int, int]]],
    *,
    name: str = "",
) -> SimplicialMorphism:
    """
    Quotient by the smallest congruence (closed under all faces and
    degeneracies) containing the given pairs. Classes are numbered by their
    smallest member; returns the quotient map X -> X/~.
    """
    forests = [UnionFind(range(X.sizes[m])) for m in range(X.cap + 1)]
    pending: list[tuple[int, int, int]] = []

    def _join(m: int, a: int, b: int) -> None:
        uf = forests[m]
        if uf[a] != uf[b]:
            uf.union(a, b)
            pending.append((m, a, b))

    for m, pairs in relation.items():
        if not 0 <= m <= X.cap:
            raise ValueError(f"relation level {m} outside cap {X.cap}")
        for a, b in pairs:
            _join(m, int(a), int(b))

    # merged pairs push their images along every structure map
    while pending:
        m, a, b = pending.pop()
        if m > 0:
            for i in range(m + 1):
                _join(m - 1, int(X.faces[m][i][a]), int(X.faces[m][i][b]))
        if m < X.cap:
            for i in range(m + 1):
                _join(m + 1, int(X.degeneracies[m][i][a]), int(X.degeneracies[m][i][b]))

    class_of: list[np.ndarray] = []
    reps: list[np.ndarray] = []
    for m in range(X.cap + 1):
        uf = forests[m]
        roots = np.fromiter((uf[x] for x in range(X.sizes[m])), dtype=INDEX, count=X.sizes[m])
        # first occurrence of each root is the class minimum
        _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order), dtype=INDEX)
        class_of.append(rank[inverse.reshape(-1)].astype(INDEX))
        reps.append(np.sort(first).astype(INDEX))

    faces = [np.zeros((0, len(reps[0])), dtype=INDEX)]
    for m in range(1, X.cap + 1):
        faces.append(np.stack([class_of[m - 1][X.faces[m][i][reps[m]]] for i in range(m + 1)]))
    degens = [
        np.stack([class_of[m + 1][X.degeneracies[m][i][reps[m]]] for i in range(m + 1)]) for m in range(X.cap)
    ]
    labels = None
    if X.labels is not None:
        labels = tuple(tuple(X.labels[m][int(r)] for r in reps[m]) for m in range(X.cap + 1))
    Q = SimplicialSet(
        cap=X.cap,
        sizes=tuple(len(r) for r in reps),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        labels=labels,
        name=name,
    )
    logger.debug("quotient of %r has sizes %s", X, list(Q.sizes))
    return SimplicialMorphism(X, Q, tuple(class_of), name="quotient")


def pushout(f: SimplicialMorphism, g: SimplicialMorphism, *, name: str = "") -> Pushout:
    """Pushout of B <-f- A -g-> C, computed as (B + C) / (f(a) ~ g(a))."""
    if f.source is not g.source and f.source.sizes != g.source.sizes:
        raise ValueError("pushout needs morphisms with a common source")
    cap = min(f.cap, g.cap)
    B = truncate_cap(f.target, min(cap, f.target.cap))
    C = truncate_cap(g.target, min(cap, g.target.cap))
    union, offset = _coproduct(B, C)
    relation = {
        m: zip(f.components[m].tolist(), (g.components[m] + offset[m]).tolist()) for m in range(union.cap + 1)
    }
    q = quotient(union, relation, name=name)
    P = q.target
    left = SimplicialMorphism(B, P, tuple(q.components[m][: offset[m]] for m in range(P.cap + 1)), name="inl")
    right = SimplicialMorphism(C, P, tuple(q.components[m][offset[m]:] for m in range(P.cap + 1)), name="inr")
    return Pushout(obj=P, left=left, right=right)


# Sub-objects
def subcomplex(X: SimplicialSet, masks: Sequence[np.ndarray], *, name: str = "") -> SimplicialMorphism:
    """Inclusion of the simplicial subset selected by per-level boolean masks."""
    if len(masks) != X.cap + 1:
        raise ValueError(f"expected {X.cap + 1} masks, got {len(masks)}")
    masks = [np.asarray(mk, dtype=bool) for mk in masks]
    for m in range(1, X.cap + 1):
        for i in range(m + 1):
            if not masks[m - 1][X.faces[m][i][masks[m]]].all():
                raise ValueError(f"masks not closed under d_{i} at level {m}")
    for m in range(X.cap):
        for i in range(m + 1):
            if not masks[m + 1][X.degeneracies[m][i][masks[m]]].all():
                raise ValueError(f"masks not closed under s_{i} at level {m}")

    keep = [np.flatnonzero(mk).astype(INDEX) for mk in masks]
    new_id = []
    for m in range(X.cap + 1):
        ids = np.full(X.sizes[m], -1, dtype=INDEX)
        ids[keep[m]] = np.arange(len(keep[m]), dtype=INDEX)
        new_id.append(ids)
    faces = [np.zeros((0, len(keep[0])), dtype=INDEX)]
    for m in range(1, X.cap + 1):
        faces.append(new_id[m - 1][X.faces[m][:, keep[m]]])
    degens = [new_id[m + 1][X.degeneracies[m][:, keep[m]]] for m in range(X.cap)]
    labels = None
    if X.labels is not None:
        labels = tuple(tuple(X.labels[m][int(x)] for x in keep[m]) for m in range(X.cap + 1))
    S = SimplicialSet(
        cap=X.cap,
        sizes=tuple(len(k) for k in keep),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        labels=labels,
        name=name,
    )
    return SimplicialMorphism(S, X, tuple(keep), name="inclusion")


def closure_masks(X: SimplicialSet, generators: Mapping[int, Iterable[int]]) -> list[np.ndarray]:
    """Masks of the simplicial subset generated by the given simplices."""
    masks = [np.zeros(X.sizes[m], dtype=bool) for m in range(X.cap + 1)]
    for m, xs in generators.items():
        masks[m][np.asarray(list(xs), dtype=INDEX)] = True
    for m in range(X.cap, 0, -1):
        for i in range(m + 1):
            masks[m - 1][X.faces[m][i][masks[m]]] = True
    for m in range(X.cap):
        for i in range(m + 1):
            masks[m + 1][X.degeneracies[m][i][masks[m]]] = True
    return masks


def generated_subcomplex(
    X: SimplicialSet, generators: Mapping[int, Iterable[int]], *, name: str = ""
) -> SimplicialMorphism:
    return subcomplex(X, closure_masks(X, generators), name=name)


def skeleton(X: SimplicialSet, k: int, *, name: str = "") -> SimplicialMorphism:
    gens = {m: X.nondegenerate(m).tolist() for m in range(min(k, X.cap) + 1)}
    return generated_subcomplex(X, gens, name=name or f"sk{k}")


def image(f: SimplicialMorphism, *, name: str = "") -> SimplicialMorphism:
    masks = [np.zeros(f.target.sizes[m], dtype=bool) for m in range(f.cap + 1)]
    for m in range(f.cap + 1):
        masks[m][f.components[m]] = True
    return subcomplex(truncate_cap(f.target, f.cap), masks, name=name)


# Fiber products
def fiber_product(f: SimplicialMorphism, g: SimplicialMorphism, *, name: str = "") -> FiberProduct:
    """
    X x_Y Z for f: X -> Y, g: Z -> Y. Level m lists the pairs (x, z) with
    f(x) = g(z) in lexicographic order.
    """
    if f.target is not g.target and f.target.sizes[: min(f.cap, g.cap) + 1] != g.target.sizes[: min(f.cap, g.cap) + 1]:
        raise ValueError("fiber product needs a common target")
    cap = min(f.cap, g.cap)
    X, Z = f.source, g.source
    pairs: list[np.ndarray] = []
    for m in range(cap + 1):
        left = pd.DataFrame({"left": np.arange(X.sizes[m], dtype=INDEX), "key": f.components[m]})
        right = pd.DataFrame({"right": np.arange(Z.sizes[m], dtype=INDEX), "key": g.components[m]})
        joined = left.merge(right, on="key", how="inner").sort_values(["left", "right"], kind="mergesort")
        pairs.append(joined[["left", "right"]].to_numpy(dtype=INDEX).reshape(-1, 2))

    keys = [p[:, 0] * Z.sizes[m] + p[:, 1] for m, p in enumerate(pairs)]

    def _locate(m: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        want = a * Z.sizes[m] + b
        pos = np.searchsorted(keys[m], want)
        return pos.astype(INDEX)

    faces = [np.zeros((0, len(pairs[0])), dtype=INDEX)]
    for m in range(1, cap + 1):
        a, b = pairs[m][:, 0], pairs[m][:, 1]
        faces.append(np.stack([_locate(m - 1, X.faces[m][i][a], Z.faces[m][i][b]) for i in range(m + 1)]))
    degens = []
    for m in range(cap):
        a, b = pairs[m][:, 0], pairs[m][:, 1]
        degens.append(
            np.stack([_locate(m + 1, X.degeneracies[m][i][a], Z.degeneracies[m][i][b]) for i in range(m + 1)])
        )
    labels = None
    if X.labels is not None and Z.labels is not None:
        labels = tuple(
            tuple((X.labels[m][int(a)], Z.labels[m][int(b)]) for a, b in pairs[m]) for m in range(cap + 1)
        )
    P = SimplicialSet(
        cap=cap,
        sizes=tuple(len(p) for p in pairs),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        labels=labels,
        name=name,
    )
    Xc = X if X.cap == cap else truncate_cap(X, cap)
    Zc = Z if Z.cap == cap else truncate_cap(Z, cap)
    left = SimplicialMorphism(P, Xc, tuple(p[:, 0].copy() for p in pairs), name="pr1")
    right = SimplicialMorphism(P, Zc, tuple(p[:, 1].copy() for p in pairs), name="pr2")
    logger.debug("fiber product sizes %s", list(P.sizes))
    return FiberProduct(obj=P, left=left, right=right)


def restrict_cap(f: SimplicialMorphism, cap: int) -> SimplicialMorphism:
    return SimplicialMorphism(
        truncate_cap(f.source, min(cap, f.source.cap)),
        truncate_cap(f.target, min(cap, f.target.cap)),
        f.components[: cap + 1],
        name=f.name,
    )
