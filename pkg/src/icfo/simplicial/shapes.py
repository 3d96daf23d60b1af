"""
Standard shapes: simplices, boundaries, horns, spheres and sphere cylinders.

Simplices of the standard simplex are labelled by their vertex sequences,
i.e. monotone tuples (t_0 <= ... <= t_m) with entries in [n].
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations_with_replacement
from typing import Callable

import numpy as np

from icfo.simplicial.constructions import pushout
from icfo.simplicial.core import (
    INDEX,
    CapError,
    SimplicialMorphism,
    SimplicialSet,
    from_labels,
    morphism_from_labels,
    point,
    terminal_map,
)

Vertices = tuple[int, ...]


def _drop(m: int, t: Vertices, i: int) -> Vertices:
    return t[:i] + t[i + 1:]


def _repeat(m: int, t: Vertices, i: int) -> Vertices:
    return t[: i + 1] + t[i:]


def _standard(n: int, cap: int, keep: Callable[[Vertices], bool], name: str) -> SimplicialSet:
    levels = [[t for t in combinations_with_replacement(range(n + 1), m + 1) if keep(t)] for m in range(cap + 1)]
    return from_labels(cap, levels, _drop, _repeat, name=name)


def std_simplex(n: int, cap: int | None = None) -> SimplicialSet:
    cap = n if cap is None else cap
    if n < 0:
        raise ValueError(f"simplex dimension must be non-negative, got {n}")
    if cap < n:
        raise CapError(f"Delta[{n}] needs cap >= {n}, got {cap}")
    return replace(_standard(n, cap, lambda t: True, f"Delta[{n}]"), simplex=n)


def boundary(n: int, cap: int | None = None) -> SimplicialSet:
    cap = n if cap is None else cap
    if n < 1:
        raise ValueError(f"boundary needs n >= 1, got {n}")
    if cap < n - 1:
        raise CapError(f"boundary of Delta[{n}] needs cap >= {n - 1}, got {cap}")
    full = set(range(n + 1))
    return _standard(n, cap, lambda t: set(t) != full, f"dDelta[{n}]")


def horn(n: int, j: int, cap: int | None = None) -> SimplicialSet:
    cap = n if cap is None else cap
    if n < 1:
        raise ValueError(f"horn needs n >= 1, got {n}")
    if not 0 <= j <= n:
        raise ValueError(f"horn index j={j} out of range for n={n}")
    if cap < n - 1:
        raise CapError(f"horn Lambda[{n},{j}] needs cap >= {n - 1}, got {cap}")
    return _standard(n, cap, lambda t: any(i not in t for i in range(n + 1) if i != j), f"Lambda[{n},{j}]")


def standard_subset(n: int, cap: int, keep: Callable[[Vertices], bool], *, name: str = "") -> SimplicialSet:
    """Any simplicial subset of Delta[n] given by a face-closed membership test."""
    return _standard(n, cap, keep, name)


def inclusion(sub: SimplicialSet, ambient: SimplicialSet) -> SimplicialMorphism:
    """Inclusion between objects labelled compatibly (sub-labels are ambient labels)."""
    return morphism_from_labels(sub, ambient, lambda m, lab: lab, name="inclusion")


def operator_map(theta: Vertices, source: SimplicialSet, target: SimplicialSet) -> SimplicialMorphism:
    """The map Delta[k] -> Delta[n] (or between standard subsets) induced by theta: [k] -> [n]."""
    return morphism_from_labels(source, target, lambda m, t: tuple(theta[v] for v in t), name=f"op{theta}")


def horn_inclusion(n: int, j: int, cap: int | None = None) -> SimplicialMorphism:
    cap = n if cap is None else cap
    return inclusion(horn(n, j, cap), std_simplex(n, cap))


def boundary_inclusion(n: int, cap: int | None = None) -> SimplicialMorphism:
    cap = n if cap is None else cap
    return inclusion(boundary(n, cap), std_simplex(n, cap))


def descend(q: SimplicialMorphism, h: SimplicialMorphism) -> SimplicialMorphism:
    """The map Q -> Y through which h: X -> Y factors along the surjection q: X -> Q."""
    cap = min(q.cap, h.cap)
    comps = []
    for m in range(cap + 1):
        comp = np.full(q.target.sizes[m], -1, dtype=INDEX)
        comp[q.components[m]] = h.components[m]
        if (comp[q.components[m]] != h.components[m]).any() or (comp < 0).any():
            raise ValueError(f"map does not descend through the quotient at level {m}")
        comps.append(comp)
    return SimplicialMorphism(q.target, h.target, tuple(comps)).checked()


def sphere(n: int, cap: int | None = None) -> SimplicialSet:
    return sphere_quotient(n, cap).target


def sphere_quotient(n: int, cap: int | None = None) -> SimplicialMorphism:
    """The collapse map Delta[n] -> S^n = Delta[n] / boundary."""
    cap = n if cap is None else cap
    if n < 1:
        raise ValueError(f"sphere needs n >= 1, got {n}")
    inc = boundary_inclusion(n, cap)
    po = pushout(inc, terminal_map(inc.source, target=point(cap)), name=f"S^{n}")
    return po.left


@dataclass(frozen=True)
class Cylinder:
    n: int
    sphere: SimplicialSet
    obj: SimplicialSet
    i0: SimplicialMorphism
    i1: SimplicialMorphism
    collapse: SimplicialMorphism


def cyl_sphere(n: int, cap: int | None = None) -> Cylinder:
    """
    Delta[n+1] with the faces F^i (i >= 2) and F^0 n F^1 collapsed to a point.
    i0 / i1 are the images of the faces F^0 / F^1.
    """
    cap = n + 1 if cap is None else cap
    if n < 1:
        raise ValueError(f"cyl_sphere needs n >= 1, got {n}")
    if cap < n + 1:
        raise CapError(f"cyl(S^{n}) needs cap >= {n + 1}, got {cap}")
    top = std_simplex(n + 1, cap)

    def _collapsed(t: Vertices) -> bool:
        return any(i not in t for i in range(2, n + 2)) or (0 not in t and 1 not in t)

    A = standard_subset(n + 1, cap, _collapsed, name="collapsed")
    po = pushout(inclusion(A, top), terminal_map(A, target=point(cap)), name=f"cyl(S^{n})")
    collapse = po.left

    q_sphere = sphere_quotient(n, cap)
    base = q_sphere.source
    legs = []
    for theta in (tuple(range(1, n + 2)), (0,) + tuple(range(2, n + 2))):
        coface = operator_map(theta, base, top)
        legs.append(descend(q_sphere, collapse.compose(coface)))
    return Cylinder(n=n, sphere=q_sphere.target, obj=po.obj, i0=legs[0], i1=legs[1], collapse=collapse)
