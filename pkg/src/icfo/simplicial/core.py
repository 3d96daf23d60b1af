"""
Finite, dimension-capped simplicial sets and simplicial morphisms.

A simplicial set with cap D stores, for every level 0 <= m <= D, the number of
m-simplices (dense integer ids) together with index arrays

    faces[m]        shape (m+1, |X_m|), faces[m][i][x] = d_i x
    degeneracies[m] shape (m+1, |X_m|), degeneracies[m][i][x] = s_i x   (m < D)

Everything is immutable once built; derived data (non-degenerate masks,
Eilenberg-Zilber normal forms, label lookups) is computed lazily and cached.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

INDEX = np.int64


class CapError(ValueError):
    """A construction needs simplices above the dimension cap it was given."""


@dataclass(frozen=True)
class IdentityViolation:
    identity: str
    level: int
    simplex: int
    lhs: int
    rhs: int

    def describe(self) -> str:
        return f"{self.identity} fails on x={self.simplex} in X_{self.level}: {self.lhs} != {self.rhs}"


class SimplicialIdentityError(ValueError):
    def __init__(self, violations: Sequence[IdentityViolation]):
        self.violations = list(violations)
        head = "; ".join(v.describe() for v in self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"{len(self.violations)} simplicial identity violation(s): {head}{more}")


# Normal form of a simplex: (dimension of root, root id, monotone surjection onto the root)
NormalForm = tuple[int, int, tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class SimplicialSet:
    cap: int
    sizes: tuple[int, ...]
    faces: tuple[np.ndarray, ...]
    degeneracies: tuple[np.ndarray, ...]
    labels: tuple[tuple[Hashable, ...], ...] | None = None
    name: str = ""
    # n when this is the standard simplex Delta[n]
    simplex: int | None = None

    def __post_init__(self) -> None:
        if self.cap < 0:
            raise ValueError(f"cap must be non-negative, got {self.cap}")
        if len(self.sizes) != self.cap + 1:
            raise ValueError(f"expected {self.cap + 1} level sizes for cap {self.cap}, got {len(self.sizes)}")
        if len(self.faces) != self.cap + 1:
            raise ValueError(f"expected {self.cap + 1} face arrays, got {len(self.faces)}")
        if len(self.degeneracies) != self.cap:
            raise ValueError(f"expected {self.cap} degeneracy arrays, got {len(self.degeneracies)}")
        for m in range(self.cap + 1):
            want = (m + 1 if m > 0 else 0, self.sizes[m])
            if self.faces[m].shape != want:
                raise ValueError(f"faces at level {m} have shape {self.faces[m].shape}, expected {want}")
        for m in range(self.cap):
            want = (m + 1, self.sizes[m])
            if self.degeneracies[m].shape != want:
                raise ValueError(
                    f"degeneracies at level {m} have shape {self.degeneracies[m].shape}, expected {want}"
                )
        if self.labels is not None and len(self.labels) != self.cap + 1:
            raise ValueError("labels must cover every level")

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<SimplicialSet{tag} cap={self.cap} sizes={list(self.sizes)}>"

    def size(self, m: int) -> int:
        return self.sizes[m]

    def face(self, i: int, m: int, x):
        return self.faces[m][i][x]

    def degeneracy(self, i: int, m: int, x):
        if m >= self.cap:
            raise CapError(f"s_{i} on level {m} needs cap > {m}, have {self.cap}")
        return self.degeneracies[m][i][x]

    def label(self, m: int, x: int) -> Hashable:
        if self.labels is None:
            return int(x)
        return self.labels[m][int(x)]

    @cached_property
    def _label_index(self) -> tuple[dict, ...]:
        if self.labels is None:
            raise ValueError(f"{self!r} carries no labels")
        return tuple({lab: k for k, lab in enumerate(level)} for level in self.labels)

    def index_of(self, m: int, label: Hashable) -> int:
        try:
            return self._label_index[m][label]
        except KeyError as e:
            raise KeyError(f"no simplex labelled {label!r} in level {m} of {self!r}") from e

    @cached_property
    def degenerate_masks(self) -> tuple[np.ndarray, ...]:
        masks = [np.zeros(self.sizes[0], dtype=bool)]
        for m in range(1, self.cap + 1):
            mask = np.zeros(self.sizes[m], dtype=bool)
            for i in range(m):
                mask[self.degeneracies[m - 1][i]] = True
            masks.append(mask)
        return tuple(masks)

    def nondegenerate(self, m: int) -> np.ndarray:
        return np.flatnonzero(~self.degenerate_masks[m]).astype(INDEX)

    @property
    def dim(self) -> int:
        """Highest level holding a non-degenerate simplex (-1 when empty)."""
        for m in range(self.cap, -1, -1):
            if (~self.degenerate_masks[m]).any():
                return m
        return -1

    @cached_property
    def _normal_forms(self) -> dict[int, list[NormalForm]]:
        return {}

    def normal_forms(self, m: int) -> list[NormalForm]:
        cache = self._normal_forms
        if m in cache:
            return cache[m]
        if m == 0:
            cache[0] = [(0, x, (0,)) for x in range(self.sizes[0])]
            return cache[0]
        below = self.normal_forms(m - 1)
        out: list[NormalForm | None] = [None] * self.sizes[m]
        for i in range(m):
            targets = self.degeneracies[m - 1][i]
            for y, x in enumerate(targets.tolist()):
                if out[x] is not None:
                    continue
                k, root, surj = below[y]
                # x = s_i y, so x = y o sigma^i
                out[x] = (k, root, tuple(surj[p if p <= i else p - 1] for p in range(m + 1)))
        for x in range(self.sizes[m]):
            if out[x] is None:
                out[x] = (m, x, tuple(range(m + 1)))
        cache[m] = out  # type: ignore[assignment]
        return cache[m]

    def normal_form(self, m: int, x: int) -> NormalForm:
        return self.normal_forms(m)[int(x)]


def act(X: SimplicialSet, theta: Sequence[int], k: int, xs) -> np.ndarray:
    """
    Apply the simplicial operator of a monotone map theta: [m] -> [k] to
    k-simplices xs (scalar or array); returns m-simplices.
    """
    theta = tuple(int(t) for t in theta)
    m = len(theta) - 1
    if any(theta[p] > theta[p + 1] for p in range(m)) or (theta and (theta[0] < 0 or theta[-1] > k)):
        raise ValueError(f"{theta} is not a monotone map into [{k}]")
    cur = np.asarray(xs, dtype=INDEX)
    image = sorted(set(theta))
    level = k
    for i in reversed([i for i in range(k + 1) if i not in image]):
        cur = X.faces[level][i][cur]
        level -= 1
    pos = {v: p for p, v in enumerate(image)}
    sigma = [pos[t] for t in theta]
    for j in [p for p in range(m) if sigma[p] == sigma[p + 1]]:
        if level >= X.cap:
            raise CapError(f"operator {theta} needs level {level + 1} above cap {X.cap}")
        cur = X.degeneracies[level][j][cur]
        level += 1
    return cur


def check_identities(X: SimplicialSet) -> list[IdentityViolation]:
    """Every violated simplicial identity instance, vectorized level by level."""
    out: list[IdentityViolation] = []

    # index ranges first: identity checks index through these arrays
    for m in range(1, X.cap + 1):
        for i in range(m + 1):
            arr = X.faces[m][i]
            bad = np.flatnonzero((arr < 0) | (arr >= X.sizes[m - 1]))
            out.extend(IdentityViolation(f"range d_{i}", m, int(x), int(arr[x]), X.sizes[m - 1]) for x in bad)
    for m in range(X.cap):
        for i in range(m + 1):
            arr = X.degeneracies[m][i]
            bad = np.flatnonzero((arr < 0) | (arr >= X.sizes[m + 1]))
            out.extend(IdentityViolation(f"range s_{i}", m, int(x), int(arr[x]), X.sizes[m + 1]) for x in bad)
    if out:
        return out

    def _collect(identity: str, level: int, lhs: np.ndarray, rhs: np.ndarray) -> None:
        bad = np.flatnonzero(lhs != rhs)
        out.extend(IdentityViolation(identity, level, int(x), int(lhs[x]), int(rhs[x])) for x in bad)

    F, S = X.faces, X.degeneracies
    for m in range(2, X.cap + 1):
        for j in range(1, m + 1):
            for i in range(j):
                _collect(f"d_{i} d_{j} = d_{j - 1} d_{i}", m, F[m - 1][i][F[m][j]], F[m - 1][j - 1][F[m][i]])
    for m in range(X.cap - 1):
        for j in range(m + 1):
            for i in range(j + 1):
                _collect(f"s_{i} s_{j} = s_{j + 1} s_{i}", m, S[m + 1][i][S[m][j]], S[m + 1][j + 1][S[m][i]])
    for m in range(X.cap):
        ident = np.arange(X.sizes[m], dtype=INDEX)
        for j in range(m + 1):
            up = S[m][j]
            for i in range(m + 2):
                lhs = F[m + 1][i][up]
                if i < j:
                    _collect(f"d_{i} s_{j} = s_{j - 1} d_{i}", m, lhs, S[m - 1][j - 1][F[m][i]])
                elif i in (j, j + 1):
                    _collect(f"d_{i} s_{j} = id", m, lhs, ident)
                else:
                    _collect(f"d_{i} s_{j} = s_{j} d_{i - 1}", m, lhs, S[m - 1][j][F[m][i - 1]])
    return out


def validate(X: SimplicialSet) -> SimplicialSet:
    violations = check_identities(X)
    if violations:
        raise SimplicialIdentityError(violations)
    return X


def from_arrays(
    cap: int,
    sizes: Sequence[int],
    d: Sequence[Sequence[Sequence[int]]],
    s: Sequence[Sequence[Sequence[int]]],
    *,
    name: str = "",
) -> SimplicialSet:
    """Build from raw nested lists (the JSON layout) and validate."""
    faces = [np.zeros((0, int(sizes[0])), dtype=INDEX)]
    for m in range(1, cap + 1):
        faces.append(np.asarray(d[m], dtype=INDEX).reshape(m + 1, int(sizes[m])))
    degens = [np.asarray(s[m], dtype=INDEX).reshape(m + 1, int(sizes[m])) for m in range(cap)]
    X = SimplicialSet(
        cap=int(cap),
        sizes=tuple(int(n) for n in sizes),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        name=name,
    )
    return validate(X)


def from_labels(
    cap: int,
    levels: Sequence[Sequence[Hashable]],
    face: Callable[[int, Hashable, int], Hashable],
    degeneracy: Callable[[int, Hashable, int], Hashable],
    *,
    name: str = "",
) -> SimplicialSet:
    """
    Build a simplicial set whose m-simplices are the labels in levels[m];
    face(m, label, i) / degeneracy(m, label, i) give the labels of d_i / s_i.
    """
    if len(levels) != cap + 1:
        raise ValueError(f"expected {cap + 1} levels, got {len(levels)}")
    lookup = [{lab: k for k, lab in enumerate(level)} for level in levels]
    faces = [np.zeros((0, len(levels[0])), dtype=INDEX)]
    for m in range(1, cap + 1):
        arr = np.empty((m + 1, len(levels[m])), dtype=INDEX)
        for x, lab in enumerate(levels[m]):
            for i in range(m + 1):
                arr[i, x] = lookup[m - 1][face(m, lab, i)]
        faces.append(arr)
    degens = []
    for m in range(cap):
        arr = np.empty((m + 1, len(levels[m])), dtype=INDEX)
        for x, lab in enumerate(levels[m]):
            for i in range(m + 1):
                arr[i, x] = lookup[m + 1][degeneracy(m, lab, i)]
        degens.append(arr)
    return SimplicialSet(
        cap=cap,
        sizes=tuple(len(level) for level in levels),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        labels=tuple(tuple(level) for level in levels),
        name=name,
    )


def point(cap: int) -> SimplicialSet:
    zeros = lambda rows: np.zeros((rows, 1), dtype=INDEX)  # noqa: E731
    return SimplicialSet(
        cap=cap,
        sizes=(1,) * (cap + 1),
        faces=tuple(zeros(m + 1 if m > 0 else 0) for m in range(cap + 1)),
        degeneracies=tuple(zeros(m + 1) for m in range(cap)),
        labels=tuple(((0,) * (m + 1),) for m in range(cap + 1)),
        name="point",
    )


def empty(cap: int) -> SimplicialSet:
    return SimplicialSet(
        cap=cap,
        sizes=(0,) * (cap + 1),
        faces=tuple(np.zeros((m + 1 if m > 0 else 0, 0), dtype=INDEX) for m in range(cap + 1)),
        degeneracies=tuple(np.zeros((m + 1, 0), dtype=INDEX) for m in range(cap)),
        name="empty",
    )


@dataclass(frozen=True, eq=False)
class SimplicialMorphism:
    source: SimplicialSet
    target: SimplicialSet
    components: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self) -> None:
        want = min(self.source.cap, self.target.cap) + 1
        if len(self.components) != want:
            raise ValueError(f"expected {want} components, got {len(self.components)}")
        for m, comp in enumerate(self.components):
            if comp.shape != (self.source.sizes[m],):
                raise ValueError(f"component {m} has shape {comp.shape}, expected ({self.source.sizes[m]},)")

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<SimplicialMorphism{tag} {self.source!r} -> {self.target!r}>"

    @property
    def cap(self) -> int:
        return len(self.components) - 1

    def __call__(self, m: int, xs):
        return self.components[m][xs]

    def violations(self) -> list[IdentityViolation]:
        out: list[IdentityViolation] = []
        X, Y, f = self.source, self.target, self.components
        for m in range(self.cap + 1):
            comp = f[m]
            bad = np.flatnonzero((comp < 0) | (comp >= Y.sizes[m]))
            out.extend(IdentityViolation("range f", m, int(x), int(comp[x]), Y.sizes[m]) for x in bad)
        if out:
            return out
        for m in range(1, self.cap + 1):
            for i in range(m + 1):
                lhs = f[m - 1][X.faces[m][i]]
                rhs = Y.faces[m][i][f[m]]
                bad = np.flatnonzero(lhs != rhs)
                out.extend(IdentityViolation(f"f d_{i} = d_{i} f", m, int(x), int(lhs[x]), int(rhs[x])) for x in bad)
        for m in range(self.cap):
            for i in range(m + 1):
                lhs = f[m + 1][X.degeneracies[m][i]]
                rhs = Y.degeneracies[m][i][f[m]]
                bad = np.flatnonzero(lhs != rhs)
                out.extend(IdentityViolation(f"f s_{i} = s_{i} f", m, int(x), int(lhs[x]), int(rhs[x])) for x in bad)
        return out

    def checked(self) -> "SimplicialMorphism":
        bad = self.violations()
        if bad:
            raise SimplicialIdentityError(bad)
        return self

    def compose(self, first: "SimplicialMorphism") -> "SimplicialMorphism":
        """self o first."""
        cap = min(self.cap, first.cap)
        if first.target is not self.source and first.target.sizes[: cap + 1] != self.source.sizes[: cap + 1]:
            raise ValueError(f"cannot compose {self!r} after {first!r}")
        comps = tuple(self.components[m][first.components[m]] for m in range(cap + 1))
        source, target = first.source, self.target
        if min(source.cap, target.cap) != cap:
            source, target = truncate_cap(source, cap), truncate_cap(target, cap)
        return SimplicialMorphism(source, target, comps)

    def level_injective(self, m: int) -> bool:
        comp = self.components[m]
        return len(np.unique(comp)) == len(comp)

    def level_surjective(self, m: int) -> bool:
        return len(np.unique(self.components[m])) == self.target.sizes[m]

    def is_injective(self) -> bool:
        return all(self.level_injective(m) for m in range(self.cap + 1))

    def is_surjective(self) -> bool:
        return all(self.level_surjective(m) for m in range(self.cap + 1))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def truncate_cap(X: SimplicialSet, cap: int) -> SimplicialSet:
    """The same simplicial set seen with a lower cap."""
    if cap > X.cap:
        raise CapError(f"cannot raise cap of {X!r} to {cap}")
    if cap == X.cap:
        return X
    return SimplicialSet(
        cap=cap,
        sizes=X.sizes[: cap + 1],
        faces=X.faces[: cap + 1],
        degeneracies=X.degeneracies[:cap],
        labels=None if X.labels is None else X.labels[: cap + 1],
        name=X.name,
        simplex=X.simplex if X.simplex is not None and cap >= X.simplex else None,
    )


def identity(X: SimplicialSet) -> SimplicialMorphism:
    return SimplicialMorphism(X, X, tuple(np.arange(n, dtype=INDEX) for n in X.sizes), name="id")


def terminal_map(X: SimplicialSet, *, target: SimplicialSet | None = None) -> SimplicialMorphism:
    pt = target if target is not None else point(X.cap)
    cap = min(X.cap, pt.cap)
    return SimplicialMorphism(X, pt, tuple(np.zeros(X.sizes[m], dtype=INDEX) for m in range(cap + 1)), name="!")


def morphism_from_labels(
    source: SimplicialSet,
    target: SimplicialSet,
    fn: Callable[[int, Hashable], Hashable],
    *,
    name: str = "",
) -> SimplicialMorphism:
    """Componentwise map on labels; fn(m, label) is the label of the image."""
    if source.labels is None or target.labels is None:
        raise ValueError("morphism_from_labels needs labelled source and target")
    cap = min(source.cap, target.cap)
    comps = []
    for m in range(cap + 1):
        comps.append(
            np.fromiter(
                (target.index_of(m, fn(m, lab)) for lab in source.labels[m]),
                dtype=INDEX,
                count=source.sizes[m],
            )
        )
    return SimplicialMorphism(source, target, tuple(comps), name=name)
