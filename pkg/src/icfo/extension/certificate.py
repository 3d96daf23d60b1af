"""
Collapsible-extension certificates.

A certificate records an inclusion S -> T and an ordered list of horn fills
(m, j, x): x is an m-simplex of T attached along Lambda[m, j]. The verifier
replays every step as an honest pushout along Lambda[m, j] -> Delta[m],
maintaining an injective comparison map from the current stage into T, and
accepts iff that comparison ends up an isomorphism. Attaching maps are
recomputed from T during replay; nothing recorded by a constructor is trusted.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from icfo.simplicial.constructions import pushout
from icfo.simplicial.core import INDEX, SimplicialMorphism, SimplicialSet, act
from icfo.simplicial.shapes import horn_inclusion, operator_map, std_simplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Step:
    m: int
    j: int
    filler: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.m, self.j, self.filler


@dataclass(frozen=True, eq=False)
class ExtensionCertificate:
    inclusion: SimplicialMorphism
    steps: tuple[Step, ...]
    name: str = ""

    @property
    def base(self) -> SimplicialSet:
        return self.inclusion.source

    @property
    def target(self) -> SimplicialSet:
        return self.inclusion.target

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    steps_replayed: int
    failed_step: int | None = None
    reason: str = ""
    witness: dict = field(default_factory=dict)
    isomorphism: SimplicialMorphism | None = field(default=None, compare=False)
    stage_sizes: tuple[tuple[int, ...], ...] = ()


def _inverse(comp: np.ndarray, size: int) -> np.ndarray:
    inv = np.full(size, -1, dtype=INDEX)
    inv[comp] = np.arange(len(comp), dtype=INDEX)
    return inv


def _fail(k: int, reason: str, witness: dict, sizes: list) -> CertificateReport:
    logger.debug("certificate rejected at step %d: %s", k, reason)
    return CertificateReport(
        ok=False, steps_replayed=k, failed_step=k, reason=reason, witness=witness, stage_sizes=tuple(sizes)
    )


def verify_certificate(cert: ExtensionCertificate) -> CertificateReport:
    T = cert.target
    cap = T.cap
    inc = cert.inclusion
    if inc.cap != cap:
        return _fail(0, f"base inclusion has cap {inc.cap}, target cap is {cap}", {}, [])
    bad = inc.violations()
    if bad:
        return _fail(0, f"base inclusion is not simplicial: {bad[0].describe()}", {}, [])
    if not inc.is_injective():
        return _fail(0, "base inclusion is not injective", {}, [])

    stage: SimplicialSet = inc.source
    comp = [c.copy() for c in inc.components]
    sizes = [stage.sizes]

    for k, step in enumerate(cert.steps):
        m, j, x = step.as_tuple()
        if not 1 <= m <= cap or not 0 <= j <= m:
            return _fail(k, f"step ({m}, {j}) out of range for cap {cap}", {"step": k}, sizes)
        if not 0 <= x < T.sizes[m]:
            return _fail(k, f"filler {x} is not an {m}-simplex of the target", {"step": k}, sizes)
        inv = [_inverse(comp[p], T.sizes[p]) for p in range(cap + 1)]
        if inv[m][x] >= 0:
            return _fail(k, f"filler {T.label(m, x)!r} is already present", {"filler": repr(T.label(m, x))}, sizes)
        for i in range(m + 1):
            if i != j and inv[m - 1][T.faces[m][i][x]] < 0:
                face = int(T.faces[m][i][x])
                return _fail(
                    k,
                    f"face d_{i} of {T.label(m, x)!r} is missing from the current stage",
                    {"face": i, "simplex": repr(T.label(m, x)), "missing": repr(T.label(m - 1, face))},
                    sizes,
                )

        hinc = horn_inclusion(m, j, cap)
        horn, simplex = hinc.source, hinc.target
        # simplex t of Delta[m] goes to the operator t applied to x
        in_target = [
            np.array([int(act(T, t, m, x)) for t in simplex.labels[p]], dtype=INDEX) for p in range(cap + 1)
        ]
        attach_comps = []
        for p in range(cap + 1):
            targets = in_target[p][hinc.components[p]]
            pre = inv[p][targets]
            if (pre < 0).any():
                return _fail(k, f"horn of step {k} does not land in the current stage", {"level": p}, sizes)
            attach_comps.append(pre)
        attach = SimplicialMorphism(horn, stage, tuple(attach_comps), name=f"attach{k}")
        bad = attach.violations()
        if bad:
            return _fail(k, f"attaching map is not simplicial: {bad[0].describe()}", {}, sizes)

        po = pushout(hinc, attach)
        new_comp = []
        for p in range(cap + 1):
            arr = np.full(po.obj.sizes[p], -1, dtype=INDEX)
            arr[po.right.components[p]] = comp[p]
            arr[po.left.components[p]] = in_target[p]
            if (arr[po.right.components[p]] != comp[p]).any() or (arr < 0).any():
                return _fail(k, f"comparison map is not well defined at level {p}", {"level": p}, sizes)
            if len(np.unique(arr)) != len(arr):
                return _fail(k, f"step {k} identifies distinct simplices of the target at level {p}", {"level": p}, sizes)
            new_comp.append(arr)
        stage, comp = po.obj, new_comp
        sizes.append(stage.sizes)

    for p in range(cap + 1):
        if len(comp[p]) != T.sizes[p]:
            missing = np.setdiff1d(np.arange(T.sizes[p]), comp[p])
            return _fail(
                len(cert.steps),
                f"final stage misses {len(missing)} simplices of the target at level {p}",
                {"level": p, "first_missing": repr(T.label(p, int(missing[0])))},
                sizes,
            )
    iso = SimplicialMorphism(stage, T, tuple(comp), name="comparison")
    return CertificateReport(
        ok=True, steps_replayed=len(cert.steps), isomorphism=iso, stage_sizes=tuple(sizes)
    )


def identity_certificate(X: SimplicialSet) -> ExtensionCertificate:
    comps = tuple(np.arange(n, dtype=INDEX) for n in X.sizes)
    return ExtensionCertificate(SimplicialMorphism(X, X, comps, name="id"), steps=(), name="identity")


def face_inclusion_cert(k: int, n: int, *, cap: int | None = None) -> ExtensionCertificate:
    """Delta[k] -> Delta[n] onto the last k+1 vertices, built by coning one vertex at a time."""
    if not 0 <= k < n:
        raise ValueError(f"face inclusion needs 0 <= k < n, got k={k}, n={n}")
    cap = n if cap is None else cap
    T = std_simplex(n, cap)
    S = std_simplex(k, cap)
    inc = operator_map(tuple(range(n - k, n + 1)), S, T)
    steps: list[Step] = []
    for v in range(n - k - 1, -1, -1):
        w0 = v + 1
        rest = list(range(v + 2, n + 1))
        for size in range(len(rest) + 1):
            for tau in _subsets(rest, size):
                t = (v, w0) + tau
                steps.append(Step(m=len(t) - 1, j=1, filler=T.index_of(len(t) - 1, t)))
    return ExtensionCertificate(inc, tuple(steps), name=f"face({k},{n})")


def _subsets(items: Sequence[int], size: int) -> list[tuple[int, ...]]:
    return list(combinations(items, size))


def compose_certificates(first: ExtensionCertificate, second: ExtensionCertificate) -> ExtensionCertificate:
    """S -> T1 followed by T1 -> T2, matched through labels."""
    T1, B2 = first.target, second.base
    if T1.cap != B2.cap or T1.sizes != B2.sizes:
        raise ValueError(f"cannot compose: {T1!r} does not match {B2!r}")
    if T1.labels is not None and B2.labels is not None and T1.labels != B2.labels:
        raise ValueError("cannot compose: intermediate objects are labelled differently")
    lift = second.inclusion
    steps = tuple(Step(s.m, s.j, int(lift.components[s.m][s.filler])) for s in first.steps) + second.steps
    inclusion = SimplicialMorphism(
        first.base,
        second.target,
        tuple(lift.components[p][first.inclusion.components[p]] for p in range(first.inclusion.cap + 1)),
        name="inclusion",
    )
    return ExtensionCertificate(inclusion, steps, name=f"{first.name};{second.name}")
