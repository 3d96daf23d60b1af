"""
Weak equivalences between finite n-groupoids.

Two independent tests: comparison of pi_0 and of pi_k (k <= n) at one
basepoint per component, and the cover criteria on relative square sets.
Caps too low to see all of the homotopy give "inconclusive", never a guess.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from icfo.extension.prism import prism
from icfo.homotopy.groups import induced_map, is_isomorphism_of_tables, pi0, pi0_map, pi_n
from icfo.kan.checks import KanConditionError, LevelResult, detect_groupoid_level
from icfo.simplicial.constructions import subcomplex
from icfo.simplicial.core import INDEX, CapError, SimplicialMorphism, SimplicialSet, empty, morphism_from_labels
from icfo.simplicial.hom import EnumerationLimit, relative_squares, squares_extend
from icfo.simplicial.shapes import boundary, horn, inclusion, operator_map, std_simplex

logger = logging.getLogger(__name__)

Outcome = Literal["pass", "fail", "inconclusive"]


@dataclass(frozen=True)
class WeqReport:
    verdict: Outcome
    n: int | None
    D: int
    reason: str = ""
    checks: tuple[dict, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


def _groupoid_level(f: SimplicialMorphism, D: int, max_cells: int | None) -> int | None:
    levels = [detect_groupoid_level(Z, D, max_cells=max_cells) for Z in (f.source, f.target)]
    if any(v is None for v in levels):
        return None
    return max(levels)


def is_weak_equivalence(
    f: SimplicialMorphism,
    D: int,
    *,
    n: int | None = None,
    max_cells: int | None = None,
) -> WeqReport:
    X, Y = f.source, f.target
    if D > min(X.cap, Y.cap, f.cap):
        raise CapError(f"weak equivalence test up to {D} needs caps >= {D}, have {X.cap}, {Y.cap}")
    try:
        if n is None:
            n = _groupoid_level(f, D, max_cells)
            if n is None:
                return WeqReport("inconclusive", None, D, reason=f"source or target is not an n-groupoid with n < {D}")
        elif D < n + 1:
            return WeqReport("inconclusive", n, D, reason=f"cap {D} below {n + 1}")

        checks: list[dict] = []
        cx, cy = pi0(X), pi0(Y)
        on_pi0 = pi0_map(f, cx, cy)
        bijective = sorted(on_pi0) == list(range(len(cy)))
        checks.append({"check": "pi0", "source": len(cx), "target": len(cy), "ok": bijective})
        if not bijective:
            return WeqReport("fail", n, D, reason="not a bijection on pi0", checks=tuple(checks))

        for v in cx.representatives:
            w = int(f.components[0][v])
            for k in range(1, n + 1):
                G = pi_n(X, v, k, max_cells=max_cells)
                H = pi_n(Y, w, k, max_cells=max_cells)
                phi = induced_map(f, G, H)
                ok = is_isomorphism_of_tables(phi, G.table, H.table)
                checks.append({"check": f"pi{k}", "basepoint": v, "source": G.order, "target": H.order, "ok": ok})
                if not ok:
                    return WeqReport("fail", n, D, reason=f"pi_{k} differs at vertex {v}", checks=tuple(checks))
    except EnumerationLimit as e:
        return WeqReport("inconclusive", n, D, reason=str(e))
    except KanConditionError as e:
        return WeqReport("inconclusive", n, D, reason=f"homotopy groups undefined: {e}")

    logger.debug("%r is a weak equivalence (n=%s, D=%d)", f, n, D)
    return WeqReport("pass", n, D, checks=tuple(checks))


@dataclass(frozen=True)
class CriterionReport:
    name: str
    levels: tuple[LevelResult, ...]

    @property
    def ok(self) -> bool:
        return all(lv.surjective for lv in self.levels)

    @property
    def first_failure(self) -> LevelResult | None:
        return next((lv for lv in self.levels if not lv.surjective), None)


@dataclass(frozen=True)
class WeqCoverReport:
    D: int
    first_step: CriterionReport
    w_eq: CriterionReport
    verdict: Outcome = "pass"
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    @property
    def agree(self) -> bool:
        return self.first_step.ok == self.w_eq.ok


@dataclass(frozen=True, eq=False)
class _Arrows:
    """j: A -> B, its restriction j': A' -> B' and the inclusions A' -> A, B' -> B."""

    j: SimplicialMorphism
    j_sub: SimplicialMorphism
    alpha: SimplicialMorphism
    beta: SimplicialMorphism


def _from_empty(target: SimplicialSet) -> SimplicialMorphism:
    E = empty(target.cap)
    return SimplicialMorphism(E, target, tuple(np.zeros(0, dtype=INDEX) for _ in range(target.cap + 1)))


def _first_step_arrows(n: int) -> _Arrows:
    """Delta[n] -> Delta[n] x Delta[1] at the end 1, restricted to the boundary plus the end 0."""
    cap = n + 1
    A = std_simplex(n, cap)
    B = prism(n)
    at_one = lambda m, t: (t, (1,) * (m + 1))  # noqa: E731
    j = morphism_from_labels(A, B, at_one, name="end1")
    masks = [
        np.array([len(set(t)) < n + 1 or not any(e) for t, e in B.labels[m]], dtype=bool) for m in range(cap + 1)
    ]
    beta = subcomplex(B, masks, name=f"dDelta[{n}]xDelta[1]+end0")
    if n == 0:
        alpha = _from_empty(A)
        j_sub = _from_empty(beta.source)
    else:
        Asub = boundary(n, cap)
        alpha = inclusion(Asub, A)
        j_sub = morphism_from_labels(Asub, beta.source, at_one, name="end1")
    return _Arrows(j, j_sub, alpha, beta)


def _w_eq_arrows(n: int) -> _Arrows:
    """Delta[n] -> Delta[n+1] as the last face, restricted to dDelta[n] -> Lambda[n+1, n+1]."""
    cap = n + 1
    theta = tuple(range(n + 1))
    A, B = std_simplex(n, cap), std_simplex(n + 1, cap)
    Bsub = horn(n + 1, n + 1, cap)
    beta = inclusion(Bsub, B)
    j = operator_map(theta, A, B)
    if n == 0:
        alpha = _from_empty(A)
        j_sub = _from_empty(Bsub)
    else:
        Asub = boundary(n, cap)
        alpha = inclusion(Asub, A)
        j_sub = operator_map(theta, Asub, Bsub)
    return _Arrows(j, j_sub, alpha, beta)


def _criterion(
    name: str,
    arrows: Callable[[int], _Arrows],
    f: SimplicialMorphism,
    D: int,
    max_cells: int | None,
) -> CriterionReport:
    levels = []
    for n in range(D + 1):
        ar = arrows(n)
        n_squares = n_hit = 0
        witness = None
        for block in relative_squares(ar.j_sub, f, max_cells=max_cells):
            hit = squares_extend(ar.j, ar.alpha, ar.beta, block, max_cells=max_cells)
            n_squares += len(block)
            n_hit += int(hit.sum())
            if witness is None and not hit.all():
                witness = {"n": n, "unhit": block.describe(int(np.flatnonzero(~hit)[0]))}
        levels.append(LevelResult(n, n_hit == n_squares, n_squares, n_hit, witness))
        logger.debug("%s(%d) for %r: %d/%d", name, n, f, n_hit, n_squares)
    return CriterionReport(name, tuple(levels))


def weq_cover_certificate(f: SimplicialMorphism, D: int, *, max_cells: int | None = None) -> WeqCoverReport:
    """
    Surjectivity of the restriction maps of relative square sets for
    0 <= n <= D, in both the prism form and the horn form.
    """
    X, Y = f.source, f.target
    if D > X.cap or D + 1 > Y.cap:
        raise CapError(f"cover criteria up to {D} need source cap >= {D} and target cap >= {D + 1}")
    try:
        first = _criterion("first_step", _first_step_arrows, f, D, max_cells)
        second = _criterion("w_eq", _w_eq_arrows, f, D, max_cells)
    except EnumerationLimit as e:
        empty_report = CriterionReport("first_step", ())
        return WeqCoverReport(D, empty_report, CriterionReport("w_eq", ()), verdict="inconclusive", reason=str(e))
    verdict: Outcome = "pass" if first.ok and second.ok else "fail"
    reason = ""
    if first.ok != second.ok:
        reason = "criteria disagree"
    return WeqCoverReport(D, first, second, verdict=verdict, reason=reason)
