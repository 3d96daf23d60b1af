from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from icfo.fibrant.factorization import Factorization, factorize
from icfo.fibrant.weq import WeqReport, is_weak_equivalence
from icfo.kan.checks import HypercoverReport, check_hypercover
from icfo.simplicial.constructions import pairing, product, product_projections
from icfo.simplicial.core import SimplicialMorphism, SimplicialSet

logger = logging.getLogger(__name__)


class NotAWeakEquivalence(ValueError):
    def __init__(self, f: SimplicialMorphism, report: WeqReport):
        self.report = report
        super().__init__(f"{f!r} is not a weak equivalence ({report.verdict}: {report.reason})")


@dataclass(frozen=True, eq=False)
class AcyclicSpan:
    """X <- Z -> Y with both legs hypercovers."""

    obj: SimplicialSet
    left: SimplicialMorphism
    right: SimplicialMorphism
    factorization: Factorization
    left_report: HypercoverReport | None = None
    right_report: HypercoverReport | None = None


@dataclass(frozen=True, eq=False)
class RoundedSpan:
    """X <- C' -> Y with a hypercover on the left and the unit i: C -> C'."""

    obj: SimplicialSet
    left: SimplicialMorphism
    right: SimplicialMorphism
    unit: SimplicialMorphism
    factorization: Factorization
    left_report: HypercoverReport | None = None
    unit_report: WeqReport | None = None


def _require_weq(f: SimplicialMorphism, D: int, max_cells: int | None) -> WeqReport:
    report = is_weak_equivalence(f, min(D + 1, f.cap), max_cells=max_cells)
    if not report.ok:
        raise NotAWeakEquivalence(f, report)
    return report


def acyclic_span(f: SimplicialMorphism, D: int, *, verify: bool = True, max_cells: int | None = None) -> AcyclicSpan:
    """Z = X x_Y Y^{Delta[1]} with legs pr: Z -> X and p: Z -> Y."""
    _require_weq(f, D, max_cells)
    F = factorize(f, D, max_cells=max_cells)
    left = replace(F.to_source, name="left")
    right = replace(F.p, name="right")
    reports = (None, None)
    if verify:
        reports = (check_hypercover(left, D, max_cells=max_cells), check_hypercover(right, D, max_cells=max_cells))
    return AcyclicSpan(F.M, left, right, F, *reports)


def round_span(
    w: SimplicialMorphism,
    g: SimplicialMorphism,
    D: int,
    *,
    verify: bool = True,
    max_cells: int | None = None,
) -> RoundedSpan:
    """
    X <-w- C -g-> Y becomes X <-f'- C' -g'-> Y by factoring (w, g): C -> X x Y;
    f' and g' are the two components of p and f' o i = w, g' o i = g.
    """
    if w.source is not g.source and w.source.sizes != g.source.sizes:
        raise ValueError("span legs must share their source")
    _require_weq(w, D, max_cells)
    X, Y = w.target, g.target
    XY = product(X, Y)
    pr_x, pr_y = product_projections(X, Y, XY)
    F = factorize(pairing(w, g, target=XY), D, max_cells=max_cells)
    left = replace(pr_x.compose(F.p), name="left")
    right = replace(pr_y.compose(F.p), name="right")
    left_report = unit_report = None
    if verify:
        left_report = check_hypercover(left, D, max_cells=max_cells)
        unit_report = is_weak_equivalence(F.i, D, max_cells=max_cells)
    logger.debug("rounded span through %r", F.M)
    return RoundedSpan(F.M, left, right, F.i, F, left_report, unit_report)
