from __future__ import annotations

import logging

from icfo.kan.checks import KanConditionError, check_kan_all
from icfo.simplicial.constructions import FiberProduct, fiber_product
from icfo.simplicial.core import SimplicialMorphism

logger = logging.getLogger(__name__)


def pullback_along_fibration(
    f: SimplicialMorphism,
    g: SimplicialMorphism,
    D: int,
    *,
    check: bool = True,
    max_cells: int | None = None,
) -> FiberProduct:
    """
    Z x_Y X for a Kan fibration f: X -> Y and any g: Z -> Y. The result's
    `left` leg is the projection to X and `right` the projection to Z.
    """
    if check:
        report = check_kan_all(f, D, max_cells=max_cells)
        if not report.ok:
            bad = report.first_failure
            raise KanConditionError(f"{f!r} is not a Kan fibration: Kan({bad.m},{bad.j}) fails")
    fp = fiber_product(f, g)
    logger.debug("pullback of %r along %r has sizes %s", f, g, list(fp.obj.sizes))
    return fp
