from __future__ import annotations

import logging
from dataclasses import dataclass

from icfo.fibrant.factorization import factorize
from icfo.fibrant.weq import Outcome, WeqCoverReport, WeqReport, is_weak_equivalence, weq_cover_certificate
from icfo.kan.checks import HypercoverReport, check_hypercover
from icfo.simplicial.core import CapError, SimplicialMorphism
from icfo.simplicial.hom import EnumerationLimit

logger = logging.getLogger(__name__)

CRITERIA = ("stalkwise", "covers", "hypercover")


@dataclass(frozen=True)
class AgreementReport:
    """The three weak-equivalence criteria evaluated on one map."""

    D: int
    stalkwise: WeqReport | None = None
    covers: WeqCoverReport | None = None
    hypercover: HypercoverReport | None = None
    hypercover_reason: str = ""

    def verdicts(self) -> dict[str, Outcome]:
        out: dict[str, Outcome] = {}
        if self.stalkwise is not None:
            out["stalkwise"] = self.stalkwise.verdict
        if self.covers is not None:
            out["covers"] = self.covers.verdict
        if self.hypercover is not None:
            out["hypercover"] = "pass" if self.hypercover.ok else "fail"
        elif self.hypercover_reason:
            out["hypercover"] = "inconclusive"
        return out

    @property
    def conclusive(self) -> bool:
        values = self.verdicts().values()
        return bool(values) and "inconclusive" not in values

    @property
    def agree(self) -> bool:
        """All criteria that ran reached the same decided verdict; an inconclusive one never agrees."""
        both_forms = self.covers is None or self.covers.agree
        return self.conclusive and len(set(self.verdicts().values())) == 1 and both_forms

    @property
    def verdict(self) -> Outcome:
        if not self.conclusive:
            return "inconclusive"
        if not self.agree:
            return "fail"
        return next(iter(self.verdicts().values()))


def hypercover_after_factorization(
    f: SimplicialMorphism,
    D: int,
    *,
    max_cells: int | None = None,
) -> HypercoverReport:
    """Factor f = p o i and test p for acyclicity up to D."""
    F = factorize(f, D, max_cells=max_cells)
    return check_hypercover(F.p, D, max_cells=max_cells)


def criteria_agree(
    f: SimplicialMorphism,
    D: int,
    *,
    criteria: tuple[str, ...] = CRITERIA,
    max_cells: int | None = None,
) -> AgreementReport:
    """
    Covers and the factorization test run up to D; the stalkwise test runs up
    to D + 1 when the caps allow it, since it needs one level above n.
    """
    unknown = set(criteria) - set(CRITERIA)
    if unknown:
        raise ValueError(f"unknown criteria {sorted(unknown)} (valid: {list(CRITERIA)})")
    if f.target.cap < D + 1:
        raise CapError(f"weak-equivalence criteria up to {D} need target cap >= {D + 1}, have {f.target.cap}")

    stalkwise = covers = hyper = None
    reason = ""
    if "stalkwise" in criteria:
        stalkwise = is_weak_equivalence(f, min(D + 1, f.cap), max_cells=max_cells)
    if "covers" in criteria:
        covers = weq_cover_certificate(f, D, max_cells=max_cells)
    if "hypercover" in criteria:
        try:
            hyper = hypercover_after_factorization(f, D, max_cells=max_cells)
        except EnumerationLimit as e:
            reason = str(e)
    report = AgreementReport(D, stalkwise, covers, hyper, reason)
    if not report.conclusive:
        logger.warning("weak-equivalence criteria undecided on %r: %s", f, report.verdicts())
    elif not report.agree:
        logger.warning("weak-equivalence criteria disagree on %r: %s", f, report.verdicts())
    return report
