"""
The bundled corpus: small named instances together with the checks they are
known to pass or fail.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from icfo.fibrant.weq import Outcome, is_weak_equivalence
from icfo.integration.abelian import edge_period, edge_with_period, fill_horn_abelian, period_defect
from icfo.integration.forms import from_terms
from icfo.integration.simplices import IntegrationSimplex, simplex_face, validate_simplex
from icfo.kan.checks import check_hypercover, check_kan_all, is_n_groupoid
from icfo.linfty.algebra import LieNAlgebra, check_jacobi
from icfo.linfty.ce import ce_algebra, check_d_squared
from icfo.linfty.homology import is_quasi_iso
from icfo.linfty.morphisms import LInftyMorphism, check_morphism
from icfo.linfty.samples import line, perturbed_sl2, sl2, string_lie2, string_projection
from icfo.homotopy.groups import pi_n
from icfo.simplicial.core import SimplicialMorphism, SimplicialSet, terminal_map
from icfo.simplicial.nerves import (
    FiniteGroup,
    cyclic_group,
    eilenberg_maclane_z2_2,
    groups_isomorphic,
    nerve,
    pair_groupoid,
    symmetric_group,
    trivial_group,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    verdict: Outcome
    levels: int = 0
    witness: dict | None = None


@dataclass(frozen=True)
class CorpusCheck:
    name: str
    expected: Outcome
    run: Callable[[Any, int], CheckResult]


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str
    build: Callable[[int], Any]
    checks: tuple[CorpusCheck, ...]


def cell_count(obj: Any) -> int:
    if isinstance(obj, SimplicialSet):
        return int(sum(obj.sizes))
    if isinstance(obj, SimplicialMorphism):
        return cell_count(obj.source) + cell_count(obj.target)
    if isinstance(obj, LieNAlgebra):
        return obj.size
    if isinstance(obj, LInftyMorphism):
        return obj.source.size + obj.target.size
    if isinstance(obj, IntegrationSimplex):
        return sum(len(f.terms) for f in obj.assignment)
    raise TypeError(f"no cell count for {type(obj).__name__}")


def _verdict(ok: bool) -> Outcome:
    return "pass" if ok else "fail"


# checks on simplicial sets and maps

def _groupoid_check(n: int) -> Callable[[SimplicialSet, int], CheckResult]:
    def run(X: SimplicialSet, cap: int) -> CheckResult:
        report = is_n_groupoid(X, n, cap)
        witness = None
        if report.failure is not None:
            witness = {"m": report.failure.m, "j": report.failure.j, "verdict": report.failure.verdict}
        return CheckResult(_verdict(report.ok), cap, witness)

    return run


def _pi_check(n: int, group: FiniteGroup) -> Callable[[SimplicialSet, int], CheckResult]:
    def run(X: SimplicialSet, cap: int) -> CheckResult:
        G = pi_n(X, 0, n)
        ok = groups_isomorphic(G.as_group(), group)
        witness = None if ok else {"order": G.order, "expected_order": group.order}
        return CheckResult(_verdict(ok), n + 1, witness)

    return run


def _kan_check(f: SimplicialMorphism, cap: int) -> CheckResult:
    report = check_kan_all(f, cap)
    bad = report.first_failure
    return CheckResult(_verdict(report.ok), cap, None if bad is None else bad.witness)


def _hypercover_check(f: SimplicialMorphism, cap: int) -> CheckResult:
    report = check_hypercover(f, cap)
    bad = report.first_failure
    return CheckResult(_verdict(report.ok), cap + 1, None if bad is None else bad.witness)


def _weq_check(f: SimplicialMorphism, cap: int) -> CheckResult:
    report = is_weak_equivalence(f, cap)
    witness = None if report.ok else {"reason": report.reason}
    return CheckResult(report.verdict, cap, witness)


# checks on Lie n-algebras and morphisms

def _jacobi_check(L: LieNAlgebra, cap: int) -> CheckResult:
    report = check_jacobi(L)
    return CheckResult(_verdict(report.ok), L.n, report.describe(L))


def _d_squared_check(L: LieNAlgebra, cap: int) -> CheckResult:
    ce = ce_algebra(L)
    report = check_d_squared(ce)
    witness = None if report.ok else {"generator": L.label(report.generator), "value": ce.describe(report.value)}
    return CheckResult(_verdict(report.ok), L.n, witness)


def _morphism_check(phi: LInftyMorphism, cap: int) -> CheckResult:
    report = check_morphism(phi)
    witness = None if report.ok else {"generator": phi.target.label(report.generator)}
    return CheckResult(_verdict(report.ok), phi.source.n, witness)


def _quasi_iso_check(phi: LInftyMorphism, cap: int) -> CheckResult:
    report = is_quasi_iso(phi)
    witness = None
    if not report.ok:
        witness = {
            "degree": report.failed_degree,
            "source_homology": list(report.source_dims),
            "target_homology": list(report.target_dims),
        }
    return CheckResult(_verdict(report.ok), phi.source.n, witness)


# checks on integration simplices

def _simplex_check(sigma: IntegrationSimplex, cap: int) -> CheckResult:
    report = validate_simplex(sigma)
    return CheckResult(_verdict(report.ok), sigma.m, report.describe(sigma.algebra))


def _period_check(expected: Fraction) -> Callable[[IntegrationSimplex, int], CheckResult]:
    def run(sigma: IntegrationSimplex, cap: int) -> CheckResult:
        long_edge = edge_period(simplex_face(sigma, 1))
        defect = period_defect(sigma)
        ok = long_edge == [expected] and not any(defect)
        witness = None if ok else {"period": [str(p) for p in long_edge], "defect": [str(p) for p in defect]}
        return CheckResult(_verdict(ok), sigma.m, witness)

    return run


# builders

def nerve_z2_to_point(cap: int) -> SimplicialMorphism:
    return terminal_map(nerve(cyclic_group(2), cap))


def pair_to_point(cap: int) -> SimplicialMorphism:
    return terminal_map(nerve(pair_groupoid(2), cap))


def line_edge(cap: int) -> IntegrationSimplex:
    return edge_with_period(line(), [2])


def filled_triangle(cap: int) -> IntegrationSimplex:
    """The Lambda[2, 1] filler over Q for edges with periods 2 (0 -> 1) and 3 (1 -> 2)."""
    L = line()
    faces = {2: edge_with_period(L, [2]), 0: edge_with_period(L, [3])}
    return fill_horn_abelian(L, 2, 1, faces)


def open_triangle(cap: int) -> IntegrationSimplex:
    """x_1 dx_2 over Q: not closed, so not Maurer-Cartan."""
    L = line()
    return IntegrationSimplex(L, 2, (from_terms(2, {(2,): {(1, 0): 1}}),))


def _groupoid_checks(group: FiniteGroup, *, objects: int = 1) -> tuple[CorpusCheck, ...]:
    discrete = group.order == 1 and objects == 1
    return (
        CorpusCheck("ngpd1", "pass", _groupoid_check(1)),
        CorpusCheck("ngpd0", "pass" if discrete else "fail", _groupoid_check(0)),
        CorpusCheck("pi1", "pass", _pi_check(1, group)),
    )


def bundled_instances() -> tuple[Instance, ...]:
    z2, z3, s3 = cyclic_group(2), cyclic_group(3), symmetric_group(3)
    return (
        Instance("nerve_z2", "simplicial_set", lambda cap: nerve(z2, cap), _groupoid_checks(z2)),
        Instance("nerve_z3", "simplicial_set", lambda cap: nerve(z3, cap), _groupoid_checks(z3)),
        Instance("nerve_s3", "simplicial_set", lambda cap: nerve(s3, cap), _groupoid_checks(s3)),
        Instance(
            "pair3",
            "simplicial_set",
            lambda cap: nerve(pair_groupoid(3), cap),
            _groupoid_checks(trivial_group(), objects=3),
        ),
        Instance(
            "k_z2_2",
            "simplicial_set",
            eilenberg_maclane_z2_2,
            (
                CorpusCheck("ngpd2", "pass", _groupoid_check(2)),
                CorpusCheck("ngpd1", "fail", _groupoid_check(1)),
                CorpusCheck("pi1", "pass", _pi_check(1, trivial_group())),
                CorpusCheck("pi2", "pass", _pi_check(2, z2)),
            ),
        ),
        Instance(
            "nerve_z2_to_point",
            "morphism",
            nerve_z2_to_point,
            (
                CorpusCheck("kan", "pass", _kan_check),
                CorpusCheck("hypercover", "fail", _hypercover_check),
                CorpusCheck("weq", "fail", _weq_check),
            ),
        ),
        Instance(
            "pair2_to_point",
            "morphism",
            pair_to_point,
            (
                CorpusCheck("kan", "pass", _kan_check),
                CorpusCheck("hypercover", "pass", _hypercover_check),
                CorpusCheck("weq", "pass", _weq_check),
            ),
        ),
        Instance(
            "sl2",
            "lie_algebra",
            lambda cap: sl2(),
            (CorpusCheck("jacobi", "pass", _jacobi_check), CorpusCheck("d_squared", "pass", _d_squared_check)),
        ),
        Instance(
            "sl2_perturbed",
            "lie_algebra",
            lambda cap: perturbed_sl2(),
            (CorpusCheck("jacobi", "fail", _jacobi_check), CorpusCheck("d_squared", "fail", _d_squared_check)),
        ),
        Instance(
            "string_sl2",
            "lie_algebra",
            lambda cap: string_lie2(),
            (CorpusCheck("jacobi", "pass", _jacobi_check), CorpusCheck("d_squared", "pass", _d_squared_check)),
        ),
        Instance(
            "string_projection",
            "linfty_morphism",
            lambda cap: string_projection(),
            (CorpusCheck("morphism", "pass", _morphism_check), CorpusCheck("quasi_iso", "fail", _quasi_iso_check)),
        ),
        Instance("line_edge", "simplex", line_edge, (CorpusCheck("mc", "pass", _simplex_check),)),
        Instance(
            "line_triangle",
            "simplex",
            filled_triangle,
            (CorpusCheck("mc", "pass", _simplex_check), CorpusCheck("period", "pass", _period_check(Fraction(5)))),
        ),
        Instance("open_triangle", "simplex", open_triangle, (CorpusCheck("mc", "fail", _simplex_check),)),
    )


def get_instance(name: str) -> Instance:
    for inst in bundled_instances():
        if inst.name == name:
            return inst
    raise KeyError(f"no bundled instance named {name!r}")
