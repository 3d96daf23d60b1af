"""
Simplices of the integrated object: cdga maps C*(L) -> Omega(Delta[m]),
stored as one polynomial form per Chevalley-Eilenberg generator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from icfo.integration.forms import (
    DegreeCapExceeded,
    PolyForm,
    codegeneracy,
    coface,
    constant,
    pullback_simplex,
    zero_form,
)
from icfo.linfty.algebra import LieNAlgebra
from icfo.linfty.ce import CEAlgebra, ce_algebra
from icfo.linfty.graded import Poly
from icfo.linfty.morphisms import LInftyMorphism, MorphismError, check_morphism

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IntegrationSimplex:
    algebra: LieNAlgebra
    m: int
    assignment: tuple[PolyForm, ...]
    degcap: int = 3

    def __post_init__(self) -> None:
        L = self.algebra
        if self.m < 0:
            raise ValueError(f"simplex dimension must be non-negative, got {self.m}")
        if len(self.assignment) != L.size:
            raise ValueError(f"{len(self.assignment)} forms for {L.size} generators of {L!r}")
        for b, form in enumerate(self.assignment):
            if form.nvars != self.m:
                raise ValueError(f"form for {L.label(b)} lives on a chart of size {form.nvars}, not {self.m}")
            if not form.is_homogeneous(L.degree(b) + 1):
                raise ValueError(f"form for {L.label(b)} must have degree {L.degree(b) + 1}, got {sorted(form.degrees)}")
            form.check_cap(self.degcap, what=f"form for {L.label(b)}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegrationSimplex):
            return NotImplemented
        return self.algebra is other.algebra and self.m == other.m and self.assignment == other.assignment

    __hash__ = None  # type: ignore[assignment]

    def form(self, b: int) -> PolyForm:
        return self.assignment[b]


def zero_simplex(L: LieNAlgebra, m: int, *, degcap: int = 3) -> IntegrationSimplex:
    return IntegrationSimplex(L, m, tuple(zero_form(m) for _ in range(L.size)), degcap)


def simplex_from_forms(
    L: LieNAlgebra,
    m: int,
    forms: Mapping[int, PolyForm],
    *,
    degcap: int = 3,
) -> IntegrationSimplex:
    """Unlisted generators get the zero form."""
    return IntegrationSimplex(L, m, tuple(forms.get(b, zero_form(m)) for b in range(L.size)), degcap)


def evaluate_poly(poly: Poly, forms: Sequence[PolyForm], nvars: int) -> PolyForm:
    """The image of a CE polynomial under xi^b -> forms[b]."""
    out = zero_form(nvars)
    for mono, c in poly.items():
        acc = constant(nvars, c)
        for g in mono:
            acc = acc.wedge(forms[g])
            if acc.is_zero():
                break
        out = out + acc
    return out


@dataclass(frozen=True)
class SimplexReport:
    ok: bool
    generator: int | None = None
    lhs: PolyForm | None = None
    rhs: PolyForm | None = None

    def describe(self, L: LieNAlgebra) -> dict | None:
        if self.ok:
            return None
        return {"generator": L.label(self.generator), "d_omega": self.lhs.describe(), "image": self.rhs.describe()}


def validate_simplex(sigma: IntegrationSimplex, *, ce: CEAlgebra | None = None) -> SimplexReport:
    """d omega_a = omega(delta xi^a) for every generator."""
    ce = ce_algebra(sigma.algebra) if ce is None else ce
    for a in range(sigma.algebra.size):
        lhs = sigma.form(a).d()
        rhs = evaluate_poly(ce.d_generator(a), sigma.assignment, sigma.m)
        if lhs != rhs:
            logger.debug("simplex fails the Maurer-Cartan condition on %s", sigma.algebra.label(a))
            return SimplexReport(False, a, lhs, rhs)
    return SimplexReport(True)


def pullback(sigma: IntegrationSimplex, theta: Sequence[int]) -> IntegrationSimplex:
    """The simplex theta^* sigma for a monotone theta: [k] -> [m]."""
    if any(not 0 <= t <= sigma.m for t in theta):
        raise ValueError(f"{tuple(theta)} does not map into [{sigma.m}]")
    forms = tuple(pullback_simplex(f, theta) for f in sigma.assignment)
    # operators are affine, so the degree never grows
    return IntegrationSimplex(sigma.algebra, len(theta) - 1, forms, sigma.degcap)


def simplex_face(sigma: IntegrationSimplex, i: int) -> IntegrationSimplex:
    if not 0 <= i <= sigma.m or sigma.m == 0:
        raise ValueError(f"face {i} of a {sigma.m}-simplex")
    return pullback(sigma, coface(sigma.m, i))


def simplex_degeneracy(sigma: IntegrationSimplex, i: int) -> IntegrationSimplex:
    if not 0 <= i <= sigma.m:
        raise ValueError(f"degeneracy {i} of a {sigma.m}-simplex")
    return pullback(sigma, codegeneracy(sigma.m, i))


def integrate_morphism(
    phi: LInftyMorphism,
    sigma: IntegrationSimplex,
    *,
    degcap: int | None = None,
    check: bool = False,
) -> IntegrationSimplex:
    """sigma o phi^v: the image of sigma in the integration of phi's target."""
    if sigma.algebra is not phi.source:
        if (sigma.algebra.n, sigma.algebra.dims) != (phi.source.n, phi.source.dims):
            raise MorphismError(f"{sigma.algebra!r} is not the source of {phi!r}")
    if check and not check_morphism(phi).ok:
        raise MorphismError(f"{phi!r} is not an L-infinity morphism")
    cap = sigma.degcap if degcap is None else degcap
    forms = []
    for a in range(phi.target.size):
        form = evaluate_poly(phi.dual.get(a, {}), sigma.assignment, sigma.m)
        if form.poly_degree > cap:
            raise DegreeCapExceeded(
                f"image of {phi.target.label(a)} has polynomial degree {form.poly_degree} above degcap {cap}"
            )
        forms.append(form)
    return IntegrationSimplex(phi.target, sigma.m, tuple(forms), cap)


def with_degcap(sigma: IntegrationSimplex, degcap: int) -> IntegrationSimplex:
    return replace(sigma, degcap=degcap)


def identity_violations(sigma: IntegrationSimplex) -> list[str]:
    """Simplicial identities checked on sigma through the pullback action."""
    m = sigma.m
    out = []

    def same(a: IntegrationSimplex, b: IntegrationSimplex, what: str) -> None:
        if a != b:
            out.append(what)

    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            if m >= 2:
                same(
                    simplex_face(simplex_face(sigma, j), i),
                    simplex_face(simplex_face(sigma, i), j - 1),
                    f"d{i} d{j} = d{j - 1} d{i}",
                )
        s = simplex_degeneracy(sigma, i)
        same(simplex_face(s, i), sigma, f"d{i} s{i} = id")
        same(simplex_face(s, i + 1), sigma, f"d{i + 1} s{i} = id")
        for j in range(m + 1):
            if i <= j:
                same(
                    simplex_degeneracy(simplex_degeneracy(sigma, j), i),
                    simplex_degeneracy(simplex_degeneracy(sigma, i), j + 1),
                    f"s{i} s{j} = s{j + 1} s{i}",
                )
    return out

