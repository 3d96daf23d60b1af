"""
Horn filling, edge periods and truncation witnesses for abelian L.

With l_k = 0 for k >= 2 the Maurer-Cartan condition d omega = omega(delta xi)
is linear, so fillers and homotopies are found by one exact linear solve over
the coefficients of polynomial forms of bounded degree.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from icfo.integration.forms import (
    PolyForm,
    coface,
    constant,
    from_terms,
    integrate_interval,
    pullback_simplex,
    variable,
    zero_form,
)
from icfo.integration.simplices import (
    IntegrationSimplex,
    evaluate_poly,
    simplex_face,
    validate_simplex,
)
from icfo.linfty.algebra import LieNAlgebra
from icfo.linfty.ce import CEAlgebra, ce_algebra
from icfo.linfty.linalg import solve

logger = logging.getLogger(__name__)


class IncompatibleFaces(ValueError):
    """Horn or witness data that cannot be the boundary of anything."""


class InfeasibleFilling(RuntimeError):
    """The linear system has no solution even at the raised degree cap."""


def is_abelian(L: LieNAlgebra) -> bool:
    return all(not table for k, table in L.brackets.items() if k >= 2)


def _require_abelian(L: LieNAlgebra) -> None:
    if not is_abelian(L):
        raise ValueError(f"{L!r} has brackets of arity >= 2; only abelian algebras are filled")


def _exponents(nvars: int, degcap: int) -> list[tuple[int, ...]]:
    if nvars == 0:
        return [()]
    out = []
    for head in range(degcap + 1):
        for tail in _exponents(nvars - 1, degcap - head):
            out.append((head,) + tail)
    return out


Restriction = tuple[str, Callable[[PolyForm], PolyForm], Sequence[PolyForm]]


def _flatten(tag: tuple, form: PolyForm, out: dict[tuple, Fraction], coeff: Fraction = Fraction(1)) -> None:
    for key, exps, c in form.items():
        slot = tag + (key, exps)
        out[slot] = out.get(slot, Fraction(0)) + coeff * c


def solve_assignment(
    L: LieNAlgebra,
    nvars: int,
    degcap: int,
    restrictions: Sequence[Restriction],
    *,
    ce: CEAlgebra | None = None,
) -> tuple[PolyForm, ...] | None:
    """
    Forms omega_b of polynomial degree <= degcap on a chart of nvars
    coordinates with d omega = omega(delta xi) and every restriction matching.
    """
    ce = ce_algebra(L) if ce is None else ce
    unknowns = []
    for b in range(L.size):
        p = L.degree(b) + 1
        for key in combinations(range(1, nvars + 1), p):
            for exps in _exponents(nvars, degcap):
                unknowns.append((b, key, exps))

    linear = {a: {mono[0]: c for mono, c in ce.d_generator(a).items()} for a in range(L.size)}
    columns: list[dict[tuple, Fraction]] = []
    for b, key, exps in unknowns:
        omega = from_terms(nvars, {key: {exps: 1}})
        col: dict[tuple, Fraction] = {}
        _flatten(("mc", b), omega.d(), col)
        for a in range(L.size):
            c = linear[a].get(b)
            if c:
                _flatten(("mc", a), omega, col, -c)
        for tag, fn, _ in restrictions:
            _flatten(("res", tag, b), fn(omega), col)
        columns.append(col)

    rhs: dict[tuple, Fraction] = {}
    for tag, _, targets in restrictions:
        for b, form in enumerate(targets):
            _flatten(("res", tag, b), form, rhs)

    rows = sorted({k for col in columns for k in col} | set(rhs), key=repr)
    index = {k: r for r, k in enumerate(rows)}
    A = [[Fraction(0)] * len(unknowns) for _ in rows]
    for u, col in enumerate(columns):
        for k, c in col.items():
            A[index[k]][u] = c
    b_vec = [rhs.get(k, Fraction(0)) for k in rows]
    logger.debug("abelian solve: %d unknowns, %d equations at degcap %d", len(unknowns), len(rows), degcap)
    if not unknowns:
        return tuple(zero_form(nvars) for _ in range(L.size)) if not any(b_vec) else None
    x = solve(A, b_vec, len(unknowns))
    if x is None:
        return None
    forms: list[dict] = [{} for _ in range(L.size)]
    for (b, key, exps), c in zip(unknowns, x):
        if c:
            forms[b].setdefault(key, {})[exps] = c
    return tuple(from_terms(nvars, f) for f in forms)


def _caps(degcap: int) -> list[int]:
    return [degcap, 2 * degcap]


# horns

def check_horn(L: LieNAlgebra, m: int, j: int, faces: Mapping[int, IntegrationSimplex]) -> None:
    if m < 1 or not 0 <= j <= m:
        raise ValueError(f"no horn ({m}, {j})")
    want = set(range(m + 1)) - {j}
    if set(faces) != want:
        raise IncompatibleFaces(f"horn ({m}, {j}) needs faces {sorted(want)}, got {sorted(faces)}")
    ce = ce_algebra(L)
    for i, face in faces.items():
        if face.m != m - 1:
            raise IncompatibleFaces(f"face {i} has dimension {face.m}, expected {m - 1}")
        if (face.algebra.n, face.algebra.dims) != (L.n, L.dims):
            raise IncompatibleFaces(f"face {i} lives over {face.algebra!r}, not {L!r}")
        if not validate_simplex(face, ce=ce).ok:
            raise IncompatibleFaces(f"face {i} fails the Maurer-Cartan condition")
    if m < 2:
        return
    for i, k in combinations(sorted(faces), 2):
        # d_i d_k = d_{k-1} d_i for i < k
        if simplex_face(faces[k], i).assignment != simplex_face(faces[i], k - 1).assignment:
            raise IncompatibleFaces(f"faces {i} and {k} disagree on their common face")


def fill_horn_abelian(
    L: LieNAlgebra,
    m: int,
    j: int,
    faces: Mapping[int, IntegrationSimplex],
    *,
    degcap: int | None = None,
) -> IntegrationSimplex:
    """An m-simplex whose faces other than j are the given ones."""
    _require_abelian(L)
    check_horn(L, m, j, faces)
    cap = degcap if degcap is not None else max((f.degcap for f in faces.values()), default=3)
    ce = ce_algebra(L)
    restrictions: list[Restriction] = [
        (f"d{i}", (lambda theta: lambda w: pullback_simplex(w, theta))(coface(m, i)), face.assignment)
        for i, face in sorted(faces.items())
    ]
    for c in _caps(cap):
        forms = solve_assignment(L, m, c, restrictions, ce=ce)
        if forms is not None:
            logger.debug("filled horn (%d, %d) at degcap %d", m, j, c)
            return IntegrationSimplex(L, m, forms, c)
    raise InfeasibleFilling(f"horn ({m}, {j}) over {L!r} has no filler of degree <= {2 * cap}")


# periods

def edge_period(sigma: IntegrationSimplex) -> list[Fraction]:
    """Integrals over the edge of the forms attached to degree-0 generators."""
    L = sigma.algebra
    _require_abelian(L)
    if sigma.m != 1:
        raise ValueError(f"periods are defined on edges, got a {sigma.m}-simplex")
    return [integrate_interval(sigma.form(b)) for b in L.basis_in_degree(0)]


def period_defect(sigma: IntegrationSimplex) -> list[Fraction]:
    """sum_i (-1)^i period(d_i sigma) for a 2-simplex; zero when the 1-forms are closed."""
    if sigma.m != 2:
        raise ValueError(f"period defect needs a 2-simplex, got dimension {sigma.m}")
    total = [Fraction(0)] * sigma.algebra.dims[0]
    for i in range(3):
        sign = -1 if i % 2 else 1
        for k, p in enumerate(edge_period(simplex_face(sigma, i))):
            total[k] += sign * p
    return total


def edge_with_period(L: LieNAlgebra, periods: Sequence, *, degcap: int = 3) -> IntegrationSimplex:
    """The edge with constant 1-forms a_b dt_1 for the degree-0 generators."""
    forms = [zero_form(1) for _ in range(L.size)]
    for b, a in zip(L.basis_in_degree(0), periods):
        forms[b] = from_terms(1, {(1,): {(0,): a}})
    return IntegrationSimplex(L, 1, tuple(forms), degcap)


# truncation witnesses on the prism Delta[1] x Delta[m], chart (u, t_1..t_m)

@dataclass(frozen=True, eq=False)
class PrismWitness:
    algebra: LieNAlgebra
    m: int
    assignment: tuple[PolyForm, ...]
    degcap: int = 3

    def __post_init__(self) -> None:
        L = self.algebra
        if len(self.assignment) != L.size:
            raise ValueError(f"{len(self.assignment)} forms for {L.size} generators")
        for b, form in enumerate(self.assignment):
            if form.nvars != self.m + 1 or not form.is_homogeneous(L.degree(b) + 1):
                raise ValueError(f"form for {L.label(b)} is not a degree {L.degree(b) + 1} form on the prism")


def _end(m: int, c: int) -> list[PolyForm]:
    return [constant(m, c)] + [variable(m, i) for i in range(1, m + 1)]


def _prism_face(m: int, S: Sequence[int]) -> list[PolyForm]:
    """id x (vertex inclusion S): Delta[1] x Delta[s] -> Delta[1] x Delta[m]."""
    s = len(S) - 1
    nv = s + 1

    def bary(j: int) -> PolyForm:
        if j == 0:
            out = constant(nv, 1)
            for k in range(1, s + 1):
                out = out - variable(nv, 1 + k)
            return out
        return variable(nv, 1 + j)

    images = [variable(nv, 1)]
    for i in range(1, m + 1):
        acc = zero_form(nv)
        for j, v in enumerate(S):
            if v == i:
                acc = acc + bary(j)
        images.append(acc)
    return images


def _projection(s: int) -> list[PolyForm]:
    """Delta[1] x Delta[s] -> Delta[s]."""
    return [variable(s + 1, 1 + j) for j in range(1, s + 1)]


def _skeleton(m: int, n: int) -> list[tuple[int, ...]]:
    return [S for size in range(1, min(n, m + 1) + 1) for S in combinations(range(m + 1), size)]


def _witness_restrictions(sigma: IntegrationSimplex, sigma2: IntegrationSimplex, n: int) -> list[Restriction]:
    m = sigma.m
    out: list[Restriction] = [
        ("end0", lambda w: w.pullback(_end(m, 0), nvars=m), sigma.assignment),
        ("end1", lambda w: w.pullback(_end(m, 1), nvars=m), sigma2.assignment),
    ]
    for S in _skeleton(m, n):
        s = len(S) - 1
        along = tuple(pullback_simplex(f, S).pullback(_projection(s), nvars=s + 1) for f in sigma.assignment)
        out.append((f"face{S}", (lambda imgs, nv: lambda w: w.pullback(imgs, nvars=nv))(_prism_face(m, S), s + 1), along))
    return out


def constant_witness(sigma: IntegrationSimplex) -> PrismWitness:
    m = sigma.m
    proj = [variable(m + 1, 1 + i) for i in range(1, m + 1)]
    forms = tuple(f.pullback(proj, nvars=m + 1) for f in sigma.assignment)
    return PrismWitness(sigma.algebra, m, forms, sigma.degcap)


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    failure: str | None = None


def check_homotopy_witness(
    sigma: IntegrationSimplex,
    sigma2: IntegrationSimplex,
    witness: PrismWitness,
    n: int,
) -> WitnessReport:
    """
    witness is a Maurer-Cartan assignment on the prism with ends sigma and
    sigma2 that is constant along every face of dimension < n.
    """
    L = witness.algebra
    if sigma.m != sigma2.m or sigma.m != witness.m:
        raise ValueError(f"dimensions {sigma.m}, {sigma2.m} and witness {witness.m} differ")
    ce = ce_algebra(L)
    nv = witness.m + 1
    for a in range(L.size):
        if witness.assignment[a].d() != evaluate_poly(ce.d_generator(a), witness.assignment, nv):
            return WitnessReport(False, f"Maurer-Cartan condition on {L.label(a)}")
    for tag, fn, targets in _witness_restrictions(sigma, sigma2, n):
        got = tuple(fn(w) for w in witness.assignment)
        if got != tuple(targets):
            logger.debug("witness restriction %s does not match", tag)
            return WitnessReport(False, f"restriction {tag}")
    return WitnessReport(True)


def find_homotopy_witness(
    sigma: IntegrationSimplex,
    sigma2: IntegrationSimplex,
    n: int,
    *,
    degcap: int | None = None,
) -> PrismWitness | None:
    L = sigma.algebra
    _require_abelian(L)
    if sigma.m != sigma2.m:
        raise ValueError(f"simplices of dimensions {sigma.m} and {sigma2.m}")
    cap = degcap if degcap is not None else max(sigma.degcap, sigma2.degcap)
    restrictions = _witness_restrictions(sigma, sigma2, n)
    ce = ce_algebra(L)
    for c in _caps(cap + 1):
        forms = solve_assignment(L, sigma.m + 1, c, restrictions, ce=ce)
        if forms is not None:
            return PrismWitness(L, sigma.m, forms, c)
    return None
