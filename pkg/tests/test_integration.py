from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from icfo.integration.abelian import (
    IncompatibleFaces,
    InfeasibleFilling,
    check_homotopy_witness,
    constant_witness,
    edge_period,
    edge_with_period,
    fill_horn_abelian,
    find_homotopy_witness,
    period_defect,
)
from icfo.integration.forms import DegreeCapExceeded, from_terms, integrate_interval
from icfo.integration.simplices import (
    IntegrationSimplex,
    identity_violations,
    integrate_morphism,
    simplex_degeneracy,
    simplex_face,
    validate_simplex,
    zero_simplex,
)
from icfo.linfty.morphisms import MorphismError, compose
from icfo.linfty.samples import bracket_breaking, line, random_chain_maps, scaling, sl2


@pytest.fixture(scope="module")
def L():
    return line()


def _edge(L, form):
    return IntegrationSimplex(L, 1, (form,))


def _triangle(L, a, b):
    """The filler of the horn with d_2 of period a and d_0 of period b."""
    return fill_horn_abelian(L, 2, 1, {0: edge_with_period(L, [b]), 2: edge_with_period(L, [a])})


# simplices

def test_constant_edge_is_maurer_cartan(L):
    edge = edge_with_period(L, [5])
    assert validate_simplex(edge).ok
    assert edge_period(edge) == [Fraction(5)]
    assert not identity_violations(edge)


def test_filled_triangle_adds_periods(L):
    T = _triangle(L, 2, 3)
    assert validate_simplex(T).ok
    assert edge_period(simplex_face(T, 1)) == [Fraction(5)]
    assert period_defect(T) == [Fraction(0)]
    assert not identity_violations(T)


def test_non_closed_triangle_fails(L):
    # t_1 dt_2 has d = dt_1 ^ dt_2
    T = IntegrationSimplex(L, 2, (from_terms(2, {(2,): {(1, 0): 1}}),))
    report = validate_simplex(T)
    assert not report.ok
    assert report.describe(L)["generator"] == "c"
    assert any(period_defect(T))


def test_faces_and_degeneracies(L):
    edge = _edge(L, from_terms(1, {(1,): {(1,): 2}}))
    assert integrate_interval(edge.form(0)) == 1
    assert simplex_face(edge, 0).m == 0
    s = simplex_degeneracy(edge, 0)
    assert s.m == 2
    assert simplex_face(s, 0) == edge and simplex_face(s, 1) == edge
    with pytest.raises(ValueError):
        simplex_face(edge, 2)


def test_simplex_rejects_bad_forms(L):
    with pytest.raises(ValueError):
        # a 0-form where a 1-form is needed
        IntegrationSimplex(L, 1, (from_terms(1, {(): {(1,): 1}}),))
    with pytest.raises(DegreeCapExceeded):
        _edge(L, from_terms(1, {(1,): {(5,): 1}}))


def test_integrate_morphism(L):
    image = integrate_morphism(scaling(L, 2), edge_with_period(L, [5]), check=True)
    assert edge_period(image) == [Fraction(10)]
    assert validate_simplex(image).ok


def test_integrate_morphism_checks_source(L):
    with pytest.raises(MorphismError):
        integrate_morphism(scaling(sl2(), 1), edge_with_period(L, [1]))
    S = zero_simplex(sl2(), 1)
    with pytest.raises(MorphismError):
        integrate_morphism(bracket_breaking(), S, check=True)


# horn filling

def test_horn_filler_restricts_to_faces(L):
    faces = {0: edge_with_period(L, [1]), 1: edge_with_period(L, [4])}
    T = fill_horn_abelian(L, 2, 2, faces)
    assert simplex_face(T, 0) == faces[0]
    assert simplex_face(T, 1) == faces[1]
    assert edge_period(simplex_face(T, 2)) == [Fraction(3)]


def test_incompatible_faces_of_a_tetrahedron_horn(L):
    zero = zero_simplex(L, 2)
    # d_2 of this triangle has period 1, d_2 of the zero triangle has period 0
    T = _triangle(L, 1, 0)
    with pytest.raises(IncompatibleFaces):
        fill_horn_abelian(L, 3, 1, {0: zero, 2: T, 3: zero})
    assert fill_horn_abelian(L, 3, 1, {0: zero, 2: zero, 3: zero}).m == 3


def test_horn_needs_all_other_faces(L):
    with pytest.raises(IncompatibleFaces):
        fill_horn_abelian(L, 2, 1, {0: edge_with_period(L, [1])})
    with pytest.raises(ValueError):
        fill_horn_abelian(sl2(), 2, 1, {0: zero_simplex(sl2(), 1), 2: zero_simplex(sl2(), 1)})


def test_filling_beyond_the_degree_cap(L):
    curved = _edge(L, from_terms(1, {(1,): {(1,): 1}}))
    with pytest.raises(InfeasibleFilling):
        fill_horn_abelian(L, 2, 1, {0: curved, 2: edge_with_period(L, [0])}, degcap=0)
    assert fill_horn_abelian(L, 2, 1, {0: curved, 2: edge_with_period(L, [0])}).m == 2


# truncation witnesses

def test_constant_witness(L):
    edge = edge_with_period(L, [5])
    assert check_homotopy_witness(edge, edge, constant_witness(edge), 1).ok


def test_witness_between_edges_with_equal_periods(L):
    straight = edge_with_period(L, [5])
    curved = _edge(L, from_terms(1, {(1,): {(1,): 10}}))
    w = find_homotopy_witness(straight, curved, 1)
    assert w is not None
    assert check_homotopy_witness(straight, curved, w, 1).ok
    # fixing the whole edge leaves no room to move
    assert find_homotopy_witness(straight, curved, 2) is None


def test_no_witness_between_different_periods(L):
    a, b = edge_with_period(L, [5]), edge_with_period(L, [3])
    assert find_homotopy_witness(a, b, 1) is None
    report = check_homotopy_witness(a, b, constant_witness(a), 1)
    assert not report.ok
    assert report.failure == "restriction end1"


# functoriality

def _random_simplex(rng, L, m=2):
    forms = []
    for b in range(L.size):
        keys = [(i,) for i in range(1, m + 1)] if L.degree(b) == 0 else [(1, 2)]
        terms = {}
        for key in keys:
            exps = [tuple(int(e) for e in rng.integers(0, 2, size=m)) for _ in range(2)]
            terms[key] = {e: int(rng.integers(-3, 4)) for e in exps}
        forms.append(from_terms(m, terms))
    return IntegrationSimplex(L, m, tuple(forms))


def test_integrate_morphism_is_functorial():
    rng = np.random.default_rng(0)
    for phi in random_chain_maps(20, seed=1):
        psi = scaling(phi.target, 3)
        sigma = _random_simplex(rng, phi.source)
        image = integrate_morphism(phi, sigma)
        assert integrate_morphism(compose(psi, phi), sigma) == integrate_morphism(psi, image)
        for i in range(3):
            assert simplex_face(image, i) == integrate_morphism(phi, simplex_face(sigma, i))
        assert simplex_degeneracy(image, 0) == integrate_morphism(phi, simplex_degeneracy(sigma, 0))
        assert not identity_violations(image)
