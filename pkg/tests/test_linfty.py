from __future__ import annotations

import pytest

from icfo.linfty.algebra import JacobiError, LieNAlgebra, check_jacobi
from icfo.linfty.ce import ce_algebra, check_d_squared
from icfo.linfty.homology import h0_lie_algebra, homology, is_quasi_iso
from icfo.linfty.morphisms import (
    MorphismError,
    check_morphism,
    compose,
    equal_morphisms,
    identity_morphism,
)
from icfo.linfty.samples import (
    bracket_breaking,
    contractible,
    line,
    perturb,
    perturbation_slots,
    perturbed_sl2,
    random_chain_maps,
    random_perturbations,
    scaling,
    sl2,
    split_contractible,
    split_projection,
    string_lie2,
    string_projection,
    subalgebra_inclusion,
)
from icfo.linfty.tower import h0_comparison, tower, tower_morphism


def _is_lie(L: LieNAlgebra) -> bool:
    jacobi = check_jacobi(L).ok
    assert jacobi == check_d_squared(ce_algebra(L)).ok
    return jacobi


# structure checks

@pytest.mark.parametrize("make", [sl2, string_lie2, line, contractible, split_contractible])
def test_known_algebras_are_lie(make):
    L = make()
    assert check_jacobi(L).ok
    assert check_d_squared(ce_algebra(L)).ok


def test_perturbed_sl2_fails_with_witnesses():
    L = perturbed_sl2()
    report = check_jacobi(L)
    assert not report.ok
    assert report.arity == 3
    described = report.describe(L)
    assert set(described["inputs"]) == {"e", "f", "h"}
    assert described["value"]

    square = check_d_squared(ce_algebra(L))
    assert not square.ok
    assert square.value


def test_ce_generators_are_shifted():
    ce = ce_algebra(string_lie2())
    assert ce.n_generators == 4
    assert ce.degrees == (1, 1, 1, 2)
    # l_3 lands on c, so delta xi_c is cubic
    assert all(len(mono) == 3 for mono in ce.d_generator(3))


def test_single_constant_sl2_directions():
    L = sl2()
    slots = perturbation_slots(L)
    assert len(slots) == 9
    survivors = [s for s in slots if _is_lie(perturb(L, *s, 1))]
    # [e,f] along h, [h,e] along f and [h,f] along e
    assert len(survivors) == 3


@pytest.mark.parametrize("make", [sl2, string_lie2])
def test_jacobi_agrees_with_d_squared_on_random_perturbations(make):
    verdicts = [_is_lie(L) for L in random_perturbations(make(), 100, seed=0)]
    assert not all(verdicts)


def test_random_perturbations_are_seeded():
    a = [L.brackets for L in random_perturbations(sl2(), 5, seed=3)]
    b = [L.brackets for L in random_perturbations(sl2(), 5, seed=3)]
    assert a == b


def test_malformed_bracket_is_rejected():
    with pytest.raises(JacobiError):
        # repeated even input to an antisymmetric bracket
        LieNAlgebra(2, (1, 1), {2: {(0, 0): {1: 1}}}, None, "bad")
    with pytest.raises(JacobiError):
        # l_2 of two degree-0 elements lands in degree 0
        LieNAlgebra(2, (2, 1), {2: {(0, 1): {2: 1}}}, None, "bad")


# morphisms

def test_strict_morphisms():
    assert check_morphism(subalgebra_inclusion()).ok
    assert check_morphism(string_projection()).ok
    assert not check_morphism(bracket_breaking()).ok
    assert not check_morphism(scaling(sl2(), 2)).ok
    assert check_morphism(scaling(line(), 2)).ok


def test_compose_with_identity():
    phi = subalgebra_inclusion()
    assert equal_morphisms(compose(identity_morphism(phi.target), phi), phi)
    assert equal_morphisms(compose(phi, identity_morphism(phi.source)), phi)
    with pytest.raises(MorphismError):
        compose(phi, phi)


# homology

def test_homology_dims():
    assert homology(sl2()).dims == (3,)
    assert homology(string_lie2()).dims == (3, 1)
    assert homology(contractible()).dims == (0, 0)
    assert homology(split_contractible()).dims == (1, 0)


def test_quasi_isomorphisms():
    assert is_quasi_iso(split_projection()).ok
    report = is_quasi_iso(string_projection())
    assert not report.ok
    assert report.failed_degree == 1
    with pytest.raises(MorphismError):
        is_quasi_iso(bracket_breaking())


def test_h0_lie_algebra_of_string():
    H0 = h0_lie_algebra(string_lie2())
    assert H0.dims == (3,)
    assert check_jacobi(H0).ok
    assert H0.names == ("[e]", "[f]", "[h]")


# towers

def test_tower_labels():
    assert tower(string_lie2()).labels() == ["<=1", "<1", "<=0"]
    assert tower(sl2()).labels() == ["<=0"]


def test_tower_stages_are_lie():
    for stage in tower(split_contractible()).stages:
        assert check_jacobi(stage.algebra).ok


def test_tower_morphisms_of_random_chain_maps():
    for phi in random_chain_maps(20, seed=0):
        assert check_morphism(phi).ok
        assert tower_morphism(phi).commutes


def test_tower_morphism_of_string_projection():
    ladder = tower_morphism(string_projection())
    assert ladder.commutes
    assert len(ladder.components) == 3


def test_h0_comparison():
    assert is_quasi_iso(h0_comparison(sl2())).ok
    assert check_morphism(h0_comparison(split_contractible())).ok
