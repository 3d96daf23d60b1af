from __future__ import annotations

import numpy as np
import pytest

from icfo.kan.checks import (
    KanConditionError,
    acyclic_cover,
    check_hypercover,
    check_kan,
    check_kan_all,
    detect_groupoid_level,
    find_filler,
    find_fillers,
    has_horn_fillers,
    is_n_groupoid,
    relative_horn,
)
from icfo.kan.pullback import pullback_along_fibration
from icfo.kan.site import is_cover, is_epimorphism, is_local_surjection, is_stalkwise_surjection
from icfo.simplicial.core import CapError, identity, terminal_map
from icfo.simplicial.hom import EnumerationLimit, hom_enumerate
from icfo.simplicial.nerves import (
    cyclic_group,
    eilenberg_maclane_z2_2,
    nerve,
    pair_groupoid,
    symmetric_group,
)
from icfo.simplicial.shapes import boundary, boundary_inclusion, horn, std_simplex


@pytest.fixture(scope="module")
def nz2():
    return nerve(cyclic_group(2), 3)


@pytest.fixture(scope="module")
def k22():
    return eilenberg_maclane_z2_2(3)


@pytest.mark.parametrize("G", [cyclic_group(2), cyclic_group(3), symmetric_group(3)])
def test_group_nerve_is_a_one_groupoid(G):
    report = is_n_groupoid(nerve(G, 3), 1, 3)
    assert report.ok
    assert all(r.verdict == "unique" for r in report.results if r.m >= 2)


def test_group_nerve_is_not_discrete(nz2):
    report = is_n_groupoid(nz2, 0, 2)
    assert not report.ok
    assert (report.failure.m, report.failure.verdict) == (1, "cover")


def test_k_z2_2_is_a_two_groupoid_but_not_one(k22):
    assert is_n_groupoid(k22, 2, 3).ok
    report = is_n_groupoid(k22, 1, 3)
    assert not report.ok
    assert report.failure.m == 2
    assert detect_groupoid_level(k22, 3) == 2


def test_n_groupoid_needs_cap(nz2):
    with pytest.raises(CapError):
        is_n_groupoid(nz2, 1, 4)


def test_kan_result_counts(nz2):
    r = check_kan(terminal_map(nz2), 2, 1)
    # a Lambda[2,1] in N(Z/2) is a pair of arrows, filled by their composite
    assert (r.verdict, r.n_squares, r.n_simplices) == ("unique", 4, 4)


def test_non_kan_inclusion_has_witness():
    f = boundary_inclusion(2)
    report = check_kan_all(f, 2)
    assert not report.ok
    bad = report.first_failure
    assert bad.m == 2
    assert bad.witness["unfilled_horn"]["source_part"]


def test_check_kan_rejects_bad_indices(nz2):
    with pytest.raises(ValueError):
        check_kan(terminal_map(nz2), 1, 2)


def test_hypercover_of_nerve_to_point_fails_at_two(nz2):
    report = check_hypercover(terminal_map(nz2), 3)
    assert not report.ok
    bad = report.first_failure
    assert bad.m == 2
    # of the 8 boundary triangles only the 4 cocycles are filled
    assert (bad.n_squares, bad.n_hit) == (8, 4)
    assert bad.witness is not None


def test_acyclic_cover_is_counted_fiber_by_fiber(nz2):
    f = terminal_map(nz2)
    with pytest.raises(EnumerationLimit):
        hom_enumerate(boundary(2), nz2, max_cells=24)
    cover = acyclic_cover(f, 2, max_cells=24)
    assert (cover.n_squares, cover.n_hit, cover.n_simplices) == (8, 4, 4)
    assert not cover.surjective
    assert cover.unhit["source_part"]


def test_relative_horn_of_a_nerve_is_bijective(nz2):
    cover = relative_horn(terminal_map(nz2), 3, 1)
    assert cover.bijective
    assert cover.n_simplices == nz2.sizes[3]


def test_contractible_groupoid_is_a_hypercover():
    report = check_hypercover(terminal_map(nerve(pair_groupoid(2), 3)), 3)
    assert report.ok and report.first_failure is None


def test_k_z2_2_to_point_fails_acyclicity_at_three(k22):
    report = check_hypercover(terminal_map(k22), 3)
    assert [lv.surjective for lv in report.levels] == [True, True, True, False]


def test_identity_is_a_hypercover(nz2):
    assert check_hypercover(identity(nz2), 3).ok


def test_horn_fillers_in_a_nerve(nz2):
    assert has_horn_fillers(nz2, 2, 0)
    assert has_horn_fillers(nz2, 3, 1)
    assert not has_horn_fillers(horn(2, 1, 2), 2, 1)


def test_find_fillers(nz2):
    # d_0 and d_2 of the triangle (g, h) are h and g
    z = find_filler(nz2, 2, 1, {0: 1, 2: 1})
    assert z is not None
    assert nz2.faces[2][1][z] == 0
    assert len(find_fillers(nz2, 2, 1, {0: 1, 2: 1})) == 1
    with pytest.raises(ValueError):
        find_fillers(nz2, 2, 1, {0: 1})


def test_pullback_along_kan_fibration(nz2):
    f = terminal_map(nerve(pair_groupoid(2), 3))
    g = terminal_map(nz2)
    fp = pullback_along_fibration(f, g, 3)
    assert fp.obj.sizes == tuple(a * b for a, b in zip(f.source.sizes, nz2.sizes))
    assert fp.left.source is fp.obj


def test_pullback_along_non_fibration_raises():
    with pytest.raises(KanConditionError):
        pullback_along_fibration(boundary_inclusion(2), identity(std_simplex(2)), 2)


def test_cover_notions_agree(nz2):
    for f in (terminal_map(nz2), boundary_inclusion(2), identity(nz2)):
        expected = is_cover(f)
        assert is_epimorphism(f) == expected
        assert is_local_surjection(f) == expected
        assert is_stalkwise_surjection(f) == expected
    assert is_cover(terminal_map(nz2))
    assert not is_cover(boundary_inclusion(2))
    assert np.all(terminal_map(nz2).components[0] == 0)


def test_isomorphisms_are_acyclic_fibrations(nz2):
    f = identity(nz2)
    assert check_kan_all(f, 3).ok
    assert check_hypercover(f, 3).ok


def test_pullback_of_a_hypercover_is_a_hypercover(nz2):
    f = terminal_map(nerve(pair_groupoid(2), 3))
    fp = pullback_along_fibration(f, terminal_map(nz2), 3)
    assert check_hypercover(fp.right, 3).ok
