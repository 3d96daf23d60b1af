from __future__ import annotations

from dataclasses import replace
from math import comb

import numpy as np
import pytest

from icfo.simplicial.constructions import fiber_product, product, product_map, restrict_cap, skeleton
from icfo.simplicial.core import (
    INDEX,
    CapError,
    SimplicialIdentityError,
    SimplicialMorphism,
    check_identities,
    from_arrays,
    identity,
    point,
    terminal_map,
    truncate_cap,
)
from icfo.simplicial.hom import EnumerationLimit, extendable, extensions, hom_enumerate, hom_of
from icfo.simplicial.nerves import (
    cyclic_group,
    eilenberg_maclane_z2_2,
    group_homomorphisms,
    groups_isomorphic,
    nerve,
    pair_groupoid,
    symmetric_group,
)
from icfo.simplicial.shapes import (
    boundary,
    cyl_sphere,
    horn,
    horn_inclusion,
    sphere,
    std_simplex,
)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_std_simplex_level_sizes(n):
    D = std_simplex(n, cap=n + 2)
    for m in range(D.cap + 1):
        assert D.sizes[m] == comb(n + m + 1, m + 1)
    assert not check_identities(D)
    assert D.dim == n


def test_boundary_and_horn_sizes():
    dD = boundary(2)
    # everything but the top triangle
    assert dD.sizes == (3, 6, 9)
    L = horn(2, 1)
    # drops every simplex containing both 0 and 2
    assert L.sizes == (3, 5, 7)
    assert L.dim == 1
    assert not check_identities(L)


def test_horn_inclusion_is_injective():
    inc = horn_inclusion(3, 1)
    assert inc.is_injective()
    assert not inc.is_surjective()
    assert not inc.violations()


@pytest.mark.parametrize("G, order", [(cyclic_group(2), 2), (cyclic_group(3), 3), (symmetric_group(3), 6)])
def test_group_nerve_levels(G, order):
    N = nerve(G, 3)
    assert N.sizes == tuple(order**m for m in range(4))
    assert not check_identities(N)


def test_pair_groupoid_nerve_levels():
    N = nerve(pair_groupoid(3), 2)
    assert N.sizes == (3, 9, 27)


def test_k_z2_2_levels():
    K = eilenberg_maclane_z2_2(4)
    assert K.sizes == tuple(2 ** comb(m, 2) for m in range(5))
    assert not check_identities(K)


def test_from_arrays_rejects_broken_identity():
    # two vertices degenerating to one edge breaks d_0 s_0 = id
    good = from_arrays(1, [1, 1], [[], [[0], [0]]], [[[0]]])
    assert good.sizes == (1, 1)
    with pytest.raises(SimplicialIdentityError) as info:
        from_arrays(1, [2, 1], [[], [[0], [1]]], [[[0, 0]]])
    assert info.value.violations
    assert any(v.identity == "d_0 s_0 = id" for v in info.value.violations)


def test_morphism_violations_and_checked():
    X = nerve(cyclic_group(2), 2)
    f = identity(X).checked()
    assert f.is_isomorphism()

    comps = [c.copy() for c in f.components]
    comps[1] = np.zeros_like(comps[1])
    bad = SimplicialMorphism(X, X, tuple(comps))
    with pytest.raises(SimplicialIdentityError):
        bad.checked()


def test_compose_with_terminal_map():
    X = nerve(cyclic_group(3), 2)
    g = terminal_map(X)
    h = identity(g.target)
    assert np.array_equal(h.compose(g).components[2], np.zeros(9))


def test_truncate_and_restrict_cap():
    X = nerve(cyclic_group(2), 3)
    Y = truncate_cap(X, 1)
    assert Y.cap == 1 and Y.sizes == (1, 2)
    with pytest.raises(CapError):
        truncate_cap(Y, 2)
    f = restrict_cap(terminal_map(X), 2)
    assert f.cap == 2


def test_product_and_fiber_product_over_point():
    A, B = nerve(cyclic_group(2), 2), nerve(cyclic_group(3), 2)
    P = product(A, B)
    assert P.sizes == tuple(a * b for a, b in zip(A.sizes, B.sizes))
    assert not check_identities(P)

    fp = fiber_product(terminal_map(A), terminal_map(B))
    assert fp.obj.sizes == P.sizes
    assert not fp.left.violations() and not fp.right.violations()


def test_product_map():
    A, B = nerve(cyclic_group(2), 2), nerve(cyclic_group(3), 2)
    f = product_map(identity(A), identity(B))
    assert all((c == np.arange(n)).all() for c, n in zip(f.components, f.source.sizes))
    g = product_map(terminal_map(A), identity(B))
    assert g.target.sizes == B.sizes
    assert not g.violations()


def test_pushout_glues_boundary_to_point():
    S2 = sphere(2)
    # one vertex, one degenerate edge, the triangle plus degeneracies
    assert S2.sizes[0] == 1
    assert len(S2.nondegenerate(2)) == 1
    assert len(S2.nondegenerate(1)) == 0
    assert not check_identities(S2)


def test_cylinder_legs():
    cyl = cyl_sphere(1)
    assert not cyl.i0.violations() and not cyl.i1.violations()
    assert cyl.i0.target is cyl.obj or cyl.i0.target.sizes == cyl.obj.sizes


def test_skeleton_of_simplex():
    inc = skeleton(std_simplex(2), 1)
    assert inc.source.dim == 1
    assert inc.is_injective()


def test_hom_from_simplex_reads_levels():
    X = nerve(cyclic_group(3), 2)
    H = hom_of(std_simplex(2), X)
    assert len(H) == X.sizes[2]


def test_hom_from_horn_counts_compatible_pairs():
    X = nerve(cyclic_group(2), 2)
    # a map from Lambda[2,1] is a pair of composable arrows
    H = hom_enumerate(horn(2, 1), X)
    assert len(H) == 4
    for k in range(len(H)):
        assert not H.morphism(k).violations()


def test_hom_enumeration_limit():
    X = nerve(symmetric_group(3), 2)
    with pytest.raises(EnumerationLimit) as info:
        hom_enumerate(boundary(2), X, max_cells=10)
    assert info.value.limit == 10


def test_extensions_stream_within_a_small_budget():
    X = nerve(cyclic_group(2), 2)
    K = horn(2, 1)
    with pytest.raises(EnumerationLimit):
        hom_enumerate(K, X, max_cells=12)
    start = np.full((1, 5), -1, dtype=INDEX)
    blocks = list(extensions(K, X, start, max_cells=12))
    assert len(blocks) > 1
    rows = np.concatenate([b for _, b in blocks])
    assert len(np.unique(rows, axis=0)) == 4
    assert all((origin == 0).all() for origin, _ in blocks)
    # a single partial map that cannot grow within budget still raises
    with pytest.raises(EnumerationLimit):
        list(extensions(K, X, start, max_cells=4))


def test_extendable_marks_partial_maps():
    X = nerve(cyclic_group(2), 2)
    K = boundary(2)
    H = hom_enumerate(K, X)
    # fix the three edges; only the cocycles (d1 = d0 + d2) fill a triangle
    start = H.images.copy()
    assert extendable(K, X, start).all()
    filled = extendable(std_simplex(2), X, np.concatenate([start, np.full((len(start), 1), -1)], axis=1))
    assert filled.sum() == 4


def test_hom_of_uses_the_simplex_flag_not_the_name():
    X = nerve(cyclic_group(2), 2)
    assert std_simplex(2).simplex == 2
    assert truncate_cap(std_simplex(2), 1).simplex is None
    disguised = replace(boundary(2), name="Delta[2]")
    assert disguised.simplex is None
    assert len(hom_of(disguised, X)) == 8
    assert len(hom_of(std_simplex(2), X)) == X.sizes[2]


def test_group_homomorphisms_and_isomorphism():
    Z2, Z3 = cyclic_group(2), cyclic_group(3)
    assert len(group_homomorphisms(Z2, Z2)) == 2
    assert len(group_homomorphisms(Z2, Z3)) == 1
    assert groups_isomorphic(Z3, cyclic_group(3))
    assert not groups_isomorphic(Z2, Z3)


def test_point_is_terminal():
    pt = point(3)
    assert pt.sizes == (1, 1, 1, 1)
    assert terminal_map(pt).is_isomorphism()
