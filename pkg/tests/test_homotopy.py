from __future__ import annotations

import pytest

from icfo.homotopy.groups import (
    group_axiom_violations,
    homotopy_groups,
    induced_map,
    is_isomorphism_of_tables,
    pi0,
    pi0_map,
    pi_n,
)
from icfo.homotopy.truncation import collapsed_prism, truncate
from icfo.simplicial.core import CapError, check_identities, identity, terminal_map
from icfo.simplicial.nerves import (
    cyclic_group,
    disjoint_groupoid,
    eilenberg_maclane_z2_2,
    group_groupoid,
    groups_isomorphic,
    nerve,
    pair_groupoid,
    symmetric_group,
    trivial_group,
)


def test_pi0_counts_components():
    X = nerve(disjoint_groupoid(pair_groupoid(2), group_groupoid(cyclic_group(2))), 2)
    comps = pi0(X)
    assert len(comps) == 2
    assert comps.representatives == (0, 2)
    assert comps.class_of[:3] == (0, 0, 1)
    assert pi0_map(terminal_map(X), comps) == (0, 0)


def test_pi0_of_pair_groupoid_is_a_point():
    assert len(pi0(nerve(pair_groupoid(3), 1))) == 1


@pytest.mark.parametrize("G", [cyclic_group(2), cyclic_group(3), symmetric_group(3)])
def test_pi1_of_group_nerve(G):
    pi1 = pi_n(nerve(G, 2), 0, 1)
    assert pi1.order == G.order
    assert pi1.identity == 0
    assert not group_axiom_violations(pi1.table)
    assert groups_isomorphic(pi1.as_group(), G)


def test_pi1_of_z3_table():
    pi1 = pi_n(nerve(cyclic_group(3), 2), 0, 1)
    # each edge is its own class, and the generator has order 3
    assert all(len(c) == 1 for c in pi1.classes)
    a = 1
    assert pi1.table[pi1.table[a][a]][a] == 0


def test_pi1_of_pair_groupoid_is_trivial():
    pi1 = pi_n(nerve(pair_groupoid(3), 2), 1, 1)
    assert pi1.is_trivial()
    assert pi1.basepoint == 1


def test_k_z2_2_groups():
    K = eilenberg_maclane_z2_2(3)
    assert pi_n(K, 0, 1).is_trivial()
    pi2 = pi_n(K, 0, 2)
    assert pi2.order == 2
    assert groups_isomorphic(pi2.as_group(), cyclic_group(2))


def test_homotopy_groups_at_every_component():
    X = nerve(disjoint_groupoid(group_groupoid(cyclic_group(3)), group_groupoid(trivial_group())), 2)
    groups = homotopy_groups(X, 1)
    assert [G.order for G in groups[1]] == [3, 1]


def test_pi_n_argument_checks():
    X = nerve(cyclic_group(2), 2)
    with pytest.raises(ValueError):
        pi_n(X, 0, 0)
    with pytest.raises(ValueError):
        pi_n(X, 5, 1)
    with pytest.raises(CapError):
        pi_n(X, 0, 2)


def test_identity_induces_identity_on_pi1():
    X = nerve(cyclic_group(3), 2)
    G = pi_n(X, 0, 1)
    phi = induced_map(identity(X), G, G)
    assert phi == (0, 1, 2)
    assert is_isomorphism_of_tables(phi, G.table, G.table)


def test_collapsed_prism_ends():
    P, end0, end1 = collapsed_prism(2, 1)
    assert not check_identities(P)
    assert not end0.violations() and not end1.violations()
    # vertices are collapsed, so both ends agree on them
    assert (end0.components[0] == end1.components[0]).all()


def test_truncating_a_nerve_to_degree_zero():
    q = truncate(nerve(cyclic_group(2), 3), 0, 2)
    assert q.target.sizes == (1, 1, 1)
    assert q.is_surjective()


def test_degree_one_truncation_keeps_a_nerve():
    X = nerve(cyclic_group(2), 3)
    q = truncate(X, 1, 2)
    assert q.target.sizes == X.sizes[:3]
    assert q.is_isomorphism()


def test_degree_one_truncation_kills_pi2():
    q = truncate(eilenberg_maclane_z2_2(3), 1, 2)
    assert q.target.sizes == (1, 1, 1)


def test_truncation_component_counts():
    X = nerve(disjoint_groupoid(pair_groupoid(2), group_groupoid(cyclic_group(2))), 3)
    q = truncate(X, 0, 2)
    assert q.target.sizes[0] == len(pi0(X))


def test_truncation_needs_room():
    with pytest.raises(CapError):
        truncate(nerve(cyclic_group(2), 1), 0, 1)
    with pytest.raises(ValueError):
        truncate(nerve(cyclic_group(2), 3), -1, 2)
