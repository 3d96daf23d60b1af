from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from icfo.corpus.random import random_composable_pair, random_morphisms, z2_cocycle_map
from icfo.fibrant.agreement import CRITERIA, AgreementReport, criteria_agree, hypercover_after_factorization
from icfo.fibrant.factorization import factorization_map, factorize
from icfo.fibrant.path_object import path_map, path_object, path_object_oracle
from icfo.fibrant.spans import NotAWeakEquivalence, acyclic_span, round_span
from icfo.fibrant.weq import is_weak_equivalence, weq_cover_certificate
from icfo.kan.checks import KanConditionError, check_hypercover, check_kan_all
from icfo.simplicial.core import INDEX, CapError, SimplicialMorphism, check_identities, identity, terminal_map
from icfo.simplicial.nerves import cyclic_group, eilenberg_maclane_z2_2, nerve, pair_groupoid, symmetric_group
from icfo.simplicial.shapes import boundary

CAP = 3


@pytest.fixture(scope="module")
def nz2():
    return nerve(cyclic_group(2), CAP)


@pytest.fixture(scope="module")
def pair2():
    return nerve(pair_groupoid(2), CAP)


def _same(f, g) -> bool:
    return all(np.array_equal(a, b) for a, b in zip(f.components, g.components))


# path objects

def test_path_object_levels_of_nerve(nz2):
    P = path_object(nz2, 2)
    # level 0 is X_1, level 1 the glued pairs of triangles
    assert P.obj.sizes[:2] == (2, 8)
    assert not check_identities(P.obj)
    for leg in (P.s0, P.d0, P.d1):
        assert not leg.violations()


def test_constant_paths_are_a_section(nz2):
    P = path_object(nz2, 2)
    assert _same(P.d0.compose(P.s0), identity(P.d0.target))
    assert _same(P.d1.compose(P.s0), identity(P.d1.target))


def test_path_object_matches_prism_maps(nz2):
    cmp = path_object_oracle(nz2, 2)
    assert cmp.agrees
    assert cmp.first_mismatch is None
    assert [a for a, b in cmp.levels] == [b for a, b in cmp.levels]


@pytest.mark.slow
@pytest.mark.parametrize(
    "make, D",
    [
        (lambda: nerve(cyclic_group(3), 3), 2),
        (lambda: nerve(symmetric_group(3), 3), 2),
        (lambda: eilenberg_maclane_z2_2(4), 3),
    ],
    ids=["z3", "s3", "k_z2_2"],
)
def test_path_object_oracle_on_larger_models(make, D):
    assert path_object_oracle(make(), D).agrees


def test_path_object_needs_cap_and_kan(nz2):
    with pytest.raises(CapError):
        path_object(nz2, CAP)
    with pytest.raises(KanConditionError):
        path_object(boundary(2, 3), 1, check=True)


def test_path_map_of_identity(nz2):
    P = path_object(nz2, 2)
    assert _same(path_map(identity(nz2), P, P), identity(P.obj))


# factorization

@pytest.mark.parametrize("make", [lambda X: terminal_map(X), lambda X: identity(X)])
def test_factorization_of_simple_maps(nz2, make):
    f = make(nz2)
    F = factorize(f, 2)
    assert _same(F.p.compose(F.i), F.f)
    assert check_kan_all(F.p, 2).ok
    assert check_hypercover(F.to_source, 2).ok
    assert not F.i.violations() and not F.p.violations()


def test_factorization_of_random_maps():
    rng = np.random.default_rng(7)
    for _ in range(5):
        f, _g = random_composable_pair(rng, CAP)
        F = factorize(f, 2)
        assert _same(F.p.compose(F.i), F.f)
        assert check_kan_all(F.p, 2).ok


@pytest.mark.slow
def test_factorization_of_fifty_random_maps():
    rng = np.random.default_rng(11)
    for _ in range(50):
        f, _g = random_composable_pair(rng, CAP)
        F = factorize(f, 2)
        assert _same(F.p.compose(F.i), F.f)
        assert check_kan_all(F.p, 2).ok
        assert check_hypercover(F.to_source, 2).ok


def test_factorization_is_functorial_in_identity_squares(pair2):
    F = factorize(terminal_map(pair2), 2)
    u, v = identity(F.f.source), identity(F.f.target)
    assert _same(factorization_map(F, F, u, v), identity(F.M))


def test_factorization_is_functorial_in_composable_squares():
    rng = np.random.default_rng(5)
    for _ in range(3):
        f, g = random_composable_pair(rng, CAP)
        F, G = factorize(f, 2), factorize(g, 2)
        # the square g o f = g o f, read as (u, v) = (f, g)
        M = factorization_map(F, G, f, g)
        assert not M.violations()
        assert _same(M.compose(F.i), G.i.compose(f))
        assert _same(G.p.compose(M), g.compose(F.p))


def test_factorization_keeps_the_full_map(nz2):
    f = terminal_map(nz2)
    F = factorize(f, 2)
    assert F.f is f
    assert F.M.cap == 2


def test_factorization_rejects_non_commuting_square(nz2):
    F = factorize(identity(nz2), 2)
    # everything to the degenerate simplices at the base vertex
    collapse = SimplicialMorphism(nz2, nz2, tuple(np.zeros(n, dtype=INDEX) for n in nz2.sizes))
    with pytest.raises(ValueError):
        factorization_map(F, F, identity(nz2), collapse)


# weak equivalences

def test_stalkwise_verdicts(nz2, pair2):
    assert is_weak_equivalence(terminal_map(pair2), CAP).verdict == "pass"
    report = is_weak_equivalence(terminal_map(nz2), CAP)
    assert report.verdict == "fail"
    assert report.reason.startswith("pi_1")
    assert is_weak_equivalence(identity(nz2), CAP).ok


def test_stalkwise_low_cap_is_inconclusive(nz2):
    report = is_weak_equivalence(terminal_map(nz2), 1, n=1)
    assert report.verdict == "inconclusive"
    assert report.reason


@pytest.mark.slow
def test_two_out_of_three_on_random_pairs():
    rng = np.random.default_rng(3)
    for _ in range(100):
        f, g = random_composable_pair(rng, CAP)
        verdicts = [is_weak_equivalence(h, CAP).ok for h in (f, g, g.compose(f))]
        # any two of the three force the third
        assert sum(verdicts) != 2


def test_cover_criteria_on_nerve_to_point(nz2):
    report = weq_cover_certificate(terminal_map(nz2), 2)
    assert report.verdict == "fail"
    assert report.agree
    assert report.first_step.first_failure.m == 2
    assert report.first_step.first_failure.witness is not None


def test_cover_criteria_on_contractible_groupoid(pair2):
    report = weq_cover_certificate(terminal_map(pair2), 2)
    assert report.verdict == "pass" and report.agree


def test_cover_criteria_need_target_room(nz2):
    with pytest.raises(CapError):
        weq_cover_certificate(terminal_map(nz2), CAP)


@pytest.mark.slow
def test_twisted_cocycle_map_is_not_a_weak_equivalence():
    f = z2_cocycle_map(4)
    report = criteria_agree(f, 3)
    assert report.verdicts() == {"stalkwise": "fail", "covers": "fail", "hypercover": "fail"}
    assert report.agree
    assert report.verdict == "fail"


# spans

def test_acyclic_span_of_weak_equivalence(pair2):
    span = acyclic_span(terminal_map(pair2), 2)
    assert span.left_report.ok and span.right_report.ok
    assert span.left.source is span.obj


def test_acyclic_span_rejects_non_weq(nz2):
    with pytest.raises(NotAWeakEquivalence) as info:
        acyclic_span(terminal_map(nz2), 2)
    assert info.value.report.verdict == "fail"


def test_round_span(pair2):
    w = terminal_map(pair2)
    g = identity(pair2)
    span = round_span(w, g, 2)
    assert span.left_report.ok
    assert span.unit_report.verdict == "pass"
    assert _same(span.left.compose(span.unit), terminal_map(span.unit.source))
    assert _same(span.right.compose(span.unit), identity(span.unit.source))


# agreement

def test_criteria_agree_on_fixed_maps(nz2, pair2):
    bad = criteria_agree(terminal_map(nz2), 2)
    assert bad.verdicts() == {"stalkwise": "fail", "covers": "fail", "hypercover": "fail"}
    good = criteria_agree(terminal_map(pair2), 2)
    assert good.verdict == "pass" and good.agree
    assert hypercover_after_factorization(terminal_map(pair2), 2).ok


def test_criteria_selection(nz2):
    report = criteria_agree(identity(nz2), 2, criteria=("covers",))
    assert set(report.verdicts()) == {"covers"}
    with pytest.raises(ValueError):
        criteria_agree(identity(nz2), 2, criteria=("bogus",))
    assert set(CRITERIA) == {"stalkwise", "covers", "hypercover"}


@pytest.mark.slow
def test_criteria_agree_on_seeded_random_maps():
    undecided, disagreements = [], []
    for sample in random_morphisms(100, seed=0, cap=CAP, two_groupoids=True):
        report = criteria_agree(sample.morphism, sample.morphism.cap - 1)
        if not report.conclusive:
            undecided.append((sample.name, report.verdicts()))
        elif not report.agree:
            disagreements.append((sample.name, report.verdicts()))
        else:
            assert report.verdict in ("pass", "fail")
    assert not undecided
    assert not disagreements


def test_inconclusive_criterion_breaks_agreement(pair2):
    good = criteria_agree(terminal_map(pair2), 2)
    stuck = replace(good, covers=replace(good.covers, verdict="inconclusive", reason="over budget"))
    assert stuck.verdicts()["covers"] == "inconclusive"
    assert not stuck.conclusive and not stuck.agree
    assert stuck.verdict == "inconclusive"
    assert not AgreementReport(2).agree
    assert AgreementReport(2).verdict == "inconclusive"
