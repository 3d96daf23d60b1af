from __future__ import annotations

from dataclasses import replace

import pytest

from icfo.extension.certificate import (
    Step,
    compose_certificates,
    face_inclusion_cert,
    identity_certificate,
    verify_certificate,
)
from icfo.extension.prism import (
    boundary_prism_cert,
    check_filtration,
    horn_prism_cert,
    prism,
    prism_cell,
    prism_triangulation,
)
from icfo.simplicial.nerves import cyclic_group, nerve

PRISM_CASES = [(n, j) for n in range(1, 4) for j in range(n + 1)]
SLOW_PRISM_CASES = [pytest.param(4, j, marks=pytest.mark.slow) for j in range(5)]


def test_prism_triangulation_has_n_plus_one_cells():
    P = prism(2)
    tops = prism_triangulation(2, P)
    assert len(set(tops)) == 3
    assert len(P.nondegenerate(3)) == 3
    assert P.label(3, tops[1]) == prism_cell(2, 1)


@pytest.mark.parametrize("n, j", PRISM_CASES + SLOW_PRISM_CASES)
def test_boundary_prism_certificate_verifies(n, j):
    pc = boundary_prism_cert(n, j)
    assert not check_filtration(pc.filtration)
    report = verify_certificate(pc.certificate)
    assert report.ok, report.reason
    assert report.steps_replayed == len(pc.certificate)
    assert report.isomorphism.is_isomorphism()
    assert len(pc.filtration.top_cells) == n + 1


@pytest.mark.parametrize("n, j", PRISM_CASES + SLOW_PRISM_CASES)
def test_horn_prism_certificate_verifies(n, j):
    pc = horn_prism_cert(n, j)
    report = verify_certificate(pc.certificate)
    assert report.ok, report.reason
    # the two ends come first
    assert [s.m for s in pc.certificate.steps[:2]] == [n, n]


def test_prism_filtration_stages_grow():
    filt = boundary_prism_cert(2, 1).filtration
    counts = filt.stage_counts()
    assert len(counts) == 4
    tops = [c[3] for c in counts]
    assert tops == sorted(tops)
    assert tops[-1] == prism(2).sizes[3]


# ("x", l, horn) attaches x_l; ("y", l, face, horn) attaches that face of x_l first
FILTRATION_ORDERS = {
    (2, 0): [("x", 0, 1), ("y", 1, 0, 1), ("x", 1, 2), ("x", 2, 0)],
    (2, 1): [("y", 0, 2, 1), ("x", 0, 1), ("x", 1, 2), ("x", 2, 1)],
    (2, 2): [("x", 2, 2), ("y", 1, 3, 1), ("x", 1, 1), ("x", 0, 3)],
    (3, 0): [("x", 0, 1), ("y", 1, 0, 1), ("x", 1, 2), ("y", 2, 0, 2), ("x", 2, 3), ("x", 3, 0)],
    (3, 1): [("y", 0, 2, 1), ("x", 0, 1), ("x", 1, 2), ("y", 2, 1, 2), ("x", 2, 3), ("x", 3, 1)],
    (3, 2): [("y", 0, 3, 1), ("x", 0, 1), ("y", 1, 3, 2), ("x", 1, 2), ("x", 2, 3), ("x", 3, 2)],
    (3, 3): [("x", 3, 3), ("y", 2, 4, 2), ("x", 2, 2), ("y", 1, 4, 1), ("x", 1, 1), ("x", 0, 4)],
}


@pytest.mark.parametrize("n, j", sorted(FILTRATION_ORDERS))
def test_boundary_prism_steps_follow_the_explicit_order(n, j):
    P = prism(n)
    tops = prism_triangulation(n, P)
    expected = []
    for entry in FILTRATION_ORDERS[(n, j)]:
        if entry[0] == "x":
            _, l, k = entry
            expected.append((n + 1, k, P.label(n + 1, tops[l])))
        else:
            _, l, face, k = entry
            expected.append((n, k, P.label(n, int(P.faces[n + 1][face][tops[l]]))))
    steps = boundary_prism_cert(n, j).certificate.steps
    assert [(s.m, s.j, P.label(s.m, s.filler)) for s in steps] == expected


def test_horn_prism_steps_continue_with_the_explicit_order():
    P = prism(3)
    boundary_steps = boundary_prism_cert(3, 1).certificate.steps
    horn_steps = horn_prism_cert(3, 1).certificate.steps
    assert [s.as_tuple() for s in horn_steps[2:]] == [s.as_tuple() for s in boundary_steps]
    assert [P.label(3, s.filler)[1] for s in horn_steps[:2]] == [(0,) * 4, (1,) * 4]


def test_check_filtration_rejects_reordered_stages():
    filt = boundary_prism_cert(2, 1).filtration
    swapped = replace(filt, order=(filt.order[1], filt.order[0]) + filt.order[2:])
    assert check_filtration(swapped)
    wrong_horn = replace(filt, order=(replace(filt.order[0], x_horn=0),) + filt.order[1:])
    assert any("along" in p for p in check_filtration(wrong_horn))


@pytest.mark.parametrize("n, j", [(0, 0), (2, 3)])
def test_prism_certificate_rejects_bad_range(n, j):
    with pytest.raises(ValueError):
        boundary_prism_cert(n, j)


def test_identity_certificate():
    report = verify_certificate(identity_certificate(nerve(cyclic_group(2), 2)))
    assert report.ok and report.steps_replayed == 0


@pytest.mark.parametrize("k, n", [(0, 1), (0, 2), (1, 2), (1, 3)])
def test_face_inclusion_certificate(k, n):
    assert verify_certificate(face_inclusion_cert(k, n)).ok


def test_truncated_certificate_reports_missing_simplices():
    cert = boundary_prism_cert(1, 0).certificate
    short = replace(cert, steps=cert.steps[:-1])
    report = verify_certificate(short)
    assert not report.ok
    assert report.failed_step == len(short)
    assert "misses" in report.reason
    assert "first_missing" in report.witness


def test_repeated_filler_is_rejected():
    cert = face_inclusion_cert(0, 2)
    twice = replace(cert, steps=(cert.steps[0],) + cert.steps)
    report = verify_certificate(twice)
    assert not report.ok
    assert report.failed_step == 1
    assert "already present" in report.reason


def test_step_with_missing_face_is_rejected():
    cert = face_inclusion_cert(0, 2)
    # the last fill is the top triangle; its faces are not there yet
    bad = replace(cert, steps=(cert.steps[-1],))
    report = verify_certificate(bad)
    assert not report.ok
    assert report.failed_step == 0
    assert "missing" in report.reason


def test_out_of_range_step():
    cert = face_inclusion_cert(0, 1)
    bad = replace(cert, steps=(Step(5, 0, 0),))
    report = verify_certificate(bad)
    assert not report.ok and "out of range" in report.reason


def test_compose_certificates():
    first = face_inclusion_cert(0, 1, cap=2)
    second = face_inclusion_cert(1, 2, cap=2)
    both = compose_certificates(first, second)
    assert len(both) == len(first) + len(second)
    assert verify_certificate(both).ok
