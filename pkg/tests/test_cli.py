from __future__ import annotations

import json

import pytest

from icfo.cli.main import build_parser, run
from icfo.data.io import (
    dump_lie_algebra,
    dump_morphism,
    dump_simplex,
    dump_simplicial_set,
    read_json,
    write_json,
)
from icfo.integration.abelian import edge_with_period
from icfo.integration.forms import from_terms
from icfo.integration.simplices import IntegrationSimplex
from icfo.linfty.samples import line, perturbed_sl2, string_lie2
from icfo.simplicial.core import terminal_map
from icfo.simplicial.nerves import cyclic_group, nerve, pair_groupoid
from icfo.simplicial.shapes import boundary_inclusion


@pytest.fixture
def files(tmp_path):
    nz2 = nerve(cyclic_group(2), 3)
    L = line()
    payloads = {
        "nz2": dump_simplicial_set(nz2),
        "nz2_to_pt": dump_morphism(terminal_map(nz2)),
        "pair_to_pt": dump_morphism(terminal_map(nerve(pair_groupoid(2), 3))),
        "boundary": dump_morphism(boundary_inclusion(2)),
        "sl2_bad": dump_lie_algebra(perturbed_sl2()),
        "string": dump_lie_algebra(string_lie2()),
        "line": dump_lie_algebra(L),
        "edge5": dump_simplex(edge_with_period(L, [5])),
        "edge2": dump_simplex(edge_with_period(L, [2])),
        "edge3": dump_simplex(edge_with_period(L, [3])),
        "curved5": dump_simplex(IntegrationSimplex(L, 1, (from_terms(1, {(1,): {(1,): 10}}),))),
        "open": dump_simplex(IntegrationSimplex(L, 2, (from_terms(2, {(2,): {(1, 0): 1}}),))),
    }
    out = {}
    for name, payload in payloads.items():
        path = tmp_path / f"{name}.json"
        write_json(payload, path)
        out[name] = str(path)
    return out


def test_every_command_is_wired():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "cmd")
    assert set(sub.choices) == {
        "validate", "cert", "kan", "ngpd", "hypercover", "pullback", "pathobj", "factorize",
        "weq", "span", "round", "pi", "truncate", "linfty", "int", "corpus",
    }


def test_validate(files, capsys):
    code, report = run(["validate", files["nz2"]])
    assert code == 0
    assert report.details["kind"] == "simplicial_set"
    body = json.loads(capsys.readouterr().out)
    assert body["verdict"] == "pass"
    assert "timings" not in body


def test_validate_reports_pointer(files, tmp_path):
    payload = read_json(files["nz2"])
    payload["d"][1][0][1] = 9
    bad = tmp_path / "bad.json"
    write_json(payload, bad)
    code, report = run(["validate", str(bad)])
    assert code == 1
    assert report.witnesses[0]["pointer"] == "d[1][0][1]"


def test_validate_reports_identity_violations(files, tmp_path):
    payload = read_json(files["nz2"])
    # s_0 of the vertex must be the identity arrow
    payload["s"][0][0][0] = 1
    bad = tmp_path / "broken.json"
    write_json(payload, bad)
    code, report = run(["validate", str(bad)])
    assert code == 1
    assert all("identity" in w for w in report.witnesses)


def test_missing_file_is_an_input_error(tmp_path):
    code, report = run(["validate", str(tmp_path / "nope.json")])
    assert (code, report) == (2, None)


def test_wrong_kind_is_an_input_error(files):
    code, _ = run(["weq", files["nz2"]])
    assert code == 2


def test_out_document_and_stable_body(files, tmp_path, capsys):
    out = tmp_path / "report.json"
    run(["kan", files["nz2_to_pt"], "--cap", "2", "--out", str(out)])
    first = capsys.readouterr().out
    run(["kan", files["nz2_to_pt"], "--cap", "2"])
    assert capsys.readouterr().out == first
    doc = read_json(out)
    assert set(doc) == {"report", "sha256", "timings"}
    assert doc["report"] == json.loads(first)


def test_prism_certificate(tmp_path):
    emitted = tmp_path / "cert.json"
    code, report = run(["cert", "--prism", "boundary", "--n", "2", "--j", "1", "--emit", str(emitted)])
    assert code == 0
    assert report.details["top_cells"] == 3
    assert run(["cert", str(emitted)])[0] == 0
    assert run(["cert", "--prism", "horn"])[0] == 2


def test_kan_and_groupoid_verdicts(files):
    assert run(["kan", files["nz2"], "--cap", "2"])[0] == 0
    code, report = run(["kan", files["boundary"]])
    assert code == 1
    assert report.witnesses[0]["condition"].startswith("Kan(")
    assert run(["ngpd", files["nz2"], "--n", "1"])[0] == 0
    assert run(["ngpd", files["nz2"], "--n", "0", "--cap", "2"])[0] == 1


def test_hypercover(files):
    code, report = run(["hypercover", files["nz2_to_pt"]])
    assert code == 1
    assert report.witnesses[0]["condition"] == "Acyc(2)"
    assert run(["hypercover", files["pair_to_pt"]])[0] == 0


def test_weq_criteria(files):
    assert run(["weq", files["pair_to_pt"], "--criterion", "covers"])[0] == 0
    code, report = run(["weq", files["nz2_to_pt"], "--criterion", "stalkwise"])
    assert code == 1
    assert report.details["verdicts"] == {"stalkwise": "fail"}


def test_low_cap_is_inconclusive(files):
    code, report = run(["weq", files["nz2_to_pt"], "--criterion", "stalkwise", "--cap", "1", "--n", "1"])
    assert code == 3
    assert report.reason


def test_cap_error_is_inconclusive(files):
    # pi_2 needs simplices of dimension 3
    code, report = run(["pi", files["nz2"], "--n", "2", "--cap", "2"])
    assert code == 3
    assert report.reason


def test_pi(files):
    code, report = run(["pi", files["nz2"], "--n", "1", "--cap", "2"])
    assert code == 0
    assert report.details["order"] == 2


def test_linfty(files):
    assert run(["linfty", "check", files["string"]])[0] == 0
    code, report = run(["linfty", "check", files["sl2_bad"]])
    assert code == 1
    assert report.details == {"jacobi": False, "d_squared_zero": False}
    code, report = run(["linfty", "hom", files["string"]])
    assert report.details["dims"] == [3, 1]
    assert run(["linfty", "quasi", files["string"]])[0] == 2


def test_int_validate_and_period(files):
    assert run(["int", "validate", files["edge5"], "--identities"])[0] == 0
    code, report = run(["int", "period", files["edge5"]])
    assert report.details == {"period": ["5"]}
    assert run(["int", "validate", files["open"]])[0] == 1
    assert run(["int", "period", files["open"]])[0] == 1


def test_int_fill(files, tmp_path):
    filled = tmp_path / "filled.json"
    code, report = run(
        [
            "int", "fill", files["line"],
            "--m", "2", "--j", "1",
            "--face", f"0={files['edge3']}",
            "--face", f"2={files['edge2']}",
            "--emit", str(filled),
        ]
    )
    assert code == 0
    assert report.details["periods"] == [["3"], ["5"], ["2"]]
    assert run(["int", "period", str(filled)])[0] == 0


def test_int_witness(files):
    assert run(["int", "witness", files["edge5"], files["curved5"], "--n", "1"])[0] == 0
    code, report = run(["int", "witness", files["edge5"], files["edge3"], "--n", "1"])
    assert code == 3
    assert "no prism witness" in report.reason


@pytest.mark.slow
def test_corpus_command(tmp_path):
    code, report = run(["corpus", "--out-dir", str(tmp_path), "--random", "10", "--two-groupoids"])
    assert code == 0
    assert report.details["random"]["disagreements"] == 0
    assert report.details["random"]["inconclusive"] == 0
