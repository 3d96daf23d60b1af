from __future__ import annotations

from fractions import Fraction

import pandas as pd
import pytest

from icfo.data.io import (
    canonical_json,
    dump_certificate,
    dump_lie_algebra,
    dump_linfty_morphism,
    dump_morphism,
    dump_simplex,
    dump_simplicial_set,
    dump_witness,
    load_any,
    load_lie_algebra,
    load_linfty_morphism,
    load_morphism,
    load_simplex,
    load_simplicial_set,
    read_json,
    read_parquet,
    sha256_of,
    write_json,
    write_parquet,
)
from icfo.data.schemas import CORPUS_SUMMARY_SCHEMA, SchemaError, parse_rational
from icfo.extension.certificate import face_inclusion_cert
from icfo.integration.abelian import constant_witness, edge_with_period
from icfo.linfty.algebra import check_jacobi
from icfo.linfty.morphisms import check_morphism, equal_morphisms
from icfo.linfty.samples import line, string_lie2, string_projection
from icfo.simplicial.core import SimplicialIdentityError, check_identities, terminal_map
from icfo.simplicial.nerves import cyclic_group, nerve


@pytest.fixture
def nz2_payload():
    return dump_simplicial_set(nerve(cyclic_group(2), 2))


def test_simplicial_set_reload(nz2_payload):
    X = load_simplicial_set(nz2_payload, strict=True)
    assert X.sizes == (1, 2, 4)
    assert not check_identities(X)
    assert dump_simplicial_set(X) == nz2_payload


def test_schema_error_points_at_the_field(nz2_payload):
    nz2_payload["d"][2][1][0] = 7
    with pytest.raises(SchemaError) as info:
        load_simplicial_set(nz2_payload)
    assert info.value.pointer == "d[2][1][0]"
    assert "out of range" in info.value.message


def test_missing_and_unknown_keys(nz2_payload):
    with pytest.raises(SchemaError) as info:
        load_simplicial_set({"cap": 0})
    assert info.value.pointer == ""
    assert "missing" in str(info.value)

    nz2_payload["extra"] = 1
    load_simplicial_set(nz2_payload)
    with pytest.raises(SchemaError):
        load_simplicial_set(nz2_payload, strict=True)


def test_morphism_payload_is_checked():
    payload = dump_morphism(terminal_map(nerve(cyclic_group(2), 2)))
    assert load_morphism(payload).cap == 2
    with pytest.raises(SchemaError) as info:
        load_morphism({**payload, "components": [[0], [0, 0]]})
    assert info.value.pointer == "components"


def test_broken_morphism_fails_identities():
    X = nerve(cyclic_group(2), 2)
    payload = dump_morphism(terminal_map(X))
    # send the non-identity arrow to the identity but keep a triangle on it
    payload["target"] = dump_simplicial_set(X)
    payload["components"] = [[0], [0, 0], [0, 1, 2, 3]]
    with pytest.raises(SimplicialIdentityError):
        load_morphism(payload)


@pytest.mark.parametrize(
    "value, expected",
    [(3, Fraction(3)), ("3/4", Fraction(3, 4)), (" -2 ", Fraction(-2))],
)
def test_parse_rational(value, expected):
    assert parse_rational(value, "c") == expected


@pytest.mark.parametrize("value", ["1/0", 1.5, True, "x"])
def test_parse_rational_rejects(value):
    with pytest.raises(SchemaError):
        parse_rational(value, "c")


def test_load_any_detects_kinds():
    L = line()
    edge = edge_with_period(L, [5])
    payloads = {
        "certificate": dump_certificate(face_inclusion_cert(0, 1)),
        "linfty_morphism": dump_linfty_morphism(string_projection()),
        "morphism": dump_morphism(terminal_map(nerve(cyclic_group(2), 1))),
        "simplex": dump_simplex(edge),
        "witness": dump_witness(constant_witness(edge)),
        "lie_algebra": dump_lie_algebra(string_lie2()),
        "simplicial_set": dump_simplicial_set(nerve(cyclic_group(2), 1)),
    }
    for kind, payload in payloads.items():
        got, _ = load_any(payload, strict=True)
        assert got == kind
    with pytest.raises(SchemaError):
        load_any({"nothing": 1})


def test_lie_algebra_reload():
    L = load_lie_algebra(dump_lie_algebra(string_lie2()), strict=True)
    assert (L.n, L.dims, L.names) == (2, (3, 1), ("e", "f", "h", "c"))
    assert check_jacobi(L).ok


def test_linfty_morphism_reload():
    phi = string_projection()
    again = load_linfty_morphism(dump_linfty_morphism(phi), strict=True)
    assert check_morphism(again).ok
    assert equal_morphisms(again, phi)


def test_simplex_reload_over_given_algebra():
    L = line()
    edge = edge_with_period(L, [Fraction(5, 2)])
    assert load_simplex(dump_simplex(edge), algebra=L, strict=True) == edge


def test_canonical_json_is_order_independent():
    a = {"b": 1, "a": Fraction(1, 2)}
    b = {"a": Fraction(1, 2), "b": 1}
    assert canonical_json(a) == '{"a":"1/2","b":1}'
    assert sha256_of(a) == sha256_of(b)
    assert sha256_of(a) != sha256_of({"a": "1/3", "b": 1})


def test_json_files(tmp_path):
    write_json({"x": Fraction(1, 3)}, tmp_path / "sub" / "x.json")
    assert read_json(tmp_path / "sub" / "x.json") == {"x": "1/3"}
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  oops")
    with pytest.raises(SchemaError) as info:
        read_json(bad)
    assert info.value.pointer.startswith("bad.json:2:")


def _summary_rows():
    return pd.DataFrame(
        [
            {"instance": "b", "kind": "morphism", "check": "kan", "verdict": "pass", "levels": 3, "cells": 10},
            {"instance": "a", "kind": "simplex", "check": "mc", "verdict": "fail", "levels": 1, "cells": 2},
        ]
    )


def test_summary_schema_sorts_and_checks():
    out = CORPUS_SUMMARY_SCHEMA.validate(_summary_rows(), strict=True)
    assert list(out["instance"]) == ["a", "b"]

    bad = _summary_rows()
    bad.loc[0, "verdict"] = "maybe"
    with pytest.raises(ValueError, match="Invalid verdict"):
        CORPUS_SUMMARY_SCHEMA.validate(bad)

    dupes = pd.concat([_summary_rows(), _summary_rows()])
    with pytest.raises(ValueError, match="Duplicate"):
        CORPUS_SUMMARY_SCHEMA.validate(dupes)

    with pytest.raises(ValueError, match="Missing"):
        CORPUS_SUMMARY_SCHEMA.validate(_summary_rows().drop(columns=["cells"]))


def test_parquet_roundtrip(tmp_path):
    df = CORPUS_SUMMARY_SCHEMA.validate(_summary_rows())
    write_parquet(df, tmp_path / "summary")
    assert (tmp_path / "summary" / "data.parquet").exists()
    back = read_parquet(tmp_path / "summary")
    assert list(back["check"]) == ["mc", "kan"]
    only = read_parquet(tmp_path / "summary", kinds=["simplex"])
    assert list(only["instance"]) == ["a"]
