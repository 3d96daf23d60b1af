from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np
import pandas as pd

from icfo.data.schemas import (
    CERTIFICATE_SCHEMA,
    FORM_SCHEMA,
    LIE_ALGEBRA_SCHEMA,
    LINFTY_MORPHISM_SCHEMA,
    MORPHISM_SCHEMA,
    PRISM_WITNESS_SCHEMA,
    SIMPLEX_SCHEMA,
    SIMPLICIAL_SET_SCHEMA,
    SchemaError,
    parse_rational,
)
from icfo.extension.certificate import ExtensionCertificate, Step
from icfo.integration.abelian import PrismWitness
from icfo.integration.forms import PolyForm, from_terms
from icfo.integration.simplices import IntegrationSimplex
from icfo.linfty.algebra import LieNAlgebra, from_entries
from icfo.linfty.graded import koszul_sort
from icfo.linfty.morphisms import LInftyMorphism
from icfo.simplicial.core import INDEX, SimplicialMorphism, SimplicialSet, from_arrays


# Parquet
def write_parquet(
    df: pd.DataFrame,
    path: str | Path,
    *,
    partition_cols: list[str] | None = None,
) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)

    if partition_cols:
        df.to_parquet(path, index=False, engine="pyarrow", partition_cols=partition_cols)
    else:
        df.to_parquet(path / "data.parquet", index=False, engine="pyarrow")


def read_parquet(
    path: str | Path,
    *,
    kinds: Iterable[str] | None = None,
) -> pd.DataFrame:
    path = Path(path)
    filters = None
    if kinds is not None:
        filters = [("kind", "in", list(kinds))]
    return pd.read_parquet(path, engine="pyarrow", filters=filters)


# JSON
def json_default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def canonical_json(payload: Any) -> str:
    """Sorted keys and fixed separators: identical payloads give identical bytes."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=json_default)


def sha256_of(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def write_json(payload: Any, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2, default=json_default) + "\n")


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path.name}:{e.lineno}:{e.colno}", e.msg) from e


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# Simplicial sets, morphisms, certificates
def dump_simplicial_set(X: SimplicialSet) -> dict:
    return {
        "cap": X.cap,
        "levels": list(X.sizes),
        "d": [X.faces[m].tolist() if m else [] for m in range(X.cap + 1)],
        "s": [X.degeneracies[m].tolist() for m in range(X.cap)],
        "name": X.name,
    }


def load_simplicial_set(payload: Any, *, strict: bool = False) -> SimplicialSet:
    p = SIMPLICIAL_SET_SCHEMA.validate(payload, strict=strict)
    return from_arrays(p["cap"], p["levels"], p["d"], p["s"], name=p.get("name", ""))


def dump_morphism(f: SimplicialMorphism) -> dict:
    return {
        "source": dump_simplicial_set(f.source),
        "target": dump_simplicial_set(f.target),
        "components": [c.tolist() for c in f.components],
        "name": f.name,
    }


def load_morphism(payload: Any, *, strict: bool = False) -> SimplicialMorphism:
    p = MORPHISM_SCHEMA.validate(payload, strict=strict)
    X = load_simplicial_set(p["source"])
    Y = load_simplicial_set(p["target"])
    comps = tuple(np.asarray(c, dtype=INDEX).reshape(len(c)) for c in p["components"])
    return SimplicialMorphism(X, Y, comps, name=p.get("name", "")).checked()


def dump_certificate(cert: ExtensionCertificate) -> dict:
    return {
        "inclusion": dump_morphism(cert.inclusion),
        "steps": [list(s.as_tuple()) for s in cert.steps],
        "name": cert.name,
    }


def load_certificate(payload: Any, *, strict: bool = False) -> ExtensionCertificate:
    p = CERTIFICATE_SCHEMA.validate(payload, strict=strict)
    inc = load_morphism(p["inclusion"])
    steps = tuple(Step(int(m), int(j), int(x)) for m, j, x in p["steps"])
    return ExtensionCertificate(inc, steps, name=p.get("name", ""))


# Lie n-algebras and L-infinity morphisms
def _dump_table(table: Mapping[int, Mapping[tuple[int, ...], Mapping[int, Fraction]]]) -> dict:
    out = {}
    for k in sorted(table):
        rows = []
        for key in sorted(table[k]):
            vec = table[k][key]
            if vec:
                rows.append({"in": list(key), "out": [[b, str(c)] for b, c in sorted(vec.items())]})
        if rows:
            out[str(k)] = rows
    return out


def _load_entries(table: Mapping[str, list]) -> dict[int, list]:
    return {
        int(k): [
            (tuple(e["in"]), {int(b): parse_rational(c, "out") for b, c in e["out"]})
            for e in rows
        ]
        for k, rows in table.items()
    }


def dump_lie_algebra(L: LieNAlgebra) -> dict:
    payload = {"n": L.n, "dims": list(L.dims), "brackets": _dump_table(L.brackets), "name": L.name}
    if L.names:
        payload["names"] = list(L.names)
    return payload


def load_lie_algebra(payload: Any, *, strict: bool = False) -> LieNAlgebra:
    p = LIE_ALGEBRA_SCHEMA.validate(payload, strict=strict)
    return from_entries(p["n"], p["dims"], _load_entries(p["brackets"]), names=p.get("names"), name=p.get("name", ""))


def dump_linfty_morphism(phi: LInftyMorphism) -> dict:
    return {
        "source": dump_lie_algebra(phi.source),
        "target": dump_lie_algebra(phi.target),
        "taylor": _dump_table(phi.taylor),
        "name": phi.name,
    }


def load_linfty_morphism(payload: Any, *, strict: bool = False) -> LInftyMorphism:
    p = LINFTY_MORPHISM_SCHEMA.validate(payload, strict=strict)
    L = load_lie_algebra(p["source"])
    M = load_lie_algebra(p["target"])
    taylor: dict[int, dict[tuple[int, ...], dict[int, Fraction]]] = {}
    for k, rows in _load_entries(p["taylor"]).items():
        for inputs, out in rows:
            sign, key = koszul_sort(inputs, L.lparity, skew=True)
            if not sign:
                continue
            slot = taylor.setdefault(k, {}).setdefault(key, {})
            for b, c in out.items():
                slot[b] = slot.get(b, Fraction(0)) + sign * c
    taylor = {k: {key: {b: c for b, c in v.items() if c} for key, v in t.items()} for k, t in taylor.items()}
    return LInftyMorphism(L, M, taylor, name=p.get("name", ""))


# Forms and integration simplices
def dump_form(form: PolyForm) -> dict:
    terms: dict[tuple[int, ...], list] = {}
    for key, exps, c in form.items():
        terms.setdefault(key, []).append({"exp": list(exps), "c": str(c)})
    return {"nvars": form.nvars, "terms": [{"dt": list(k), "coeffs": v} for k, v in terms.items()]}


def load_form(payload: Any, *, strict: bool = False) -> PolyForm:
    p = FORM_SCHEMA.validate(payload, strict=strict)
    terms = {
        tuple(t["dt"]): {tuple(c["exp"]): parse_rational(c["c"], "c") for c in t["coeffs"]}
        for t in p["terms"]
    }
    return from_terms(p["nvars"], terms)


def dump_simplex(sigma: IntegrationSimplex) -> dict:
    return {
        "algebra": dump_lie_algebra(sigma.algebra),
        "m": sigma.m,
        "degcap": sigma.degcap,
        "forms": [dump_form(f) for f in sigma.assignment],
    }


def load_simplex(payload: Any, *, algebra: LieNAlgebra | None = None, strict: bool = False) -> IntegrationSimplex:
    p = SIMPLEX_SCHEMA.validate(payload, strict=strict)
    L = load_lie_algebra(p["algebra"]) if algebra is None else algebra
    forms = tuple(load_form(f) for f in p["forms"])
    return IntegrationSimplex(L, p["m"], forms, p.get("degcap", 3))


def dump_witness(witness: PrismWitness) -> dict:
    return {
        "algebra": dump_lie_algebra(witness.algebra),
        "m": witness.m,
        "degcap": witness.degcap,
        "prism": [dump_form(f) for f in witness.assignment],
    }


def load_witness(payload: Any, *, algebra: LieNAlgebra | None = None, strict: bool = False) -> PrismWitness:
    p = PRISM_WITNESS_SCHEMA.validate(payload, strict=strict)
    L = load_lie_algebra(p["algebra"]) if algebra is None else algebra
    forms = tuple(load_form(f) for f in p["prism"])
    return PrismWitness(L, p["m"], forms, p.get("degcap", 3))


# Kind detection for `validate`
KINDS: dict[str, tuple[str, ...]] = {
    "certificate": ("inclusion", "steps"),
    "linfty_morphism": ("taylor",),
    "morphism": ("components",),
    "simplex": ("forms", "algebra"),
    "witness": ("prism", "algebra"),
    "lie_algebra": ("brackets",),
    "form": ("nvars", "terms"),
    "simplicial_set": ("levels",),
}

LOADERS = {
    "certificate": load_certificate,
    "linfty_morphism": load_linfty_morphism,
    "morphism": load_morphism,
    "simplex": load_simplex,
    "witness": load_witness,
    "lie_algebra": load_lie_algebra,
    "form": load_form,
    "simplicial_set": load_simplicial_set,
}


def detect_kind(payload: Any) -> str:
    if isinstance(payload, Mapping):
        for kind, keys in KINDS.items():
            if all(k in payload for k in keys):
                return kind
    raise SchemaError("", "cannot tell which artifact this payload encodes")


def load_any(payload: Any, *, strict: bool = False) -> tuple[str, Any]:
    kind = detect_kind(payload)
    return kind, LOADERS[kind](payload, strict=strict)
