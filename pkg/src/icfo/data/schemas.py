from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import pandas as pd


class SchemaError(ValueError):
    """A payload violates its JSON contract; pointer names the offending field."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        self.message = message
        super().__init__(f"{pointer or '<root>'}: {message}")


# Helpers (shared)
def _at(where: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{where}[{key}]"
    return f"{where}.{key}" if where else key


def _ensure_mapping(payload: Any, where: str) -> Mapping:
    if not isinstance(payload, Mapping):
        raise SchemaError(where, f"expected an object, got {type(payload).__name__}")
    return payload


def _ensure_keys(payload: Mapping, required: Sequence[str], where: str) -> None:
    missing = [k for k in required if k not in payload]
    if missing:
        raise SchemaError(where, f"missing required keys: {missing}")


def _strict_unknown_keys(payload: Mapping, allowed: set[str], where: str) -> None:
    unknown = sorted(k for k in payload if k not in allowed)
    if unknown:
        raise SchemaError(where, f"unknown keys (strict mode): {unknown}")


def _ensure_int(value: Any, where: str, *, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(where, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise SchemaError(where, f"{value} is below {lo}")
    if hi is not None and value >= hi:
        raise SchemaError(where, f"{value} is out of range (must be < {hi})")
    return value


def _ensure_list(value: Any, where: str, *, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise SchemaError(where, f"expected a list, got {type(value).__name__}")
    if length is not None and len(value) != length:
        raise SchemaError(where, f"expected {length} entries, got {len(value)}")
    return value


def _ensure_index_rows(value: Any, where: str, *, rows: int, cols: int, bound: int) -> None:
    _ensure_list(value, where, length=rows)
    for i, row in enumerate(value):
        _ensure_list(row, _at(where, i), length=cols)
        for x, v in enumerate(row):
            _ensure_int(v, _at(_at(where, i), x), lo=0, hi=bound)


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(where, f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(where, f"bad rational {value!r}") from e
    raise SchemaError(where, f"rationals are integers or 'p/q' strings, got {value!r}")


# Simplicial sets and morphisms
SIMPLICIAL_SET_KEYS: tuple[str, ...] = ("cap", "levels", "d", "s")


@dataclass(frozen=True)
class SimplicialSetSchema:
    """
    {"cap": D, "levels": [|X_0|..|X_D|], "d": [[], d_1 rows, ...], "s": [s_0 rows, ...]}

    d[m] has m+1 rows indexing X_{m-1}; s[m] has m+1 rows indexing X_{m+1}.
    """

    required_keys: tuple[str, ...] = SIMPLICIAL_SET_KEYS
    optional_keys: tuple[str, ...] = ("name",)

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        cap = _ensure_int(payload["cap"], _at(where, "cap"), lo=0)
        levels = _ensure_list(payload["levels"], _at(where, "levels"), length=cap + 1)
        for m, n in enumerate(levels):
            _ensure_int(n, _at(_at(where, "levels"), m), lo=0)
        d = _ensure_list(payload["d"], _at(where, "d"), length=cap + 1)
        for m in range(1, cap + 1):
            _ensure_index_rows(d[m], _at(_at(where, "d"), m), rows=m + 1, cols=levels[m], bound=levels[m - 1])
        s = _ensure_list(payload["s"], _at(where, "s"), length=cap)
        for m in range(cap):
            _ensure_index_rows(s[m], _at(_at(where, "s"), m), rows=m + 1, cols=levels[m], bound=levels[m + 1])
        return payload


@dataclass(frozen=True)
class MorphismSchema:
    required_keys: tuple[str, ...] = ("source", "target", "components")
    optional_keys: tuple[str, ...] = ("name",)

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        src = SIMPLICIAL_SET_SCHEMA.validate(payload["source"], strict=strict, where=_at(where, "source"))
        tgt = SIMPLICIAL_SET_SCHEMA.validate(payload["target"], strict=strict, where=_at(where, "target"))
        cap = min(src["cap"], tgt["cap"])
        comps = _ensure_list(payload["components"], _at(where, "components"), length=cap + 1)
        for m, comp in enumerate(comps):
            w = _at(_at(where, "components"), m)
            _ensure_list(comp, w, length=src["levels"][m])
            for x, v in enumerate(comp):
                _ensure_int(v, _at(w, x), lo=0, hi=tgt["levels"][m])
        return payload


@dataclass(frozen=True)
class CertificateSchema:
    required_keys: tuple[str, ...] = ("inclusion", "steps")
    optional_keys: tuple[str, ...] = ("name",)

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        inc = MORPHISM_SCHEMA.validate(payload["inclusion"], strict=strict, where=_at(where, "inclusion"))
        cap = inc["target"]["cap"]
        for k, step in enumerate(_ensure_list(payload["steps"], _at(where, "steps"))):
            w = _at(_at(where, "steps"), k)
            _ensure_list(step, w, length=3)
            m = _ensure_int(step[0], _at(w, 0), lo=1, hi=cap + 1)
            _ensure_int(step[1], _at(w, 1), lo=0, hi=m + 1)
            _ensure_int(step[2], _at(w, 2), lo=0, hi=inc["target"]["levels"][m])
        return payload


# Lie n-algebras and their morphisms
def _validate_table(table: Any, where: str, *, size: int, out_size: int) -> None:
    table = _ensure_mapping(table, where)
    for k, entries in table.items():
        wk = _at(where, str(k))
        if not str(k).isdigit() or int(k) < 1:
            raise SchemaError(wk, f"arity keys are positive integers, got {k!r}")
        for e, entry in enumerate(_ensure_list(entries, wk)):
            we = _at(wk, e)
            entry = _ensure_mapping(entry, we)
            _ensure_keys(entry, ("in", "out"), we)
            inputs = _ensure_list(entry["in"], _at(we, "in"), length=int(k))
            for p, b in enumerate(inputs):
                _ensure_int(b, _at(_at(we, "in"), p), lo=0, hi=size)
            for p, pair in enumerate(_ensure_list(entry["out"], _at(we, "out"))):
                wp = _at(_at(we, "out"), p)
                _ensure_list(pair, wp, length=2)
                _ensure_int(pair[0], _at(wp, 0), lo=0, hi=out_size)
                parse_rational(pair[1], _at(wp, 1))


@dataclass(frozen=True)
class LieAlgebraSchema:
    """{"n": n, "dims": [...], "brackets": {"k": [{"in": [...], "out": [[b, "p/q"], ...]}]}}"""

    required_keys: tuple[str, ...] = ("n", "dims", "brackets")
    optional_keys: tuple[str, ...] = ("names", "name")

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        n = _ensure_int(payload["n"], _at(where, "n"), lo=1)
        dims = _ensure_list(payload["dims"], _at(where, "dims"), length=n)
        for i, d in enumerate(dims):
            _ensure_int(d, _at(_at(where, "dims"), i), lo=0)
        size = sum(dims)
        names = payload.get("names")
        if names is not None:
            _ensure_list(names, _at(where, "names"), length=size)
        _validate_table(payload["brackets"], _at(where, "brackets"), size=size, out_size=size)
        return payload


@dataclass(frozen=True)
class LInftyMorphismSchema:
    required_keys: tuple[str, ...] = ("source", "target", "taylor")
    optional_keys: tuple[str, ...] = ("name",)

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        src = LIE_ALGEBRA_SCHEMA.validate(payload["source"], strict=strict, where=_at(where, "source"))
        tgt = LIE_ALGEBRA_SCHEMA.validate(payload["target"], strict=strict, where=_at(where, "target"))
        _validate_table(payload["taylor"], _at(where, "taylor"), size=sum(src["dims"]), out_size=sum(tgt["dims"]))
        return payload


# Polynomial forms and integration simplices
@dataclass(frozen=True)
class FormSchema:
    """{"nvars": N, "terms": [{"dt": [sorted indices], "coeffs": [{"exp": [...], "c": "p/q"}]}]}"""

    required_keys: tuple[str, ...] = ("nvars", "terms")

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys), where)
        nvars = _ensure_int(payload["nvars"], _at(where, "nvars"), lo=0)
        for t, term in enumerate(_ensure_list(payload["terms"], _at(where, "terms"))):
            wt = _at(_at(where, "terms"), t)
            term = _ensure_mapping(term, wt)
            _ensure_keys(term, ("dt", "coeffs"), wt)
            dt = _ensure_list(term["dt"], _at(wt, "dt"))
            for p, i in enumerate(dt):
                _ensure_int(i, _at(_at(wt, "dt"), p), lo=1, hi=nvars + 1)
            if dt != sorted(set(dt)):
                raise SchemaError(_at(wt, "dt"), f"dt indices must be strictly increasing, got {dt}")
            for c, coeff in enumerate(_ensure_list(term["coeffs"], _at(wt, "coeffs"))):
                wc = _at(_at(wt, "coeffs"), c)
                coeff = _ensure_mapping(coeff, wc)
                _ensure_keys(coeff, ("exp", "c"), wc)
                exps = _ensure_list(coeff["exp"], _at(wc, "exp"), length=nvars)
                for p, e in enumerate(exps):
                    _ensure_int(e, _at(_at(wc, "exp"), p), lo=0)
                parse_rational(coeff["c"], _at(wc, "c"))
        return payload


@dataclass(frozen=True)
class SimplexSchema:
    required_keys: tuple[str, ...] = ("algebra", "m", "forms")
    optional_keys: tuple[str, ...] = ("degcap",)

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        alg = LIE_ALGEBRA_SCHEMA.validate(payload["algebra"], strict=strict, where=_at(where, "algebra"))
        m = _ensure_int(payload["m"], _at(where, "m"), lo=0)
        if "degcap" in payload:
            _ensure_int(payload["degcap"], _at(where, "degcap"), lo=0)
        forms = _ensure_list(payload["forms"], _at(where, "forms"), length=sum(alg["dims"]))
        for b, form in enumerate(forms):
            wb = _at(_at(where, "forms"), b)
            FORM_SCHEMA.validate(form, strict=strict, where=wb)
            if form["nvars"] != m:
                raise SchemaError(_at(wb, "nvars"), f"form lives on {form['nvars']} coordinates, simplex has {m}")
        return payload


@dataclass(frozen=True)
class PrismWitnessSchema:
    """Forms on the prism chart (u, t_1..t_m), one per generator."""

    required_keys: tuple[str, ...] = ("algebra", "m", "prism")
    optional_keys: tuple[str, ...] = ("degcap",)

    def validate(self, payload: Any, *, strict: bool = False, where: str = "") -> Mapping:
        payload = _ensure_mapping(payload, where)
        _ensure_keys(payload, self.required_keys, where)
        if strict:
            _strict_unknown_keys(payload, set(self.required_keys) | set(self.optional_keys), where)
        alg = LIE_ALGEBRA_SCHEMA.validate(payload["algebra"], strict=strict, where=_at(where, "algebra"))
        m = _ensure_int(payload["m"], _at(where, "m"), lo=0)
        if "degcap" in payload:
            _ensure_int(payload["degcap"], _at(where, "degcap"), lo=0)
        forms = _ensure_list(payload["prism"], _at(where, "prism"), length=sum(alg["dims"]))
        for b, form in enumerate(forms):
            wb = _at(_at(where, "prism"), b)
            FORM_SCHEMA.validate(form, strict=strict, where=wb)
            if form["nvars"] != m + 1:
                raise SchemaError(_at(wb, "nvars"), f"prism forms need {m + 1} coordinates, got {form['nvars']}")
        return payload


# Corpus summary table
REQUIRED_SUMMARY_COLS: tuple[str, ...] = (
    "instance",
    "kind",
    "check",
    "verdict",
    "levels",
    "cells",
)

VERDICTS: frozenset[str] = frozenset({"pass", "fail", "inconclusive"})


def _missing_cols(df: pd.DataFrame, cols: Sequence[str]) -> list[str]:
    return [c for c in cols if c not in df.columns]


def _ensure_columns(df: pd.DataFrame, required: Sequence[str]) -> None:
    missing = _missing_cols(df, required)
    if missing:
        raise ValueError(f"Missing required columns: {missing}")


def _ensure_no_dupes(df: pd.DataFrame, key_cols: Sequence[str]) -> None:
    if df.duplicated(subset=list(key_cols)).any():
        dup = df[df.duplicated(subset=list(key_cols), keep=False)].sort_values(list(key_cols))
        raise ValueError(
            f"Duplicate rows found for key columns {list(key_cols)}.\n"
            f"Example duplicates:\n{dup.head(20)}"
        )


def _cast_string(df: pd.DataFrame, cols: Iterable[str]) -> None:
    for c in cols:
        if c in df.columns:
            df[c] = df[c].astype("string")


def _cast_numeric(df: pd.DataFrame, cols: Iterable[str]) -> None:
    for c in cols:
        if c in df.columns:
            df[c] = pd.to_numeric(df[c], errors="raise")


@dataclass(frozen=True)
class CorpusSummarySchema:
    """
    One row per (instance, check) with its verdict, the number of levels
    inspected and the total number of cells of the instance.
    """

    required_cols: tuple[str, ...] = REQUIRED_SUMMARY_COLS
    optional_cols: tuple[str, ...] = ("expected", "seconds", "witness")
    key_cols: tuple[str, ...] = ("instance", "check")

    def validate(self, df: pd.DataFrame, *, strict: bool = False) -> pd.DataFrame:
        _ensure_columns(df, self.required_cols)
        if strict:
            unknown = [c for c in df.columns if c not in set(self.required_cols) | set(self.optional_cols)]
            if unknown:
                raise ValueError(f"Unknown columns (strict mode): {unknown}")

        out = df.copy()
        _cast_string(out, ["instance", "kind", "check", "verdict", "expected", "witness"])
        _cast_numeric(out, ["levels", "cells", "seconds"])

        bad = set(out["verdict"].dropna().unique()) - VERDICTS
        if bad:
            raise ValueError(f"Invalid verdict values: {sorted(bad)} (valid: {sorted(VERDICTS)})")
        if (out["cells"] < 0).any() or (out["levels"] < 0).any():
            raise ValueError("levels and cells must be non-negative")

        _ensure_no_dupes(out, self.key_cols)
        return out.sort_values(list(self.key_cols), kind="mergesort").reset_index(drop=True)


# Factory (singletons for importing)
SIMPLICIAL_SET_SCHEMA = SimplicialSetSchema()
MORPHISM_SCHEMA = MorphismSchema()
CERTIFICATE_SCHEMA = CertificateSchema()
LIE_ALGEBRA_SCHEMA = LieAlgebraSchema()
LINFTY_MORPHISM_SCHEMA = LInftyMorphismSchema()
FORM_SCHEMA = FormSchema()
SIMPLEX_SCHEMA = SimplexSchema()
PRISM_WITNESS_SCHEMA = PrismWitnessSchema()
CORPUS_SUMMARY_SCHEMA = CorpusSummarySchema()
