from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import pandas as pd

from icfo.corpus.instances import Instance, bundled_instances, cell_count
from icfo.data.io import (
    canonical_json,
    dump_lie_algebra,
    dump_linfty_morphism,
    dump_morphism,
    dump_simplex,
    dump_simplicial_set,
    load_any,
    read_json,
    write_json,
    write_parquet,
)
from icfo.data.schemas import CORPUS_SUMMARY_SCHEMA
from icfo.simplicial.hom import EnumerationLimit

logger = logging.getLogger(__name__)

DUMPERS = {
    "simplicial_set": dump_simplicial_set,
    "morphism": dump_morphism,
    "lie_algebra": dump_lie_algebra,
    "linfty_morphism": dump_linfty_morphism,
    "simplex": dump_simplex,
}


@dataclass(frozen=True)
class CorpusRun:
    summary: pd.DataFrame
    mismatches: tuple[dict, ...] = field(default=())
    paths: tuple[Path, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.mismatches


def dump_instance(kind: str, obj: Any) -> dict:
    return DUMPERS[kind](obj)


def _roundtrip(path: Path, kind: str, payload: dict) -> str | None:
    """Re-read the written file; returns a problem description or None."""
    again, obj = load_any(read_json(path), strict=True)
    if again != kind:
        return f"re-read as {again}"
    if canonical_json(dump_instance(kind, obj)) != canonical_json(payload):
        return "re-encoding differs"
    return None


def run_corpus(
    out_dir: str | Path | None,
    *,
    cap: int = 3,
    names: Iterable[str] | None = None,
    max_cells: int | None = None,
) -> CorpusRun:
    """
    Build every bundled instance, write it as JSON (when out_dir is given),
    re-validate the file and run the instance's checks. A check whose
    verdict differs from the recorded expectation is a mismatch.
    """
    wanted = set(names) if names is not None else None
    instances: list[Instance] = [i for i in bundled_instances() if wanted is None or i.name in wanted]
    if wanted is not None and len(instances) != len(wanted):
        known = {i.name for i in bundled_instances()}
        raise KeyError(f"unknown instances: {sorted(wanted - known)}")

    out = Path(out_dir) if out_dir is not None else None
    rows: list[dict] = []
    mismatches: list[dict] = []
    paths: list[Path] = []
    for inst in instances:
        obj = inst.build(cap)
        payload = dump_instance(inst.kind, obj)
        if out is not None:
            path = out / f"{inst.name}.json"
            write_json(payload, path)
            paths.append(path)
            problem = _roundtrip(path, inst.kind, payload)
            if problem:
                mismatches.append({"instance": inst.name, "check": "roundtrip", "reason": problem})

        cells = cell_count(obj)
        for check in inst.checks:
            t0 = time.perf_counter()
            try:
                result = check.run(obj, cap)
                verdict, levels, witness = result.verdict, result.levels, result.witness
            except EnumerationLimit as e:
                verdict, levels, witness = "inconclusive", 0, {"reason": str(e)}
            seconds = time.perf_counter() - t0
            logger.info("%s/%s: %s (expected %s)", inst.name, check.name, verdict, check.expected)
            rows.append(
                {
                    "instance": inst.name,
                    "kind": inst.kind,
                    "check": check.name,
                    "verdict": verdict,
                    "expected": check.expected,
                    "levels": levels,
                    "cells": cells,
                    "seconds": seconds,
                    "witness": canonical_json(witness) if witness is not None else None,
                }
            )
            if verdict != check.expected:
                mismatches.append(
                    {
                        "instance": inst.name,
                        "check": check.name,
                        "verdict": verdict,
                        "expected": check.expected,
                        "witness": witness,
                    }
                )

    summary = CORPUS_SUMMARY_SCHEMA.validate(pd.DataFrame(rows), strict=True)
    if out is not None:
        write_parquet(summary, out / "summary")
    return CorpusRun(summary, tuple(mismatches), tuple(paths))
