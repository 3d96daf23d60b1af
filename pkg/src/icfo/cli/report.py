from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

from icfo.data.io import file_sha256, json_default, sha256_of, write_json
from icfo.fibrant.weq import Outcome

EXIT_CODES: dict[str, int] = {"pass": 0, "fail": 1, "inconclusive": 3}
EXIT_INPUT_ERROR = 2


class ReportError(ValueError):
    """A report whose verdict is not backed by a witness or a reason."""


@dataclass
class Report:
    """
    Outcome of one subcommand. Everything but the timings goes into the
    hashed body, so identical inputs give byte-identical bodies.
    """

    command: str
    verdict: Outcome = "pass"
    witnesses: list[dict] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    reason: str = ""
    timings: dict[str, float] = field(default_factory=dict)

    def add_input(self, path: str | Path) -> None:
        self.inputs[Path(path).name] = file_sha256(path)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - t0

    def fail(self, witness: dict, *, reason: str = "") -> None:
        self.verdict = "fail"
        self.witnesses.append(witness)
        if reason and not self.reason:
            self.reason = reason

    def inconclusive(self, reason: str) -> None:
        if self.verdict != "fail":
            self.verdict = "inconclusive"
        if not self.reason:
            self.reason = reason

    def require(self, ok: bool, witness: dict | None, *, reason: str = "") -> None:
        """Fold one sub-verdict into the report."""
        if not ok:
            self.fail(witness or {"reason": reason or "check failed"}, reason=reason)

    def check(self) -> None:
        if self.verdict == "fail" and not self.witnesses:
            raise ReportError(f"{self.command}: fail verdict without a witness")
        if self.verdict == "inconclusive" and not self.reason:
            raise ReportError(f"{self.command}: inconclusive verdict without a stated reason")

    def body(self) -> dict:
        out = {
            "command": self.command,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "details": self.details,
            "inputs": dict(sorted(self.inputs.items())),
        }
        if self.reason:
            out["reason"] = self.reason
        return out

    def document(self) -> dict:
        body = self.body()
        return {"report": body, "sha256": sha256_of(body), "timings": self.timings}

    def render(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=2, default=json_default)

    def write(self, path: str | Path) -> None:
        write_json(self.document(), path)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]
