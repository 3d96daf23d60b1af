from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

DEFAULT_MAX_CELLS = 10**7
DEFAULT_DEGCAP = 3
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_CORPUS_DIR = "data/corpus"


@dataclass(frozen=True)
class Settings:
    """
    Process-wide knobs.

    max_cells bounds every Hom enumeration (rows x generators); exceeding it
    makes a verdict inconclusive instead of exhausting memory.
    """

    max_cells: int = DEFAULT_MAX_CELLS
    default_degcap: int = DEFAULT_DEGCAP
    log_level: str = DEFAULT_LOG_LEVEL
    corpus_dir: str = DEFAULT_CORPUS_DIR


def _positive_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip().replace("_", ""))
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def load_settings(*, env_file: str | Path | None = None) -> Settings:
    try:
        from dotenv import load_dotenv
    except ImportError as e:
        raise RuntimeError("Missing dependency: python-dotenv") from e

    # real environment variables win over the .env file
    if env_file is not None:
        load_dotenv(env_file, override=False)
    else:
        load_dotenv(override=False)

    level = os.environ.get("ICFO_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper()
    if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        raise ValueError(f"ICFO_LOG_LEVEL must be a logging level name, got {level!r}")

    return Settings(
        max_cells=_positive_int("ICFO_MAX_CELLS", DEFAULT_MAX_CELLS),
        default_degcap=_positive_int("ICFO_DEGCAP", DEFAULT_DEGCAP),
        log_level=level,
        corpus_dir=os.environ.get("ICFO_CORPUS_DIR", DEFAULT_CORPUS_DIR),
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
