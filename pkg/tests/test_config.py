from __future__ import annotations

import os

import pytest

from icfo.config.settings import (
    DEFAULT_CORPUS_DIR,
    DEFAULT_DEGCAP,
    DEFAULT_MAX_CELLS,
    get_settings,
    load_settings,
)

VARS = ("ICFO_MAX_CELLS", "ICFO_DEGCAP", "ICFO_LOG_LEVEL", "ICFO_CORPUS_DIR")


@pytest.fixture
def env(monkeypatch, tmp_path):
    for name in VARS:
        monkeypatch.delenv(name, raising=False)
    # keep load_dotenv from finding a stray .env above the test
    monkeypatch.chdir(tmp_path)
    yield monkeypatch
    # load_dotenv writes straight into os.environ
    for name in VARS:
        os.environ.pop(name, None)


def test_defaults(env, tmp_path):
    s = load_settings(env_file=tmp_path / "missing.env")
    assert s.max_cells == DEFAULT_MAX_CELLS
    assert s.default_degcap == DEFAULT_DEGCAP
    assert s.log_level == "WARNING"
    assert s.corpus_dir == DEFAULT_CORPUS_DIR


def test_environment_overrides(env, tmp_path):
    env.setenv("ICFO_MAX_CELLS", "1_000")
    env.setenv("ICFO_LOG_LEVEL", "debug")
    env.setenv("ICFO_CORPUS_DIR", "out/corpus")
    s = load_settings(env_file=tmp_path / "missing.env")
    assert (s.max_cells, s.log_level, s.corpus_dir) == (1000, "DEBUG", "out/corpus")


def test_env_file(env, tmp_path):
    path = tmp_path / ".env"
    path.write_text("ICFO_DEGCAP=5\nICFO_MAX_CELLS=42\n")
    env.setenv("ICFO_MAX_CELLS", "7")
    s = load_settings(env_file=path)
    assert s.default_degcap == 5
    # the process environment wins
    assert s.max_cells == 7


@pytest.mark.parametrize(
    "name, value",
    [("ICFO_MAX_CELLS", "many"), ("ICFO_MAX_CELLS", "0"), ("ICFO_DEGCAP", "-1"), ("ICFO_LOG_LEVEL", "LOUD")],
)
def test_bad_values(env, tmp_path, name, value):
    env.setenv(name, value)
    with pytest.raises(ValueError, match=name):
        load_settings(env_file=tmp_path / "missing.env")


def test_get_settings_is_cached(env):
    get_settings.cache_clear()
    try:
        assert get_settings() is get_settings()
    finally:
        get_settings.cache_clear()
