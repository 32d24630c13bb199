"""Tests for settings loading and overrides."""

from __future__ import annotations

import json
import os
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from earring_workbench.config import CONFIG_ENV_VAR, WorkbenchSettings
from earring_workbench.errors import WorkbenchError


def _write(tmp_path: Path, data: object, name: str = "workbench.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_defaults():
    settings = WorkbenchSettings.load()
    assert settings.max_enumeration_depth == 8
    assert settings.oracle_depth == 12
    assert settings.density_grid == 1000
    assert settings.max_word_k == 3
    assert settings.random_seed == 20240607


def test_load_from_path(tmp_path: Path):
    path = _write(tmp_path, {"max_circle": 3, "chain_samples": 7})
    settings = WorkbenchSettings.load(path)
    assert settings.max_circle == 3
    assert settings.chain_samples == 7
    assert settings.oracle_depth == 12


def test_load_from_env(tmp_path: Path):
    path = _write(tmp_path, {"pi_digits": 20})
    with patch.dict(os.environ, {CONFIG_ENV_VAR: str(path)}):
        assert WorkbenchSettings.load().pi_digits == 20


def test_explicit_path_wins_over_env(tmp_path: Path):
    env_path = _write(tmp_path, {"pi_digits": 20}, "env.json")
    arg_path = _write(tmp_path, {"pi_digits": 30}, "arg.json")
    with patch.dict(os.environ, {CONFIG_ENV_VAR: str(env_path)}):
        assert WorkbenchSettings.load(arg_path).pi_digits == 30


def test_missing_file(tmp_path: Path):
    with pytest.raises(WorkbenchError, match="cannot read config"):
        WorkbenchSettings.load(tmp_path / "absent.json")


def test_malformed_json(tmp_path: Path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(WorkbenchError, match="cannot read config"):
        WorkbenchSettings.load(path)


@pytest.mark.parametrize(
    "data",
    [
        {"unknown_knob": 1},
        {"max_word_k": 4},
        {"density_grid": 1},
        {"max_recursion_n": 1},
    ],
)
def test_invalid_values(tmp_path: Path, data: dict[str, int]):
    with pytest.raises(WorkbenchError, match="invalid config"):
        WorkbenchSettings.load(_write(tmp_path, data))


def test_override_skips_none():
    settings = WorkbenchSettings()
    assert settings.override(recursion_depth=None) is settings
    updated = settings.override(recursion_depth=5, chain_samples=None)
    assert updated.recursion_depth == 5
    assert updated.chain_samples == settings.chain_samples


def test_override_validates():
    with pytest.raises(WorkbenchError):
        WorkbenchSettings().override(recursion_samples=0)


def test_settings_are_frozen():
    settings = WorkbenchSettings()
    with pytest.raises(ValidationError):
        settings.max_circle = 2  # type: ignore[misc]
