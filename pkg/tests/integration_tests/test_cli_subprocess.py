"""Run the installed command line as a separate process."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest


def _run(*args: str) -> subprocess.CompletedProcess[str]:
    return subprocess.run(
        [sys.executable, "-m", "earring_workbench", *args],
        env={**os.environ, "PYTHONIOENCODING": "utf-8"},
        capture_output=True,
        encoding="utf-8",
        check=False,
    )


def test_tau_exit_code():
    result = _run("tau", "1,1")
    assert result.returncode == 0
    assert result.stdout.startswith("1/2 ∈ [")


def test_usage_error_exit_code():
    result = _run("tau", "2")
    assert result.returncode == 2
    assert result.stderr.startswith("error: ")


def test_word_json_is_stable():
    first, second = _run("word", "2", "--json"), _run("word", "2", "--json")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["word"] == "abABabAB"


@pytest.mark.slow
def test_suite_all():
    result = _run("suite", "all")
    assert result.returncode == 0, result.stdout
    assert "FAIL" not in result.stdout
