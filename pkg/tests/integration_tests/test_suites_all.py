"""Full verification suites at the default settings.

Run with: pytest tests/integration_tests/ -m slow
"""

from __future__ import annotations

import pytest

from earring_workbench.suites import SUITES, run_suite
from earring_workbench.workbench import Workbench

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def default_wb() -> Workbench:
    return Workbench()


@pytest.mark.parametrize("name", SUITES)
def test_suite_passes_at_defaults(name: str, default_wb: Workbench):
    report = run_suite(name, default_wb)
    assert report.passed, report.failures


def test_all_is_deterministic(default_wb: Workbench):
    first = run_suite("all", default_wb).model_dump(mode="json")
    second = run_suite("all", Workbench(settings=default_wb.settings)).model_dump(mode="json")
    assert first == second
    assert first["passed"] is True
