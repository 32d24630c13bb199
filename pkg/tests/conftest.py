"""Shared test fixtures."""

from __future__ import annotations

import os
from collections.abc import Iterator
from unittest.mock import patch

import pytest

from earring_workbench.config import CONFIG_ENV_VAR, WorkbenchSettings
from earring_workbench.graphs import MetricGraph
from earring_workbench.workbench import Workbench


@pytest.fixture(autouse=True)
def _no_config_env() -> Iterator[None]:
    """Keep a developer's EARRING_WORKBENCH_CONFIG out of the tests."""
    env = {k: v for k, v in os.environ.items() if k != CONFIG_ENV_VAR}
    with patch.dict(os.environ, env, clear=True):
        yield


@pytest.fixture
def fast_settings() -> WorkbenchSettings:
    """Small sample counts; every identity is still exercised."""
    return WorkbenchSettings(
        recursion_samples=20,
        lipschitz_pairs=50,
        chain_samples=5,
        current_samples=4,
        round_trip_samples=2,
        density_grid=200,
        max_circle=4,
    )


@pytest.fixture
def wb(fast_settings: WorkbenchSettings) -> Workbench:
    return Workbench(settings=fast_settings)


@pytest.fixture
def earring() -> MetricGraph:
    return MetricGraph.hawaiian(4)


@pytest.fixture
def tree() -> MetricGraph:
    """A star with a long arm: r - x, then x - y and x - z."""
    return MetricGraph.from_edges([
        ("a", "r", "x", 1), ("b", "x", "y", "1/2"), ("c", "x", "z", "3/4"),
    ])
