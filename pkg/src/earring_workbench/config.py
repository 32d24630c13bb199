"""Workbench settings: depths, sample counts, precision and the random seed."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from langchain_core.utils import from_env
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from earring_workbench.errors import WorkbenchError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "EARRING_WORKBENCH_CONFIG"


class WorkbenchSettings(BaseModel):
    """Every tunable of the workbench. Defaults keep the ``all`` suite under two minutes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_enumeration_depth: int = Field(
        default=8, ge=1, le=10, description="Largest n for which B_n is enumerated."
    )
    oracle_depth: int = Field(
        default=12, ge=1, description="Truncation depth of the tau series oracle."
    )
    locate_depth: int = Field(
        default=8, ge=1, description="Sequence length cap used when locating points of [0, 1]."
    )
    pi_digits: int = Field(default=8, ge=1, le=200, description="Decimal digits of pi.")
    max_recursion_n: int = Field(
        default=4, ge=2, description="Largest n checked in the sigma recursion."
    )
    recursion_samples: int = Field(default=100, ge=1)
    recursion_depth: int = Field(default=8, ge=1)
    lipschitz_pairs: int = Field(default=1000, ge=1)
    lipschitz_depth: int = Field(default=6, ge=1)
    density_grid: int = Field(default=1000, ge=2)
    max_circle: int = Field(
        default=6, ge=1, description="Circles L_1..L_N kept in the truncated earring graph."
    )
    max_word_k: int = Field(default=3, ge=1, le=3, description="Largest k for projected words.")
    contraction_gamma: int = Field(default=1, ge=1)
    cover_max_depth: int = Field(
        default=32, ge=1, description="How often the cover radius may be halved."
    )
    chain_samples: int = Field(default=100, ge=1, description="Random chains per identity.")
    current_samples: int = Field(default=50, ge=1, description="Random currents per identity.")
    round_trip_samples: int = Field(
        default=6, ge=1,
        description="Currents sent through current_to_chain with epsilon below a quarter girth.",
    )
    random_seed: int = Field(default=20240607)
    svg_samples: int = Field(default=512, ge=2)

    @classmethod
    def load(cls, path: str | Path | None = None) -> WorkbenchSettings:
        """Read a JSON config; ``path`` defaults to ``$EARRING_WORKBENCH_CONFIG``."""
        if path is None:
            path = from_env(CONFIG_ENV_VAR, default="")()
        if not path:
            return cls()
        try:
            data: Any = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise WorkbenchError(f"cannot read config {path}: {exc}") from exc
        try:
            settings = cls.model_validate(data)
        except ValidationError as exc:
            raise WorkbenchError(f"invalid config {path}: {exc}") from exc
        logger.info("loaded settings from %s", path)
        return settings

    def override(self, **updates: Any) -> WorkbenchSettings:
        """Copy with the non-``None`` updates applied and validated."""
        changes = {k: v for k, v in updates.items() if v is not None}
        if not changes:
            return self
        try:
            return type(self).model_validate({**self.model_dump(), **changes})
        except ValidationError as exc:
            raise WorkbenchError(str(exc)) from exc
