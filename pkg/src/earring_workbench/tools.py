"""LangChain tool definitions over the earring workbench."""

from __future__ import annotations

import asyncio
import json
from typing import Any, NoReturn, Optional

from langchain_core.tools import BaseTool, ToolException
from pydantic import BaseModel, Field, model_validator

from earring_workbench.certified import format_rational
from earring_workbench.errors import WorkbenchError
from earring_workbench.workbench import Workbench

# ---------------------------------------------------------------------------
# Input schemas
# ---------------------------------------------------------------------------


class TauInput(BaseModel):
    seq: str = Field(description="Bounded sequence literal, e.g. '1,2,1' (s(i) <= i)")
    depth: Optional[int] = Field(default=None, description="Oracle truncation depth (default 12)")


class EnumerateBInput(BaseModel):
    n: int = Field(description="Length n of the sequences in B_n (max 8)")


class DensityInput(BaseModel):
    depth: int = Field(description="Longest sequence whose interval is counted")
    grid: Optional[int] = Field(default=None, description="Grid size on [0, 1] (default 1000)")


class SigmaInput(BaseModel):
    n: int = Field(description="Index n of the loop sigma_n (1 to 4)")
    samples: int = Field(default=16, description="Number of equispaced sample times")
    depth: Optional[int] = Field(default=None, description="Resolution depth (default 8)")


class ProjectWordInput(BaseModel):
    k: int = Field(description="Free factor index k (1 to 3); the word is [a,b]^(k!)")


class CommutatorSearchInput(BaseModel):
    word: str = Field(description="Word in a, b, c, ...; capitals are inverses, e.g. 'abAB'")


class HomologyInput(BaseModel):
    facets: Optional[list[list[int]]] = Field(
        default=None, description="Facets of a simplicial complex, e.g. [[0,1],[1,2],[0,2]]"
    )
    sizes: Optional[list[int]] = Field(
        default=None, description="Number of cells per dimension when giving explicit matrices"
    )
    matrices: Optional[list[list[list[int]]]] = Field(
        default=None, description="Integer boundary matrices d_1, d_2, ... (rows x cols)"
    )


class CurrentToChainInput(BaseModel):
    current: dict[str, Any] = Field(
        description=(
            "Current JSON: {'dimension': 1, 'edges': [{'edge': 'L1', 'intervals': "
            "[{'from': '0', 'to': '1/2', 'weight': 1}]}]}; add 'graph' for other graphs"
        )
    )
    epsilon: str = Field(description="Target piece diameter as a rational, e.g. '1/2'")


class RunSuiteInput(BaseModel):
    name: str = Field(
        description="Suite: seqorder, earring, freegroup, chains, currents, or all"
    )


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _fmt(data: Any) -> str:
    """Format a result as a compact JSON string for the LLM."""
    return json.dumps(data, ensure_ascii=False, default=str)


def _handle_workbench_error(exc: WorkbenchError) -> NoReturn:
    """Convert a workbench error into a ToolException the agent can read."""
    raise ToolException(f"{type(exc).__name__}: {exc}") from exc


# ---------------------------------------------------------------------------
# Base tool
# ---------------------------------------------------------------------------


class _WorkbenchBaseTool(BaseTool):
    """Base class sharing one ``Workbench``.

    Any of these work::

        tool = MyTool()                          # settings from $EARRING_WORKBENCH_CONFIG
        tool = MyTool(config="workbench.json")   # explicit config file
        tool = MyTool(workbench=existing)        # shared workbench
    """

    workbench: Workbench = Field(default=None)  # type: ignore[assignment]
    handle_tool_error: bool = True

    @model_validator(mode="before")
    @classmethod
    def _build_workbench(cls, values: Any) -> Any:
        if isinstance(values, dict) and values.get("workbench") is None:
            from earring_workbench.config import WorkbenchSettings

            config = values.pop("config", None)
            values["workbench"] = Workbench(settings=WorkbenchSettings.load(config))
        return values

    def _query(self, **kwargs: Any) -> Any:
        raise NotImplementedError

    def _run(self, **kwargs: Any) -> str:
        try:
            return _fmt(self._query(**kwargs))
        except WorkbenchError as exc:
            return _handle_workbench_error(exc)

    async def _arun(self, **kwargs: Any) -> str:
        return await asyncio.to_thread(self._run, **kwargs)


# ---------------------------------------------------------------------------
# Tools
# ---------------------------------------------------------------------------


class TauTool(_WorkbenchBaseTool):
    name: str = "earring_tau"
    description: str = (
        "Compute the exact rational tau(s) of a bounded sequence and check it against the "
        "truncated series oracle. Use earring_enumerate_b to list valid sequences."
    )
    args_schema: type[BaseModel] = TauInput

    def _query(self, seq: str, depth: int | None = None) -> Any:
        return self.workbench.tau(seq, depth).model_dump()


class EnumerateBTool(_WorkbenchBaseTool):
    name: str = "earring_enumerate_b"
    description: str = (
        "List every bounded sequence of length n in increasing order, with tau of each."
    )
    args_schema: type[BaseModel] = EnumerateBInput

    def _query(self, n: int) -> Any:
        from earring_workbench.seqorder import tau

        return [{"seq": str(s), "tau": format_rational(tau(s))}
                for s in self.workbench.enumerate_b(n)]


class DensityTool(_WorkbenchBaseTool):
    name: str = "earring_density"
    description: str = (
        "Largest distance from a grid point of [0, 1] to the intervals of sequences up to a "
        "given length. Shows how the intervals fill [0, 1] as the depth grows."
    )
    args_schema: type[BaseModel] = DensityInput

    def _query(self, depth: int, grid: int | None = None) -> Any:
        report = self.workbench.density(depth, grid)
        return {"depth": report.depth, "grid": report.grid,
                "max_gap": format_rational(report.max_gap)}


class SigmaTool(_WorkbenchBaseTool):
    name: str = "earring_sigma"
    description: str = (
        "Sample the Lipschitz loop sigma_n at equispaced times. Each row gives the circle, "
        "the turn on that circle and a certified error bound (0 when exact)."
    )
    args_schema: type[BaseModel] = SigmaInput

    def _query(self, n: int, samples: int = 16, depth: int | None = None) -> Any:
        return [dict(zip(("t", "circle", "turn", "error_bound"), sample.row()))
                for sample in self.workbench.sigma_samples(n, samples, depth)]


class ProjectWordTool(_WorkbenchBaseTool):
    name: str = "earring_project_word"
    description: str = (
        "Project sigma_1 to the free group on circles n_k, n_k + 1 and compare with "
        "[a,b]^(k!). For k <= 2 also decides whether the word is a single commutator."
    )
    args_schema: type[BaseModel] = ProjectWordInput

    def _query(self, k: int) -> Any:
        return self.workbench.project_word(k).model_dump()


class CommutatorSearchTool(_WorkbenchBaseTool):
    name: str = "earring_commutator_search"
    description: str = (
        "Decide whether a free-group word is a single commutator [x, y] and return a witness."
    )
    args_schema: type[BaseModel] = CommutatorSearchInput

    def _query(self, word: str) -> Any:
        return self.workbench.commutator_search(word).to_json()


class HomologyTool(_WorkbenchBaseTool):
    name: str = "earring_homology"
    description: str = (
        "Integral homology of a finite chain complex via Smith normal form. Give either the "
        "facets of a simplicial complex or explicit sizes and boundary matrices."
    )
    args_schema: type[BaseModel] = HomologyInput

    def _query(self, facets: list[list[int]] | None = None, sizes: list[int] | None = None,
               matrices: list[list[list[int]]] | None = None) -> Any:
        data: dict[str, Any] = (
            {"facets": facets} if facets is not None else {"sizes": sizes, "matrices": matrices}
        )
        return self.workbench.homology(data).model_dump()


class CurrentToChainTool(_WorkbenchBaseTool):
    name: str = "earring_current_to_chain"
    description: str = (
        "Represent an integral current on a metric graph (default: the truncated Hawaiian "
        "earring) by a chain whose pieces have diameter below epsilon, with a checked "
        "certificate."
    )
    args_schema: type[BaseModel] = CurrentToChainInput

    def _query(self, current: dict[str, Any], epsilon: str) -> Any:
        _, report = self.workbench.current_to_chain(current, epsilon)
        return report.model_dump(mode="json")


class RunSuiteTool(_WorkbenchBaseTool):
    name: str = "earring_run_suite"
    description: str = (
        "Run a verification suite and report every check with its parameters and verdict."
    )
    args_schema: type[BaseModel] = RunSuiteInput

    def _query(self, name: str) -> Any:
        return self.workbench.run_suite(name).model_dump(mode="json")


ALL_TOOLS: list[type[_WorkbenchBaseTool]] = [
    TauTool,
    EnumerateBTool,
    DensityTool,
    SigmaTool,
    ProjectWordTool,
    CommutatorSearchTool,
    HomologyTool,
    CurrentToChainTool,
    RunSuiteTool,
]
