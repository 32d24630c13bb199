"""Unit tests for the earring workbench tools."""

from __future__ import annotations

import json
import os
from pathlib import Path
from unittest.mock import patch

import pytest
from langchain_core.tools import ToolException

from earring_workbench import WorkbenchToolkit
from earring_workbench.config import CONFIG_ENV_VAR, WorkbenchSettings
from earring_workbench.tools import (
    ALL_TOOLS,
    CommutatorSearchTool,
    CurrentToChainTool,
    DensityTool,
    EnumerateBTool,
    HomologyTool,
    ProjectWordTool,
    RunSuiteTool,
    SigmaTool,
    TauTool,
)
from earring_workbench.workbench import Workbench


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    path = tmp_path / "workbench.json"
    path.write_text(json.dumps({"max_circle": 3, "density_grid": 50}), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Toolkit
# ---------------------------------------------------------------------------


def test_toolkit_returns_all_tools():
    tools = WorkbenchToolkit().get_tools()
    assert len(tools) == 9
    names = {t.name for t in tools}
    assert "earring_tau" in names
    assert "earring_current_to_chain" in names
    assert "earring_run_suite" in names


def test_toolkit_tools_share_one_workbench(fast_settings: WorkbenchSettings):
    tools = WorkbenchToolkit(settings=fast_settings).get_tools()
    workbenches = {id(t.workbench) for t in tools}  # type: ignore[attr-defined]
    assert len(workbenches) == 1
    assert tools[0].workbench.settings == fast_settings  # type: ignore[attr-defined]


def test_toolkit_selected_tools():
    toolkit = WorkbenchToolkit(selected_tools=["earring_tau", "earring_homology"])
    tools = toolkit.get_tools()
    assert len(tools) == 2
    assert {t.name for t in tools} == {"earring_tau", "earring_homology"}


def test_toolkit_invalid_selected_tools():
    with pytest.raises(ValueError, match="Invalid tool names"):
        WorkbenchToolkit(selected_tools=["earring_tau", "nonexistent_tool"])


def test_toolkit_reads_env_var(config_file: Path):
    with patch.dict(os.environ, {CONFIG_ENV_VAR: str(config_file)}):
        toolkit = WorkbenchToolkit()
    assert toolkit.settings.max_circle == 3


# ---------------------------------------------------------------------------
# Tool init: all three patterns work
# ---------------------------------------------------------------------------


def test_tool_init_with_defaults():
    tool = DensityTool()
    assert tool.workbench.settings == WorkbenchSettings()


def test_tool_init_with_config_path(config_file: Path):
    tool = DensityTool(config=str(config_file))
    assert tool.workbench.settings.density_grid == 50


def test_tool_init_with_shared_workbench(wb: Workbench):
    tool = TauTool(workbench=wb)
    assert tool.workbench is wb


def test_tool_init_with_bad_config(tmp_path: Path):
    with pytest.raises(ValueError, match="cannot read config"):
        TauTool(config=str(tmp_path / "absent.json"))


# ---------------------------------------------------------------------------
# Tool metadata
# ---------------------------------------------------------------------------


def test_all_tools_have_metadata():
    names = set()
    for tool_cls in ALL_TOOLS:
        tool = tool_cls()
        assert tool.name.startswith("earring_")
        assert tool.description
        assert tool.args_schema is not None, f"{tool.name} missing args_schema"
        assert tool.handle_tool_error is True, f"{tool.name} missing handle_tool_error"
        names.add(tool.name)
    assert len(names) == len(ALL_TOOLS)


@pytest.mark.parametrize(
    ("tool_cls", "required", "optional"),
    [
        (TauTool, ["seq"], ["depth"]),
        (DensityTool, ["depth"], ["grid"]),
        (SigmaTool, ["n"], ["depth"]),
        (HomologyTool, [], ["facets", "sizes", "matrices"]),
    ],
)
def test_optional_schema_fields_accept_null(tool_cls: type, required: list[str],
                                            optional: list[str]):
    schema = tool_cls().args_schema
    assert schema.model_json_schema().get("required", []) == required
    values = {name: "1" if name == "seq" else 1 for name in required}
    parsed = schema.model_validate({**values, **dict.fromkeys(optional)})
    for name in optional:
        assert getattr(parsed, name) is None


# ---------------------------------------------------------------------------
# Tool calls
# ---------------------------------------------------------------------------


def test_tau_tool(wb: Workbench):
    result = json.loads(TauTool(workbench=wb)._run(seq="1,1"))
    assert result["tau"] == "1/2"
    assert result["contained"] is True


def test_enumerate_b_tool(wb: Workbench):
    result = json.loads(EnumerateBTool(workbench=wb)._run(n=2))
    assert result == [{"seq": "1,1", "tau": "1/2"}, {"seq": "1,2", "tau": "3/4"}]


def test_density_tool(wb: Workbench):
    result = json.loads(DensityTool(workbench=wb)._run(depth=1, grid=10))
    assert result == {"depth": 1, "grid": 10, "max_gap": "1/2"}


def test_sigma_tool(wb: Workbench):
    rows = json.loads(SigmaTool(workbench=wb)._run(n=1, samples=5, depth=4))
    assert len(rows) == 5
    assert set(rows[0]) == {"t", "circle", "turn", "error_bound"}
    assert rows[0]["circle"] == 0


def test_project_word_tool(wb: Workbench):
    result = json.loads(ProjectWordTool(workbench=wb)._run(k=1))
    assert result["word"] == "abAB"
    assert result["is_single_commutator"] is True


def test_commutator_search_tool(wb: Workbench):
    tool = CommutatorSearchTool(workbench=wb)
    assert json.loads(tool._run(word="abAB"))["is_commutator"] is True
    result = json.loads(tool._run(word="abABabAB"))
    assert result["is_commutator"] is False
    assert result["witness"] is None


def test_homology_tool(wb: Workbench):
    tool = HomologyTool(workbench=wb)
    result = json.loads(tool._run(facets=[[0, 1, 2]]))
    assert result["groups"] == ["Z", "0", "0"]
    result = json.loads(tool._run(sizes=[1, 1, 1], matrices=[[[0]], [[2]]]))
    assert result["torsion"] == [[], [2], []]


def test_current_to_chain_tool(wb: Workbench):
    current = {"dimension": 1,
               "edges": [{"circle": 4, "intervals": [{"from": "0", "to": "1", "weight": 1}]}]}
    result = json.loads(CurrentToChainTool(workbench=wb)._run(current=current, epsilon="2"))
    assert result["check"]["exact"] is True
    assert result["representation"]["certificate"]["dimension"] == 1


def test_run_suite_tool(wb: Workbench):
    result = json.loads(RunSuiteTool(workbench=wb)._run(name="freegroup"))
    assert result["suite"] == "freegroup"
    assert result["passed"] is True


async def test_tool_async(wb: Workbench):
    result = await TauTool(workbench=wb).ainvoke({"seq": "1,2"})
    assert json.loads(result)["tau"] == "3/4"


# ---------------------------------------------------------------------------
# Error handling
# ---------------------------------------------------------------------------


def test_tool_raises_tool_exception(wb: Workbench):
    with pytest.raises(ToolException, match="SequenceError"):
        TauTool(workbench=wb)._run(seq="2")


def test_unknown_suite_raises_tool_exception(wb: Workbench):
    with pytest.raises(ToolException, match="DomainError: unknown suite"):
        RunSuiteTool(workbench=wb)._run(name="topology")


def test_invoke_returns_error_text(wb: Workbench):
    """With handle_tool_error the agent sees the message instead of a traceback."""
    result = ProjectWordTool(workbench=wb).invoke({"k": 9})
    assert result.startswith("DomainError: ")
