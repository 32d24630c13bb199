"""Earring toolkit: every workbench tool sharing one ``Workbench``."""

from __future__ import annotations

from langchain_core.tools import BaseTool
from langchain_core.tools.base import BaseToolkit
from pydantic import Field, model_validator

from earring_workbench.config import WorkbenchSettings
from earring_workbench.tools import ALL_TOOLS
from earring_workbench.workbench import Workbench

_VALID_TOOL_NAMES: frozenset[str] = frozenset(
    tool_cls.model_fields["name"].default for tool_cls in ALL_TOOLS
)


class WorkbenchToolkit(BaseToolkit):
    """LangChain toolkit over the Hawaiian earring verification workbench.

    Setup:
        Install ``earring-workbench``; optionally point ``EARRING_WORKBENCH_CONFIG`` at a
        JSON settings file.

        .. code-block:: bash

            pip install earring-workbench
            export EARRING_WORKBENCH_CONFIG="workbench.json"

    Key init args:
        settings: WorkbenchSettings
            Depths, sample counts and precision. Read from the config file if omitted.
        selected_tools: list[str] | None
            Optional subset of tool names to include (default: all 9).

    Instantiate:
        .. code-block:: python

            from earring_workbench import WorkbenchToolkit

            toolkit = WorkbenchToolkit()
            tools = toolkit.get_tools()

    Use a subset of tools:
        .. code-block:: python

            toolkit = WorkbenchToolkit(
                selected_tools=["earring_tau", "earring_project_word"],
            )
    """

    settings: WorkbenchSettings = Field(default_factory=WorkbenchSettings.load)
    selected_tools: list[str] | None = Field(
        default=None,
        description=(
            "Optional list of tool names to include. "
            "If None, all 9 tools are returned."
        ),
    )

    @model_validator(mode="after")
    def _validate_selected_tools(self) -> WorkbenchToolkit:
        if self.selected_tools is not None:
            invalid = set(self.selected_tools) - _VALID_TOOL_NAMES
            if invalid:
                raise ValueError(
                    f"Invalid tool names: {sorted(invalid)}. "
                    f"Valid names: {sorted(_VALID_TOOL_NAMES)}"
                )
        return self

    def get_tools(self) -> list[BaseTool]:
        """Return the workbench tools configured with one shared workbench."""
        workbench = Workbench(settings=self.settings)
        all_tools = [tool_cls(workbench=workbench) for tool_cls in ALL_TOOLS]
        if self.selected_tools is not None:
            selected = set(self.selected_tools)
            return [t for t in all_tools if t.name in selected]
        return all_tools
