"""Exact verification workbench for the Hawaiian earring constructions."""

from importlib.metadata import version

from earring_workbench.config import WorkbenchSettings
from earring_workbench.errors import (
    ChainError,
    CurrentError,
    DomainError,
    GenericityError,
    PathError,
    SequenceError,
    WordError,
    WorkbenchError,
)
from earring_workbench.suites import CheckResult, SuiteReport
from earring_workbench.toolkit import WorkbenchToolkit
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

__version__ = version("earring-workbench")

__all__ = [
    "ALL_TOOLS",
    "ChainError",
    "CheckResult",
    "CommutatorSearchTool",
    "CurrentError",
    "CurrentToChainTool",
    "DensityTool",
    "DomainError",
    "EnumerateBTool",
    "GenericityError",
    "HomologyTool",
    "PathError",
    "ProjectWordTool",
    "RunSuiteTool",
    "SequenceError",
    "SigmaTool",
    "SuiteReport",
    "TauTool",
    "WordError",
    "Workbench",
    "WorkbenchError",
    "WorkbenchSettings",
    "WorkbenchToolkit",
]
