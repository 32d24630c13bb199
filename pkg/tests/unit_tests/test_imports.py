"""Verify public API exports match expectations."""

from earring_workbench import __all__

EXPECTED_ALL = [
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


def test_all_exports_match():
    assert sorted(__all__) == sorted(EXPECTED_ALL)


def test_all_importable():
    """Every name in __all__ is actually importable."""
    import earring_workbench

    for name in __all__:
        assert hasattr(earring_workbench, name), f"{name} listed in __all__ but not importable"


def test_errors_share_one_base():
    import earring_workbench

    for name in __all__:
        if name.endswith("Error"):
            assert issubclass(getattr(earring_workbench, name), earring_workbench.WorkbenchError)
