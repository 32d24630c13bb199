"""Exception hierarchy shared by every workbench module."""

from __future__ import annotations


class WorkbenchError(ValueError):
    """Base class for rejected inputs and failed preconditions."""


class SequenceError(WorkbenchError):
    """Malformed sequence literal, a sequence outside B, or an enumeration guard."""


class DomainError(WorkbenchError):
    """An argument lies outside the domain of the requested operation."""


class PathError(WorkbenchError):
    """Invalid piecewise path: discontinuity, bad segment data or non-integer turns."""


class WordError(WorkbenchError):
    """Malformed free-group word literal."""


class ChainError(WorkbenchError):
    """Dimension mismatch, malformed boundary matrices or a violated cone-fill precondition."""


class CurrentError(WorkbenchError):
    """Invalid graph data, graph maps or currents, or a failed cover construction."""


class GenericityError(CurrentError):
    """A slicing radius hits a breakpoint, a vertex level or a critical value."""
