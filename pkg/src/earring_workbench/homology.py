"""Integral homology of finite simplicial complexes through Smith normal form."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from earring_workbench.errors import ChainError

logger = logging.getLogger(__name__)

IntMatrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SimplicialComplexMatrixSet:
    """Boundary matrices ``d_k`` of shape ``(sizes[k-1], sizes[k])`` for k = 1..top."""

    sizes: tuple[int, ...]
    matrices: tuple[IntMatrix, ...]

    def __post_init__(self) -> None:
        if not self.sizes or any(size < 0 for size in self.sizes):
            raise ChainError("chain group sizes must be non-negative and non-empty")
        if len(self.matrices) != len(self.sizes) - 1:
            raise ChainError(
                f"expected {len(self.sizes) - 1} boundary matrices, got {len(self.matrices)}"
            )
        for k, matrix in enumerate(self.matrices, start=1):
            rows, cols = self.sizes[k - 1], self.sizes[k]
            if len(matrix) != rows or any(len(row) != cols for row in matrix):
                raise ChainError(f"boundary matrix d_{k} must have shape ({rows}, {cols})")
            if any(isinstance(x, bool) or not isinstance(x, int) for row in matrix for x in row):
                raise ChainError(f"boundary matrix d_{k} has non-integer entries")
        for k in range(1, len(self.matrices)):
            if not _product_is_zero(self.matrices[k - 1], self.matrices[k], self.sizes[k - 1],
                                    self.sizes[k + 1]):
                raise ChainError(f"d_{k} composed with d_{k + 1} is not zero")

    @classmethod
    def create(cls, sizes: Iterable[int],
               matrices: Iterable[Sequence[Sequence[int]]]) -> SimplicialComplexMatrixSet:
        return cls(tuple(sizes), tuple(tuple(tuple(row) for row in m) for m in matrices))

    @property
    def top_dimension(self) -> int:
        return len(self.sizes) - 1


def _as_matrix(matrix: IntMatrix, rows: int, cols: int) -> Matrix:
    return Matrix(rows, cols, [x for row in matrix for x in row])


def _product_is_zero(left: IntMatrix, right: IntMatrix, rows: int, cols: int) -> bool:
    if rows == 0 or cols == 0 or not right:
        return True
    inner = len(right)
    product = _as_matrix(left, rows, inner) * _as_matrix(right, inner, cols)
    return product.is_zero_matrix is True


def smith_invariants(matrix: IntMatrix, rows: int, cols: int) -> list[int]:
    """Nonzero invariant factors (absolute values) of an integer matrix."""
    if rows == 0 or cols == 0:
        return []
    factors = invariant_factors(_as_matrix(matrix, rows, cols), domain=ZZ)
    return [abs(int(f)) for f in factors if int(f) != 0]


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def homology(complex_: SimplicialComplexMatrixSet) -> list[HomologyGroup]:
    """``H_k = ker d_k / im d_{k+1}`` for every degree, from Smith normal forms."""
    sizes = complex_.sizes
    invariants = [
        smith_invariants(m, sizes[k - 1], sizes[k])
        for k, m in enumerate(complex_.matrices, start=1)
    ]
    ranks = [0] + [len(inv) for inv in invariants] + [0]
    groups = []
    for k, size in enumerate(sizes):
        torsion = tuple(f for f in invariants[k] if f > 1) if k < len(invariants) else ()
        groups.append(HomologyGroup(k, size - ranks[k] - ranks[k + 1], torsion))
    logger.debug("homology: %s", ", ".join(str(g) for g in groups))
    return groups


def rational_betti(complex_: SimplicialComplexMatrixSet) -> list[int]:
    """Betti numbers over Q by rank-nullity; independent of the Smith normal form."""
    sizes = complex_.sizes
    ranks = [0]
    for k, matrix in enumerate(complex_.matrices, start=1):
        rows, cols = sizes[k - 1], sizes[k]
        ranks.append(_as_matrix(matrix, rows, cols).rank() if rows and cols else 0)
    ranks.append(0)
    return [size - ranks[k] - ranks[k + 1] for k, size in enumerate(sizes)]


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of sorted vertex tuples, grouped by dimension."""

    simplices: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]]) -> SimplicialComplex:
        closure: set[tuple[int, ...]] = set()
        for facet in facets:
            vertices = tuple(sorted(set(facet)))
            if not vertices:
                raise ChainError("empty facet")
            for size in range(1, len(vertices) + 1):
                closure.update(combinations(vertices, size))
        if not closure:
            raise ChainError("a complex needs at least one facet")
        top = max(len(s) for s in closure) - 1
        return cls(tuple(
            tuple(sorted(s for s in closure if len(s) == k + 1)) for k in range(top + 1)
        ))

    def boundary_matrices(self) -> SimplicialComplexMatrixSet:
        matrices = []
        for k in range(1, len(self.simplices)):
            index = {face: i for i, face in enumerate(self.simplices[k - 1])}
            rows = [[0] * len(self.simplices[k]) for _ in self.simplices[k - 1]]
            for col, simplex in enumerate(self.simplices[k]):
                for j in range(len(simplex)):
                    face = simplex[:j] + simplex[j + 1:]
                    rows[index[face]][col] = -1 if j % 2 else 1
            matrices.append(rows)
        return SimplicialComplexMatrixSet.create((len(s) for s in self.simplices), matrices)
