"""Integer singular chains on exactly represented simplices.

Simplices are affine (rational vertex tuples) or the image of an affine simplex of
``[0, 1] x X`` under a straight-line contraction. Every operator here is a formal-sum
operation, so the chain identities hold exactly and can be compared with ``==``.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Protocol

from sympy import Matrix

from earring_workbench.certified import format_rational, sqrt_sum_dominates
from earring_workbench.errors import ChainError

logger = logging.getLogger(__name__)

Point = tuple[Fraction, ...]

MAX_SUBDIVISION_DEPTH = 64


def as_point(coordinates: Iterable[Fraction | int | str]) -> Point:
    return tuple(Fraction(x) for x in coordinates)


def squared_distance(p: Point, q: Point) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(p, q)), Fraction(0))


def diameter_sq(points: Iterable[Point]) -> Fraction:
    pts = list(dict.fromkeys(points))
    return max((squared_distance(p, q) for p, q in combinations(pts, 2)), default=Fraction(0))


def barycenter(points: Sequence[Point]) -> Point:
    count = len(points)
    return tuple(sum(coords, Fraction(0)) / count for coords in zip(*points))


# ---------------------------------------------------------------------------
# Simplices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineSimplex:
    """Affine map of the standard simplex sending ``e_i`` to ``vertices[i]``."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ChainError("a simplex needs at least one vertex")
        dims = {len(v) for v in self.vertices}
        if len(dims) != 1:
            raise ChainError("simplex vertices live in different ambient dimensions")

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def face(self, j: int) -> AffineSimplex:
        return AffineSimplex(self.vertices[:j] + self.vertices[j + 1:])

    def image_vertices(self) -> tuple[Point, ...]:
        return self.vertices

    def sort_key(self) -> tuple[Any, ...]:
        return (0, self.vertices)


@dataclass(frozen=True)
class ContractedSimplex:
    """``phi o sigma`` for an affine simplex ``sigma`` of ``[0, 1] x X`` that mixes times
    and points; coordinate 0 of each vertex is the time."""

    contraction: StraightLineContraction
    vertices: tuple[Point, ...]

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def face(self, j: int) -> Simplex:
        return self.contraction.simplex(self.vertices[:j] + self.vertices[j + 1:])

    def image_vertices(self) -> tuple[Point, ...]:
        return tuple(self.contraction.evaluate(v[0], v[1:]) for v in self.vertices)

    def sort_key(self) -> tuple[Any, ...]:
        return (1, self.contraction.basepoint, self.vertices)


Simplex = AffineSimplex | ContractedSimplex


# ---------------------------------------------------------------------------
# Chains
# ---------------------------------------------------------------------------


class Chain:
    """Finite formal sum of simplices of one dimension with nonzero integer coefficients."""

    __slots__ = ("_terms", "dimension")

    def __init__(self, terms: Mapping[Simplex, int] | Iterable[tuple[Simplex, int]] = (),
                 dimension: int | None = None) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Simplex, int] = {}
        for simplex, coefficient in items:
            if dimension is None:
                dimension = simplex.dimension
            elif simplex.dimension != dimension:
                raise ChainError(
                    f"simplex of dimension {simplex.dimension} in a {dimension}-chain"
                )
            merged[simplex] = merged.get(simplex, 0) + coefficient
        self._terms = {s: c for s, c in merged.items() if c}
        self.dimension = dimension if dimension is not None else 0

    @classmethod
    def zero(cls, dimension: int) -> Chain:
        return cls((), dimension)

    @classmethod
    def of(cls, simplex: Simplex, coefficient: int = 1) -> Chain:
        return cls(((simplex, coefficient),))

    @classmethod
    def affine(cls, *vertex_lists: Sequence[Sequence[Fraction | int | str]]) -> Chain:
        """Sum of affine simplices, each given as a list of vertex coordinates."""
        return cls(
            (AffineSimplex(tuple(as_point(v) for v in vertices)), 1) for vertices in vertex_lists
        )

    def items(self) -> Iterator[tuple[Simplex, int]]:
        return iter(self._terms.items())

    def sorted_items(self) -> list[tuple[Simplex, int]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def simplices(self) -> list[Simplex]:
        return [simplex for simplex, _ in self.sorted_items()]

    def coefficient(self, simplex: Simplex) -> int:
        return self._terms.get(simplex, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _combine(self, other: Chain, sign: int) -> Chain:
        if self and other and self.dimension != other.dimension:
            raise ChainError(
                f"cannot add chains of dimensions {self.dimension} and {other.dimension}"
            )
        dimension = self.dimension if self else other.dimension
        merged = dict(self._terms)
        for simplex, coefficient in other._terms.items():
            merged[simplex] = merged.get(simplex, 0) + sign * coefficient
        return Chain(merged, dimension)

    def __add__(self, other: Chain) -> Chain:
        return self._combine(other, 1)

    def __sub__(self, other: Chain) -> Chain:
        return self._combine(other, -1)

    def __neg__(self) -> Chain:
        return Chain({s: -c for s, c in self._terms.items()}, self.dimension)

    def __rmul__(self, factor: int) -> Chain:
        return Chain({s: factor * c for s, c in self._terms.items()}, self.dimension)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"Chain(dimension={self.dimension}, terms={len(self._terms)})"

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def image_vertices(self) -> list[Point]:
        seen: dict[Point, None] = {}
        for simplex in self._terms:
            for vertex in simplex.image_vertices():
                seen.setdefault(vertex, None)
        return sorted(seen)

    def max_simplex_diameter_sq(self) -> Fraction:
        return max(
            (diameter_sq(s.image_vertices()) for s in self._terms), default=Fraction(0)
        )

    def to_json(self) -> list[dict[str, Any]]:
        rows = []
        for simplex, coefficient in self.sorted_items():
            row: dict[str, Any] = {
                "coefficient": coefficient,
                "vertices": [[format_rational(x) for x in v] for v in simplex.vertices],
            }
            if isinstance(simplex, ContractedSimplex):
                row["contraction"] = [format_rational(x) for x in simplex.contraction.basepoint]
            rows.append(row)
        return rows

    @classmethod
    def from_json(cls, rows: Iterable[Mapping[str, Any]]) -> Chain:
        return cls(
            (AffineSimplex(tuple(as_point(v) for v in row["vertices"])), int(row["coefficient"]))
            for row in rows
        )


def _require_affine(simplex: Simplex, operation: str) -> AffineSimplex:
    if not isinstance(simplex, AffineSimplex):
        raise ChainError(f"{operation} is implemented for affine simplices only")
    return simplex


def boundary(c: Chain) -> Chain:
    """Alternating face sum; the boundary of a 0-chain is zero."""
    if c.dimension <= 0:
        return Chain.zero(-1)
    terms: list[tuple[Simplex, int]] = []
    for simplex, coefficient in c.items():
        for j in range(simplex.dimension + 1):
            terms.append((simplex.face(j), coefficient if j % 2 == 0 else -coefficient))
    return Chain(terms, c.dimension - 1)


def cone(apex: Point, c: Chain) -> Chain:
    """``apex . [v0, ..., vk] = [apex, v0, ..., vk]`` extended linearly."""
    return Chain(
        ((AffineSimplex((apex,) + _require_affine(s, "cone").vertices), coefficient)
         for s, coefficient in c.items()),
        c.dimension + 1,
    )


# ---------------------------------------------------------------------------
# Barycentric subdivision and its chain homotopy
# ---------------------------------------------------------------------------


@lru_cache(maxsize=65536)
def _subdivide_simplex(simplex: AffineSimplex) -> Chain:
    if simplex.dimension == 0:
        return Chain.of(simplex)
    return cone(barycenter(simplex.vertices), _subdivide_once(boundary(Chain.of(simplex))))


def _extend_linearly(c: Chain, operator: Callable[[AffineSimplex], Chain], dimension: int,
                     name: str) -> Chain:
    terms: list[tuple[Simplex, int]] = []
    for simplex, coefficient in c.items():
        for image, k in operator(_require_affine(simplex, name)).items():
            terms.append((image, coefficient * k))
    return Chain(terms, dimension)


def _subdivide_once(c: Chain) -> Chain:
    return _extend_linearly(c, _subdivide_simplex, c.dimension, "subdivision")


def subdivide(c: Chain, m: int) -> Chain:
    """m-fold barycentric subdivision."""
    if m < 0:
        raise ChainError(f"subdivision order must be >= 0, got {m}")
    for _ in range(m):
        c = _subdivide_once(c)
    return c


@lru_cache(maxsize=65536)
def _homotopy_simplex(simplex: AffineSimplex) -> Chain:
    # T(s) = b_s . (s - T(ds)), T = 0 on points; satisfies dT + Td = 1 - sd
    if simplex.dimension == 0:
        return Chain.zero(1)
    inner = Chain.of(simplex) - _homotopy_once(boundary(Chain.of(simplex)))
    return cone(barycenter(simplex.vertices), inner)


def _homotopy_once(c: Chain) -> Chain:
    return _extend_linearly(c, _homotopy_simplex, c.dimension + 1, "subdivision homotopy")


def subdiv_homotopy(c: Chain, m: int) -> Chain:
    """``D_m`` with ``b D_m(c) + D_m(b c) = sd^m(c) - c``, telescoped from one step."""
    if m < 0:
        raise ChainError(f"homotopy order must be >= 0, got {m}")
    result = Chain.zero(c.dimension + 1)
    current = c
    for _ in range(m):
        result = result - _homotopy_once(current)
        current = _subdivide_once(current)
    return result


# ---------------------------------------------------------------------------
# Maps, prism and contractions
# ---------------------------------------------------------------------------


class SimplexMap(Protocol):
    def simplex(self, vertices: tuple[Point, ...]) -> Simplex: ...


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + offset`` with rational entries."""

    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]

    @classmethod
    def create(cls, matrix: Sequence[Sequence[Fraction | int]],
               offset: Sequence[Fraction | int] | None = None) -> AffineMap:
        rows = tuple(as_point(row) for row in matrix)
        shift = as_point(offset) if offset is not None else (Fraction(0),) * len(rows)
        if len(shift) != len(rows) or len({len(row) for row in rows}) > 1:
            raise ChainError("affine map matrix and offset have inconsistent shapes")
        return cls(rows, shift)

    @classmethod
    def identity(cls, dimension: int) -> AffineMap:
        return cls.create([[int(i == j) for j in range(dimension)] for i in range(dimension)])

    @classmethod
    def time_inclusion(cls, t: Fraction | int, dimension: int) -> AffineMap:
        """``x -> (t, x)`` from ``X`` into ``[0, 1] x X``."""
        rows = [[0] * dimension] + [[int(i == j) for j in range(dimension)]
                                    for i in range(dimension)]
        return cls.create(rows, [t] + [0] * dimension)

    def __call__(self, point: Point) -> Point:
        if self.matrix and len(point) != len(self.matrix[0]):
            raise ChainError("point dimension does not match the affine map")
        return tuple(
            sum((a * x for a, x in zip(row, point)), Fraction(0)) + b
            for row, b in zip(self.matrix, self.offset)
        )

    def simplex(self, vertices: tuple[Point, ...]) -> Simplex:
        return AffineSimplex(tuple(self(v) for v in vertices))


@dataclass(frozen=True)
class StraightLineContraction:
    """``phi(t, p) = x0 + t (p - x0)``: strong gamma-Lipschitz with gamma = 1 on any set
    containing the basepoint."""

    basepoint: Point
    gamma: Fraction = Fraction(1)

    @classmethod
    def for_chain(cls, c: Chain, gamma: Fraction | int = 1) -> StraightLineContraction:
        vertices = c.image_vertices()
        if not vertices:
            raise ChainError("cannot choose a basepoint for the zero chain")
        return cls(vertices[0], Fraction(gamma))

    def evaluate(self, t: Fraction, point: Point) -> Point:
        return tuple(x0 + t * (p - x0) for x0, p in zip(self.basepoint, point))

    def simplex(self, vertices: tuple[Point, ...]) -> Simplex:
        """Canonical form of ``phi o [vertices]`` for vertices of ``[0, 1] x X``.

        Constant time or constant point makes the composite affine.
        """
        times = {v[0] for v in vertices}
        points = {v[1:] for v in vertices}
        if len(times) == 1 or len(points) == 1:
            return AffineSimplex(tuple(self.evaluate(v[0], v[1:]) for v in vertices))
        return ContractedSimplex(self, vertices)

    def check_estimate(self, pairs: Iterable[tuple[Fraction, Point, Fraction, Point]],
                       set_diameter_sq: Fraction) -> bool:
        """Exact check of ``d(phi(t,s), phi(t',s')) <= gamma D |t-t'| + gamma d(s,s')``."""
        for t, s, t2, s2 in pairs:
            moved = squared_distance(self.evaluate(t, s), self.evaluate(t2, s2))
            if not sqrt_sum_dominates(moved, self.gamma * abs(t - t2), set_diameter_sq,
                                      self.gamma, squared_distance(s, s2)):
                return False
        return True


Contraction = StraightLineContraction


def push_forward(f: SimplexMap, c: Chain) -> Chain:
    """``f_# c``: compose every simplex with ``f``."""
    terms = [(f.simplex(_require_affine(s, "push-forward").vertices), coefficient)
             for s, coefficient in c.items()]
    return Chain(terms, c.dimension)


def prism(c: Chain) -> Chain:
    """Staircase triangulation of ``[0, 1] x sigma`` for every simplex of ``c``."""
    terms: list[tuple[Simplex, int]] = []
    for simplex, coefficient in c.items():
        vertices = _require_affine(simplex, "prism").vertices
        bottom = [(Fraction(0),) + v for v in vertices]
        top = [(Fraction(1),) + v for v in vertices]
        for i in range(len(vertices)):
            piece = AffineSimplex(tuple(bottom[:i + 1] + top[i:]))
            terms.append((piece, coefficient if i % 2 == 0 else -coefficient))
    return Chain(terms, c.dimension + 1)


def constant_simplex(point: Point, dimension: int) -> AffineSimplex:
    return AffineSimplex((point,) * (dimension + 1))


@dataclass(frozen=True)
class ConeFilling:
    chain: Chain
    contraction: StraightLineContraction
    diameter_sq: Fraction
    input_diameter_sq: Fraction

    @property
    def within_bound(self) -> bool:
        bound = 2 * self.contraction.gamma
        return self.diameter_sq <= bound * bound * self.input_diameter_sq


def cone_fill(c: Chain, phi: StraightLineContraction | None = None) -> ConeFilling:
    """Filling ``c_bar`` with ``b(c_bar) = c`` for a cycle ``c``."""
    if not c:
        zero = Chain.zero(c.dimension + 1)
        contraction = phi or StraightLineContraction((Fraction(0),))
        return ConeFilling(zero, contraction, Fraction(0), Fraction(0))
    if boundary(c):
        raise ChainError("cone filling needs a cycle: b(c) is not zero")
    k = c.dimension
    total = c.coefficient_sum()
    if total and k % 2 == 0:
        raise ChainError(
            f"cone filling of a {k}-cycle needs coefficient sum 0, got {total}; "
            "constant simplices of even dimension are not boundaries of constants"
        )
    phi = phi or StraightLineContraction.for_chain(c)
    filled = push_forward(phi, prism(c))
    if k % 2 == 1 and total:
        filled = filled + total * Chain.of(constant_simplex(phi.basepoint, k + 1))
    if boundary(filled) != c:
        raise AssertionError("cone filling boundary mismatch")
    result = ConeFilling(
        filled, phi, diameter_sq(filled.image_vertices()), diameter_sq(c.image_vertices())
    )
    logger.debug("cone filled a %d-cycle with %d simplices", k, len(filled))
    return result


# ---------------------------------------------------------------------------
# Regions and parts of subdivided chains
# ---------------------------------------------------------------------------


class Region(Protocol):
    def meets(self, vertices: Sequence[Point]) -> bool: ...


class Everything:
    def meets(self, vertices: Sequence[Point]) -> bool:
        return True


class Nowhere:
    def meets(self, vertices: Sequence[Point]) -> bool:
        return False


@dataclass(frozen=True)
class HalfSpace:
    """``{x : normal . x <= offset}``, or ``>=`` when ``superlevel`` is set."""

    normal: Point
    offset: Fraction
    superlevel: bool = False

    def value(self, point: Point) -> Fraction:
        return sum((a * x for a, x in zip(self.normal, point)), Fraction(0))

    def meets(self, vertices: Sequence[Point]) -> bool:
        values = [self.value(v) for v in vertices]
        return max(values) >= self.offset if self.superlevel else min(values) <= self.offset


def _solve(gram: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    matrix = Matrix(gram)
    if matrix.det() == 0:
        return None
    solution = matrix.LUsolve(Matrix(rhs))
    return [Fraction(int(x.p), int(x.q)) for x in solution]


def distance_sq_to_hull(point: Point, vertices: Sequence[Point]) -> Fraction:
    """Exact squared distance from ``point`` to the convex hull of ``vertices``."""
    distinct = list(dict.fromkeys(vertices))
    best = min(squared_distance(point, v) for v in distinct)
    for size in range(2, len(distinct) + 1):
        for subset in combinations(distinct, size):
            origin = subset[0]
            edges = [tuple(a - b for a, b in zip(v, origin)) for v in subset[1:]]
            gram = [[sum((a * b for a, b in zip(e, f)), Fraction(0)) for f in edges]
                    for e in edges]
            target = tuple(a - b for a, b in zip(point, origin))
            rhs = [sum((a * b for a, b in zip(e, target)), Fraction(0)) for e in edges]
            weights = _solve(gram, rhs)
            if weights is None or min(weights) < 0 or sum(weights) > 1:
                continue
            foot = tuple(
                o + sum((w * e[i] for w, e in zip(weights, edges)), Fraction(0))
                for i, o in enumerate(origin)
            )
            best = min(best, squared_distance(point, foot))
    return best


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball, the sub-level set ``{|x - center|^2 <= radius_sq}``."""

    center: Point
    radius_sq: Fraction

    def meets(self, vertices: Sequence[Point]) -> bool:
        return distance_sq_to_hull(self.center, vertices) <= self.radius_sq


def part_near(c: Chain, region: Region, epsilon: Fraction) -> tuple[Chain, int]:
    """Subdivide until every simplex is shorter than ``epsilon``; keep those meeting ``region``.

    Returns the kept part and the subdivision order ``m``.
    """
    if epsilon <= 0:
        raise ChainError("epsilon must be positive")
    bound = epsilon * epsilon
    subdivided = c
    m = 0
    while subdivided.max_simplex_diameter_sq() >= bound:
        if m == MAX_SUBDIVISION_DEPTH:
            raise ChainError("subdivision depth exhausted before reaching epsilon")
        subdivided = _subdivide_once(subdivided)
        m += 1
    kept = Chain(
        ((s, coefficient) for s, coefficient in subdivided.items()
         if region.meets(s.image_vertices())),
        subdivided.dimension,
    )
    return kept, m
