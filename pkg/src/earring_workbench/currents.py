"""Integral 0- and 1-currents on metric graphs.

A 1-current is an integer multiplicity that is piecewise constant along each edge; a
0-current is a finite sum of weighted point masses. Slicing by a distance function, PL chains
on graphs and the chain representation of currents of dimension at most one are built on top.
"""

from __future__ import annotations

import logging
import random
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Any

from pydantic import BaseModel, Field

from earring_workbench.certified import (
    CertifiedReal,
    PiEnclosure,
    format_rational,
    parse_rational,
)
from earring_workbench.earring import ArcSegment, PiecewisePath
from earring_workbench.errors import CurrentError, DomainError, GenericityError
from earring_workbench.graphs import (
    AffineOnto,
    DistanceFunction,
    GraphMap,
    GraphPoint,
    Leg,
    MetricGraph,
    merge_intervals,
)

logger = logging.getLogger(__name__)

Arc = tuple[Fraction, Fraction, int]
ArcSet = Mapping[str, Sequence[tuple[Fraction, Fraction]]]

DEFAULT_COVER_MAX_DEPTH = 32


def _same_graph(left: MetricGraph, right: MetricGraph) -> None:
    if left is not right and left.description != right.description:
        raise CurrentError("currents live on different graphs")


def _accumulate(pieces: Iterable[tuple[Fraction, Fraction, int]]) -> tuple[Arc, ...]:
    """Sum weighted intervals into disjoint, merged arcs with nonzero weight."""
    oriented = [(a, b, w) if a < b else (b, a, -w) for a, b, w in pieces if a != b and w]
    cuts = sorted({x for a, b, _ in oriented for x in (a, b)})
    arcs: list[Arc] = []
    for lo, hi in zip(cuts, cuts[1:]):
        weight = sum(w for a, b, w in oriented if a <= lo and hi <= b)
        if not weight:
            continue
        if arcs and arcs[-1][1] == lo and arcs[-1][2] == weight:
            arcs[-1] = (arcs[-1][0], hi, weight)
        else:
            arcs.append((lo, hi, weight))
    return tuple(arcs)


def everything(graph: MetricGraph) -> dict[str, list[tuple[Fraction, Fraction]]]:
    return {key: [(Fraction(0), Fraction(1))] for key in graph.edges}


def edges_only(
    graph: MetricGraph, keys: Iterable[str]
) -> dict[str, list[tuple[Fraction, Fraction]]]:
    return {graph.edge(key).key: [(Fraction(0), Fraction(1))] for key in keys}


# ---------------------------------------------------------------------------
# 0-currents
# ---------------------------------------------------------------------------


class GraphCurrent0:
    """``sum theta_i [x_i]`` with distinct points and nonzero integer weights."""

    __slots__ = ("_masses", "graph")

    dimension = 0

    def __init__(self, graph: MetricGraph,
                 masses: Mapping[GraphPoint, int] | Iterable[tuple[GraphPoint, int]] = ()) -> None:
        self.graph = graph
        items = masses.items() if isinstance(masses, Mapping) else masses
        merged: dict[GraphPoint, int] = {}
        for point, weight in items:
            point = graph.check_point(point)
            merged[point] = merged.get(point, 0) + int(weight)
        self._masses = {p: w for p, w in sorted(merged.items()) if w}

    @classmethod
    def zero(cls, graph: MetricGraph) -> GraphCurrent0:
        return cls(graph)

    def items(self) -> Iterator[tuple[GraphPoint, int]]:
        return iter(self._masses.items())

    def weight(self, point: GraphPoint) -> int:
        return self._masses.get(self.graph.check_point(point), 0)

    @property
    def support(self) -> list[GraphPoint]:
        return list(self._masses)

    def __bool__(self) -> bool:
        return bool(self._masses)

    def _combine(self, other: GraphCurrent0, sign: int) -> GraphCurrent0:
        _same_graph(self.graph, other.graph)
        merged = dict(self._masses)
        for point, weight in other._masses.items():
            merged[point] = merged.get(point, 0) + sign * weight
        return GraphCurrent0(self.graph, merged)

    def __add__(self, other: GraphCurrent0) -> GraphCurrent0:
        return self._combine(other, 1)

    def __sub__(self, other: GraphCurrent0) -> GraphCurrent0:
        return self._combine(other, -1)

    def __neg__(self) -> GraphCurrent0:
        return GraphCurrent0(self.graph, {p: -w for p, w in self._masses.items()})

    def __rmul__(self, factor: int) -> GraphCurrent0:
        return GraphCurrent0(self.graph, {p: factor * w for p, w in self._masses.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphCurrent0):
            return NotImplemented
        return self._masses == other._masses

    def __hash__(self) -> int:
        return hash(frozenset(self._masses.items()))

    def __repr__(self) -> str:
        body = " + ".join(f"{w}[{p}]" for p, w in self._masses.items())
        return f"GraphCurrent0({body or '0'})"

    def mass(self) -> int:
        return sum(abs(w) for w in self._masses.values())

    def total(self) -> int:
        return sum(self._masses.values())

    def restrict(self, keep: Callable[[GraphPoint], bool]) -> GraphCurrent0:
        return GraphCurrent0(self.graph, {p: w for p, w in self._masses.items() if keep(p)})

    def push_forward(self, g: GraphMap) -> GraphCurrent0:
        _same_graph(self.graph, g.source)
        return GraphCurrent0(g.target, ((g(p), w) for p, w in self._masses.items()))

    def to_json(self) -> dict[str, Any]:
        return {
            "graph": self.graph.to_json(),
            "dimension": 0,
            "points": [{"point": str(p), "weight": w} for p, w in self._masses.items()],
        }


# ---------------------------------------------------------------------------
# 1-currents
# ---------------------------------------------------------------------------


class GraphCurrent1:
    """Integer step multiplicity along edges, oriented tail to head."""

    __slots__ = ("_arcs", "graph")

    dimension = 1

    def __init__(self, graph: MetricGraph,
                 pieces: Iterable[tuple[str, Fraction, Fraction, int]] = ()) -> None:
        self.graph = graph
        by_edge: dict[str, list[tuple[Fraction, Fraction, int]]] = defaultdict(list)
        for key, start, end, weight in pieces:
            graph.edge(key)
            start, end = Fraction(start), Fraction(end)
            if not (0 <= start <= 1 and 0 <= end <= 1):
                raise CurrentError(f"arc [{start}, {end}] leaves edge {key!r}")
            by_edge[key].append((start, end, int(weight)))
        self._arcs = {
            key: arcs for key in sorted(by_edge) if (arcs := _accumulate(by_edge[key]))
        }

    @classmethod
    def zero(cls, graph: MetricGraph) -> GraphCurrent1:
        return cls(graph)

    @classmethod
    def from_legs(cls, graph: MetricGraph, legs: Iterable[Leg], weight: int = 1) -> GraphCurrent1:
        return cls(graph, ((leg.edge, leg.start, leg.end, weight) for leg in legs))

    @classmethod
    def full_loop(cls, graph: MetricGraph, key: str, weight: int = 1) -> GraphCurrent1:
        return cls(graph, [(key, Fraction(0), Fraction(1), weight)])

    def arcs(self) -> Iterator[tuple[str, Fraction, Fraction, int]]:
        for key, arcs in self._arcs.items():
            for start, end, weight in arcs:
                yield key, start, end, weight

    def edge_arcs(self, key: str) -> tuple[Arc, ...]:
        return self._arcs.get(key, ())

    def __bool__(self) -> bool:
        return bool(self._arcs)

    def _combine(self, other: GraphCurrent1, sign: int) -> GraphCurrent1:
        _same_graph(self.graph, other.graph)
        return GraphCurrent1(
            self.graph,
            list(self.arcs()) + [(k, a, b, sign * w) for k, a, b, w in other.arcs()],
        )

    def __add__(self, other: GraphCurrent1) -> GraphCurrent1:
        return self._combine(other, 1)

    def __sub__(self, other: GraphCurrent1) -> GraphCurrent1:
        return self._combine(other, -1)

    def __neg__(self) -> GraphCurrent1:
        return GraphCurrent1(self.graph, ((k, a, b, -w) for k, a, b, w in self.arcs()))

    def __rmul__(self, factor: int) -> GraphCurrent1:
        return GraphCurrent1(self.graph, ((k, a, b, factor * w) for k, a, b, w in self.arcs()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphCurrent1):
            return NotImplemented
        return self._arcs == other._arcs

    def __hash__(self) -> int:
        return hash(tuple(self._arcs.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}[{a},{b}]x{w}" for k, a, b, w in self.arcs())
        return f"GraphCurrent1({body or '0'})"

    def boundary(self) -> GraphCurrent0:
        masses: list[tuple[GraphPoint, int]] = []
        for key, start, end, weight in self.arcs():
            masses.append((self.graph.point(key, end), weight))
            masses.append((self.graph.point(key, start), -weight))
        return GraphCurrent0(self.graph, masses)

    def mass_coefficient(self) -> Fraction:
        """Weighted arc length in graph units."""
        return sum(
            (abs(w) * (b - a) * self.graph.edges[k].length for k, a, b, w in self.arcs()),
            Fraction(0),
        )

    def mass(self, pi: PiEnclosure | None = None) -> CertifiedReal:
        return self.graph.measure(self.mass_coefficient(), pi)

    def restrict(self, region: ArcSet) -> GraphCurrent1:
        """``T`` restricted to a finite union of closed arcs given per edge."""
        rows = []
        for key, arcs in self._arcs.items():
            for lo, hi in merge_intervals(region.get(key, ())):
                for start, end, weight in arcs:
                    left, right = max(start, lo), min(end, hi)
                    if left < right:
                        rows.append((key, left, right, weight))
        return GraphCurrent1(self.graph, rows)

    def breakpoints(self) -> set[GraphPoint]:
        return {
            self.graph.point(key, x) for key, a, b, _ in self.arcs() for x in (a, b)
        }

    def support_arcs(self) -> dict[str, list[tuple[Fraction, Fraction]]]:
        return {
            key: merge_intervals((a, b) for a, b, _ in arcs) for key, arcs in self._arcs.items()
        }

    def push_forward(self, g: GraphMap) -> GraphCurrent1:
        _same_graph(self.graph, g.source)
        rows = []
        for key, start, end, weight in self.arcs():
            for piece in g.pieces[key]:
                left, right = max(start, piece.start), min(end, piece.end)
                if left < right and isinstance(piece.image, AffineOnto):
                    rows.append((piece.image.edge, piece.image_param(left),
                                 piece.image_param(right), weight))
        return GraphCurrent1(g.target, rows)

    def to_json(self) -> dict[str, Any]:
        edges = []
        for key, arcs in self._arcs.items():
            row: dict[str, Any] = {"edge": key}
            if self.graph.unit == "pi" and key.startswith("L"):
                row["circle"] = int(key[1:])
            row["intervals"] = [
                {"from": format_rational(a), "to": format_rational(b),
                 "weight": abs(w), "orientation": 1 if w > 0 else -1}
                for a, b, w in arcs
            ]
            edges.append(row)
        return {"graph": self.graph.to_json(), "dimension": 1, "edges": edges}


GraphCurrent = GraphCurrent0 | GraphCurrent1


def load_current(data: Mapping[str, Any], graph: MetricGraph | None = None) -> GraphCurrent:
    """Parse the JSON produced by ``to_json``; ``circle`` may stand in for ``edge``."""
    try:
        if graph is None:
            graph = MetricGraph.from_json(data["graph"])
        dimension = int(data.get("dimension", 1))
        if dimension == 0:
            return GraphCurrent0(graph, [
                (GraphPoint.parse(str(row["point"])), int(row["weight"]))
                for row in data.get("points", [])
            ])
        if dimension != 1:
            raise CurrentError(f"only 0- and 1-currents exist on graphs, got {dimension}")
        rows = []
        for entry in data.get("edges", []):
            key = str(entry["edge"]) if "edge" in entry else f"L{int(entry['circle'])}"
            for interval in entry.get("intervals", []):
                sign = int(interval.get("orientation", 1))
                if sign not in (1, -1):
                    raise CurrentError("orientation must be 1 or -1")
                rows.append((key, parse_rational(interval["from"]),
                             parse_rational(interval["to"]), sign * int(interval["weight"])))
        return GraphCurrent1(graph, rows)
    except (KeyError, TypeError, DomainError) as exc:
        raise CurrentError(f"malformed current JSON: {exc}") from exc


def boundary1(t: GraphCurrent1) -> GraphCurrent0:
    return t.boundary()


def mass(t: GraphCurrent, pi: PiEnclosure | None = None) -> CertifiedReal:
    if isinstance(t, GraphCurrent0):
        return CertifiedReal.exact(t.mass())
    return t.mass(pi)


def restrict(t: GraphCurrent1, region: ArcSet) -> GraphCurrent1:
    return t.restrict(region)


def push_forward_current(g: GraphMap, t: GraphCurrent) -> GraphCurrent:
    return t.push_forward(g)


# ---------------------------------------------------------------------------
# Slicing
# ---------------------------------------------------------------------------


def critical_levels(t: GraphCurrent1, d: DistanceFunction) -> set[Fraction]:
    """Radii where ``{d <= r}`` may cut ``t`` non-transversally."""
    return d.levels() | {d(p) for p in t.breakpoints()}


def require_generic(t: GraphCurrent1, d: DistanceFunction, r: Fraction) -> None:
    if r <= 0:
        raise GenericityError(f"slice radius must be positive, got {r}")
    if r in critical_levels(t, d):
        raise GenericityError(f"slice radius {r} is a critical level of {d!r}")


def slice_current(t: GraphCurrent1, d: DistanceFunction, r: Fraction | int | str) -> GraphCurrent0:
    """``<T, d, r+> = d(T restricted to {d <= r}) - (dT) restricted to {d <= r}``."""
    r = parse_rational(r)
    _same_graph(t.graph, d.graph)
    require_generic(t, d, r)
    inside = t.restrict(d.sublevel_arcs(r))
    return inside.boundary() - t.boundary().restrict(lambda p: d(p) <= r)


# ---------------------------------------------------------------------------
# PL chains on graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphPath:
    """Constant-speed PL path: a start point followed by contiguous legs."""

    start: GraphPoint
    legs: tuple[Leg, ...] = ()

    def end(self, graph: MetricGraph) -> GraphPoint:
        if not self.legs:
            return self.start
        last = self.legs[-1]
        return graph.point(last.edge, last.end)

    def length(self, graph: MetricGraph) -> Fraction:
        return sum((graph.leg_length(leg) for leg in self.legs), Fraction(0))

    def validated(self, graph: MetricGraph) -> GraphPath:
        point = graph.check_point(self.start)
        for index, leg in enumerate(self.legs):
            if leg.start == leg.end:
                raise CurrentError(f"leg {index} of a graph path is degenerate")
            if graph.point(leg.edge, leg.start) != point:
                raise CurrentError(f"graph path is discontinuous before leg {index}")
            point = graph.point(leg.edge, leg.end)
        return GraphPath(graph.check_point(self.start), self.legs)

    def reversed(self, graph: MetricGraph) -> GraphPath:
        return GraphPath(self.end(graph), tuple(leg.reversed() for leg in reversed(self.legs)))

    def halves(self, graph: MetricGraph) -> tuple[GraphPath, GraphPath]:
        """Split at half the arc length."""
        target = self.length(graph) / 2
        if target == 0:
            return self, GraphPath(self.start)
        travelled = Fraction(0)
        for index, leg in enumerate(self.legs):
            ell = graph.leg_length(leg)
            if travelled + ell >= target:
                cut = leg.at((target - travelled) / ell)
                first = self.legs[:index] + (
                    (Leg(leg.edge, leg.start, cut),) if cut != leg.start else ()
                )
                second = ((Leg(leg.edge, cut, leg.end),) if cut != leg.end else ()) + self.legs[
                    index + 1:
                ]
                return GraphPath(self.start, first), GraphPath(graph.point(leg.edge, cut), second)
            travelled += ell
        raise AssertionError("unreachable: half length exceeds the path")

    def sort_key(self) -> tuple[Any, ...]:
        return (self.start, tuple((leg.edge, leg.start, leg.end) for leg in self.legs))


class GraphChain:
    """Integer combination of PL paths (dimension 1) or points (dimension 0) on a graph."""

    __slots__ = ("_terms", "dimension", "graph")

    def __init__(self, graph: MetricGraph, dimension: int,
                 terms: Mapping[GraphPath, int] | Iterable[tuple[GraphPath, int]] = ()) -> None:
        if dimension not in (-1, 0, 1):
            raise CurrentError(f"graph chains have dimension 0 or 1, got {dimension}")
        self.graph = graph
        self.dimension = dimension
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[GraphPath, int] = {}
        for path, coefficient in items:
            path = path.validated(graph)
            if dimension < 1 and path.legs:
                raise CurrentError("a 0-chain holds constant paths only")
            merged[path] = merged.get(path, 0) + int(coefficient)
        self._terms = {
            p: c for p, c in sorted(merged.items(), key=lambda item: item[0].sort_key()) if c
        }

    @classmethod
    def zero(cls, graph: MetricGraph, dimension: int) -> GraphChain:
        return cls(graph, dimension)

    @classmethod
    def point(cls, graph: MetricGraph, p: GraphPoint, coefficient: int = 1) -> GraphChain:
        return cls(graph, 0, [(GraphPath(p), coefficient)])

    @classmethod
    def path(cls, graph: MetricGraph, start: GraphPoint, legs: Iterable[Leg],
             coefficient: int = 1) -> GraphChain:
        return cls(graph, 1, [(GraphPath(start, tuple(legs)), coefficient)])

    def items(self) -> Iterator[tuple[GraphPath, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _combine(self, other: GraphChain, sign: int) -> GraphChain:
        _same_graph(self.graph, other.graph)
        if self and other and self.dimension != other.dimension:
            raise CurrentError("cannot add graph chains of different dimensions")
        dimension = self.dimension if self else other.dimension
        merged = dict(self._terms)
        for path, coefficient in other._terms.items():
            merged[path] = merged.get(path, 0) + sign * coefficient
        return GraphChain(self.graph, dimension, merged)

    def __add__(self, other: GraphChain) -> GraphChain:
        return self._combine(other, 1)

    def __sub__(self, other: GraphChain) -> GraphChain:
        return self._combine(other, -1)

    def __neg__(self) -> GraphChain:
        return GraphChain(self.graph, self.dimension, {p: -c for p, c in self._terms.items()})

    def __rmul__(self, factor: int) -> GraphChain:
        return GraphChain(self.graph, self.dimension,
                          {p: factor * c for p, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphChain):
            return NotImplemented
        return self.dimension == other.dimension and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dimension, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"GraphChain(dimension={self.dimension}, paths={len(self._terms)})"

    def boundary(self) -> GraphChain:
        if self.dimension < 1:
            return GraphChain.zero(self.graph, -1)
        terms: list[tuple[GraphPath, int]] = []
        for path, coefficient in self._terms.items():
            terms.append((GraphPath(path.end(self.graph)), coefficient))
            terms.append((GraphPath(path.start), -coefficient))
        return GraphChain(self.graph, 0, terms)

    def to_json(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "paths": [
                {
                    "coefficient": c,
                    "start": str(p.start),
                    "legs": [[leg.edge, format_rational(leg.start), format_rational(leg.end)]
                             for leg in p.legs],
                }
                for p, c in self._terms.items()
            ],
        }


def subdivide_graph_chain(c: GraphChain, m: int) -> GraphChain:
    """Midpoint subdivision applied ``m`` times: ``sd(p) = second half - reversed first half``."""
    if m < 0:
        raise DomainError(f"subdivision count must be non-negative, got {m}")
    for _ in range(m):
        if c.dimension < 1:
            return c
        terms: list[tuple[GraphPath, int]] = []
        for path, coefficient in c.items():
            first, second = path.halves(c.graph)
            terms.append((second, coefficient))
            terms.append((first.reversed(c.graph), -coefficient))
        c = GraphChain(c.graph, 1, terms)
    return c


def chain_to_current(c: GraphChain) -> GraphCurrent:
    """Integrate a PL chain: ``[bc] = d[c]`` and ``[sd c] = [c]`` hold exactly."""
    if c.dimension == 0:
        return GraphCurrent0(c.graph, ((p.start, n) for p, n in c.items()))
    if c.dimension < 0:
        return GraphCurrent0.zero(c.graph)
    return GraphCurrent1(
        c.graph,
        ((leg.edge, leg.start, leg.end, n) for p, n in c.items() for leg in p.legs),
    )


def earring_path_chain(path: PiecewisePath, graph: MetricGraph) -> GraphChain:
    """The earring path as a PL 1-chain on the truncated earring graph."""
    legs: list[Leg] = []
    for segment in path.segments:
        if not isinstance(segment, ArcSegment):
            continue
        key = graph.edge(f"L{segment.circle}").key
        position, remaining = segment.start_turn, segment.turns
        while remaining > 0:
            if segment.orientation == 1:
                step = min(remaining, 1 - position)
                legs.append(Leg(key, position, position + step))
                position = (position + step) % 1
            else:
                start = position if position > 0 else Fraction(1)
                step = min(remaining, start)
                legs.append(Leg(key, start, start - step))
                position = (start - step) % 1
            remaining -= step
    origin = path.start_point
    start = (GraphPoint.at(graph.basepoint) if origin.is_origin
             else graph.point(f"L{origin.circle}", origin.turn))
    return GraphChain.path(graph, start, legs)


# ---------------------------------------------------------------------------
# Chain representation of currents
# ---------------------------------------------------------------------------


class SliceStep(BaseModel):
    """One peeling step: the piece near ``center`` is cut off at radius ``radius``."""

    center: str
    window: tuple[str, str] = Field(description="Open interval the radius was chosen from.")
    radius: str
    slice: dict[str, int] = Field(description="Point masses of the slice at the radius.")
    piece_boundary: dict[str, int]
    diameter_bound: str
    filling_mass: str = Field(default="0", description="Mass of the 2-dimensional filling.")


class ChainCertificate(BaseModel):
    dimension: int
    epsilon: str
    gamma: str
    cover_radius: str | None = None
    r_bar: str | None = None
    alpha: str | None = None
    girth: str | None = None
    attempts: int = 1
    centers: list[str] = Field(default_factory=list)
    steps: list[SliceStep] = Field(default_factory=list)
    base_center: str | None = None
    base_diameter_bound: str = "0"
    max_diameter_bound: str = "0"
    exact: bool


@dataclass(frozen=True)
class ChainRepresentation:
    """``chain`` with ``[chain] = T``; ``pieces`` follow the peeling order, base piece last."""

    chain: GraphChain
    pieces: tuple[GraphChain, ...]
    certificate: ChainCertificate

    def to_json(self) -> dict[str, Any]:
        return {"chain": self.chain.to_json(), "certificate": self.certificate.model_dump()}


def cover_radius(epsilon: Fraction, gamma: Fraction, girth: Fraction | None) -> Fraction:
    """Half the largest ``R`` with ``2(R + F(2R + 2F(2R))) < epsilon`` for ``F(t) = 2 gamma t``.

    Capped at a quarter of the girth so every ball of radius ``R`` is a tree.
    """
    bound = epsilon / (2 * (1 + 4 * gamma + 16 * gamma**2)) / 2
    return min(bound, girth / 4) if girth is not None else bound


def cover_centers(t: GraphCurrent1, radius: Fraction) -> list[GraphPoint]:
    """Centers along the support so that every support point lies within ``radius / 2``."""
    centers: list[GraphPoint] = []
    for key, intervals in t.support_arcs().items():
        length = t.graph.edges[key].length
        for lo, hi in intervals:
            count = max(1, ceil((hi - lo) * length / radius))
            centers.extend(
                t.graph.point(key, lo + (hi - lo) * Fraction(2 * j + 1, 2 * count))
                for j in range(count)
            )
    return centers


def _generic_radius(t: GraphCurrent1, d: DistanceFunction, lo: Fraction, hi: Fraction) -> Fraction:
    levels = sorted(x for x in critical_levels(t, d) if lo < x < hi)
    candidate = (lo + hi) / 2
    if candidate not in levels:
        return candidate
    above = [x for x in levels if x > candidate] + [hi]
    return (candidate + above[0]) / 2


def _total(graph: MetricGraph, pieces: Sequence[GraphChain]) -> GraphChain:
    dimension = pieces[0].dimension if pieces else 1
    return GraphChain(graph, dimension, ((p, n) for piece in pieces for p, n in piece.items()))


def cone_chain(graph: MetricGraph, center: GraphPoint, target: GraphCurrent0) -> GraphChain:
    """``sum n_j * geodesic(center -> p_j)``; its boundary is ``target`` when that sums to 0."""
    return GraphChain(
        graph, 1,
        ((GraphPath(center, graph.geodesic(center, p)), n) for p, n in target.items()),
    )


def _reach(graph: MetricGraph, center: GraphPoint, c: GraphChain) -> Fraction:
    return max((graph.distance(center, path.end(graph)) for path, _ in c.items()),
               default=Fraction(0))


def _peel(
    t: GraphCurrent1, radius: Fraction
) -> tuple[list[GraphChain], list[SliceStep], GraphPoint, bool]:
    graph = t.graph
    centers = cover_centers(t, radius)
    r_bar = 5 * radius / 8
    alpha = (radius - r_bar) / 4
    remaining = t
    pieces: list[GraphChain] = []
    steps: list[SliceStep] = []
    exact = True
    for center in reversed(centers[1:]):
        d = DistanceFunction(graph, center)
        lo, hi = r_bar + alpha, r_bar + 3 * alpha
        r = _generic_radius(remaining, d, lo, hi)
        inside = remaining.restrict(d.sublevel_arcs(r))
        piece = cone_chain(graph, center, inside.boundary())
        exact = exact and chain_to_current(piece) == inside
        steps.append(SliceStep(
            center=str(center),
            window=(format_rational(lo), format_rational(hi)),
            radius=format_rational(r),
            slice={str(p): w for p, w in slice_current(remaining, d, r).items()},
            piece_boundary={str(p): w for p, w in inside.boundary().items()},
            diameter_bound=format_rational(2 * _reach(graph, center, piece)),
        ))
        pieces.append(piece)
        remaining = remaining - inside
    base = cone_chain(graph, centers[0], remaining.boundary())
    exact = exact and chain_to_current(base) == remaining
    pieces.append(base)
    return pieces, steps, centers[0], exact


def current_to_chain(t: GraphCurrent, epsilon: Fraction | int | str, gamma: Fraction | int = 1,
                     max_depth: int = DEFAULT_COVER_MAX_DEPTH) -> ChainRepresentation:
    """PL chain ``c`` with ``[c] = T`` made of pieces of diameter below ``epsilon``."""
    epsilon, gamma = parse_rational(epsilon), Fraction(gamma)
    if epsilon <= 0 or gamma < 1:
        raise DomainError("current_to_chain needs epsilon > 0 and gamma >= 1")
    graph = t.graph
    if isinstance(t, GraphCurrent0):
        chain = GraphChain(graph, 0, ((GraphPath(p), w) for p, w in t.items()))
        certificate = ChainCertificate(dimension=0, epsilon=format_rational(epsilon),
                                       gamma=format_rational(gamma), exact=True)
        return ChainRepresentation(chain, (chain,), certificate)

    if not t:
        return ChainRepresentation(GraphChain.zero(graph, 1), (), ChainCertificate(
            dimension=1, epsilon=format_rational(epsilon), gamma=format_rational(gamma),
            exact=True,
        ))
    girth = graph.girth
    radius = cover_radius(epsilon, gamma, girth)
    for attempt in range(1, max_depth + 1):
        pieces, steps, base_center, exact = _peel(t, radius)
        chain = _total(graph, pieces)
        exact = exact and chain_to_current(chain) == t
        base_bound = 2 * _reach(graph, base_center, pieces[-1])
        max_bound = max([base_bound] + [parse_rational(s.diameter_bound) for s in steps])
        if exact and max_bound < epsilon:
            logger.debug("current_to_chain: %d pieces at R=%s after %d attempt(s)",
                         len(pieces), radius, attempt)
            r_bar = 5 * radius / 8
            certificate = ChainCertificate(
                dimension=1,
                epsilon=format_rational(epsilon),
                gamma=format_rational(gamma),
                cover_radius=format_rational(radius),
                r_bar=format_rational(r_bar),
                alpha=format_rational((radius - r_bar) / 4),
                girth=format_rational(girth) if girth is not None else None,
                attempts=attempt,
                centers=[s.center for s in steps] + [str(base_center)],
                steps=steps,
                base_center=str(base_center),
                base_diameter_bound=format_rational(base_bound),
                max_diameter_bound=format_rational(max_bound),
                exact=True,
            )
            return ChainRepresentation(chain, tuple(pieces), certificate)
        logger.info("cover at R=%s failed (exact=%s), halving", radius, exact)
        radius /= 2
    raise CurrentError(f"no admissible cover found after {max_depth} subdivisions")


# ---------------------------------------------------------------------------
# Certificate checking
# ---------------------------------------------------------------------------


def slice_to_boundary_holds(t: GraphCurrent1, boundary_t: GraphCurrent0,
                            d: DistanceFunction, r: Fraction) -> bool:
    """``d(T restricted to X minus U) = bT - <T, d, r+> - bT restricted to U``, ``U = {d <= r}``.

    The left side is restricted to the superlevel arcs directly, not as ``T - T|U``.
    """
    outside = t.restrict(d.superlevel_arcs(r))
    expected = (boundary_t - slice_current(t, d, r)
                - boundary_t.restrict(lambda p: d(p) <= r))
    return outside.boundary() == expected


def check_slice_to_boundary(c: GraphChain, d: DistanceFunction, r: Fraction) -> bool:
    """The identity above for ``T = [c]`` with ``bT`` taken as ``[bc]``."""
    current = chain_to_current(c)
    boundary_current = chain_to_current(c.boundary())
    if not isinstance(current, GraphCurrent1) or not isinstance(boundary_current, GraphCurrent0):
        raise CurrentError("the slice-to-boundary identity needs a 1-chain")
    return slice_to_boundary_holds(current, boundary_current, d, r)


class CertificateCheck(BaseModel):
    exact: bool
    pieces_sum: bool
    diameters: bool
    slice_identities: int = 0
    slice_identities_skipped: int = 0
    slices_hold: bool = True
    fillings_zero: bool = True

    @property
    def passed(self) -> bool:
        return (self.exact and self.pieces_sum and self.diameters and self.slices_hold
                and self.fillings_zero)


def verify_certificate(t: GraphCurrent, result: ChainRepresentation) -> CertificateCheck:
    """Re-check a chain representation without trusting its certificate values."""
    certificate = result.certificate
    epsilon = parse_rational(certificate.epsilon)
    exact = chain_to_current(result.chain) == t
    if not result.pieces:
        return CertificateCheck(exact=exact, pieces_sum=not result.chain, diameters=True)
    pieces_sum = _total(t.graph, result.pieces) == result.chain
    if certificate.dimension == 0:
        return CertificateCheck(exact=exact, pieces_sum=pieces_sum, diameters=True)

    graph = t.graph
    diameters = True
    for step, piece in zip(certificate.steps, result.pieces):
        bound = 2 * _reach(graph, GraphPoint.parse(step.center), piece)
        diameters = diameters and bound == parse_rational(step.diameter_bound) and bound < epsilon
    if certificate.base_center is not None:
        base = 2 * _reach(graph, GraphPoint.parse(certificate.base_center), result.pieces[-1])
        diameters = diameters and base < epsilon

    # the chain left at step i is pieces[i:]
    remaining = GraphCurrent1.zero(graph)
    remaining_boundary = GraphCurrent0.zero(graph)
    checked = skipped = 0
    holds = True
    for index in range(len(result.pieces) - 1, -1, -1):
        piece = result.pieces[index]
        piece_current = chain_to_current(piece)
        piece_boundary = chain_to_current(piece.boundary())
        assert isinstance(piece_current, GraphCurrent1)
        assert isinstance(piece_boundary, GraphCurrent0)
        remaining = remaining + piece_current
        remaining_boundary = remaining_boundary + piece_boundary
        if index >= len(certificate.steps):
            continue
        step = certificate.steps[index]
        d = DistanceFunction(graph, GraphPoint.parse(step.center))
        try:
            ok = slice_to_boundary_holds(remaining, remaining_boundary, d,
                                         parse_rational(step.radius))
        except GenericityError:
            skipped += 1
            continue
        holds = holds and ok
        checked += 1
    return CertificateCheck(
        exact=exact,
        pieces_sum=pieces_sum,
        diameters=diameters,
        slice_identities=checked,
        slice_identities_skipped=skipped,
        slices_hold=holds,
        fillings_zero=all(parse_rational(s.filling_mass) == 0 for s in certificate.steps),
    )


# ---------------------------------------------------------------------------
# Winding vectors on the earring model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindingVector:
    """Constant multiplicity per circle index; only nonzero entries are stored."""

    entries: tuple[tuple[int, int], ...]

    def __getitem__(self, circle: int) -> int:
        return dict(self.entries).get(circle, 0)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def divisible_by(self, divisors: Iterable[int]) -> bool:
        divisors = list(divisors)
        if any(k < 1 for k in divisors):
            raise DomainError("divisors must be positive")
        return all(w % k == 0 for _, w in self.entries for k in divisors)

    def to_json(self) -> dict[str, int]:
        return {str(n): w for n, w in self.entries}


def winding_vector(t: GraphCurrent1) -> WindingVector:
    if t.graph.description.get("kind") not in ("hawaiian", "loop"):
        raise CurrentError("winding vectors are defined on the earring model")
    if t.boundary():
        raise CurrentError("winding vectors need a cycle; the boundary is nonzero")
    entries = []
    for key in t.support_arcs():
        arcs = t.edge_arcs(key)
        if len(arcs) != 1 or arcs[0][:2] != (0, 1):
            raise CurrentError(f"multiplicity on {key} is not constant")
        entries.append((int(key[1:]), arcs[0][2]))
    return WindingVector(tuple(sorted(entries)))


# ---------------------------------------------------------------------------
# Random data for suites
# ---------------------------------------------------------------------------


def random_point(graph: MetricGraph, rng: random.Random, denominator: int = 12) -> GraphPoint:
    if rng.random() < 0.2:
        return GraphPoint.at(rng.choice(graph.vertices))
    key = rng.choice(sorted(graph.edges))
    return graph.point(key, Fraction(rng.randint(1, denominator - 1), denominator))


def random_current(graph: MetricGraph, rng: random.Random, arcs: int = 3,
                   denominator: int = 12, max_weight: int = 3) -> GraphCurrent1:
    rows = []
    for _ in range(arcs):
        key = rng.choice(sorted(graph.edges))
        a, b = rng.sample(range(denominator + 1), 2)
        weight = rng.choice([w for w in range(-max_weight, max_weight + 1) if w])
        rows.append((key, Fraction(a, denominator), Fraction(b, denominator), weight))
    return GraphCurrent1(graph, rows)


def random_cycle(graph: MetricGraph, rng: random.Random, stops: int = 3,
                 denominator: int = 12, max_weight: int = 3) -> GraphCurrent1:
    """A closed geodesic tour plus whole loops; the boundary is always zero."""
    points = [random_point(graph, rng, denominator) for _ in range(stops)]
    tour = GraphCurrent1.zero(graph)
    for p, q in zip(points, points[1:] + points[:1]):
        tour = tour + GraphCurrent1.from_legs(graph, graph.geodesic(p, q))
    tour = rng.randint(1, max_weight) * tour
    for key, edge in graph.edges.items():
        if edge.is_loop and rng.random() < 0.5:
            tour = tour + GraphCurrent1.full_loop(graph, key, rng.randint(-max_weight, max_weight))
    return tour


def random_boundary(graph: MetricGraph, rng: random.Random,
                    denominator: int = 12) -> GraphCurrent1:
    """A geodesic from one random point to another, plus a random cycle."""
    p, q = random_point(graph, rng, denominator), random_point(graph, rng, denominator)
    return GraphCurrent1.from_legs(graph, graph.geodesic(p, q)) + random_cycle(
        graph, rng, denominator=denominator
    )


def random_path_chain(graph: MetricGraph, rng: random.Random, paths: int = 3,
                      stops: int = 3, denominator: int = 12) -> GraphChain:
    terms = []
    for _ in range(paths):
        points = [random_point(graph, rng, denominator) for _ in range(stops)]
        legs: tuple[Leg, ...] = ()
        for p, q in zip(points, points[1:]):
            legs += graph.geodesic(p, q)
        terms.append((GraphPath(points[0], legs), rng.choice([-2, -1, 1, 2, 3])))
    return GraphChain(graph, 1, terms)
