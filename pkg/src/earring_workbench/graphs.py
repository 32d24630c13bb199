"""Finite metric graphs, points on them, geodesics, PL graph maps and distance functions.

Every edge carries a positive rational length measured in the graph's unit (``"pi"`` for the
Hawaiian Earring model, ``"one"`` otherwise), so all positions and distances stay exact.
A point on edge ``e`` is addressed by a parameter ``s`` in ``[0, 1]`` running from the tail
to the head.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Literal

import networkx as nx

from earring_workbench.certified import (
    CertifiedReal,
    PiEnclosure,
    format_rational,
    parse_rational,
    pi_enclosure,
)
from earring_workbench.errors import CurrentError

logger = logging.getLogger(__name__)

Unit = Literal["pi", "one"]
BASEPOINT = "o"


# ---------------------------------------------------------------------------
# Points and edges
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class GraphPoint:
    """A vertex, or an interior point ``(edge, param)`` with ``0 < param < 1``.

    Build interior points through :meth:`MetricGraph.point` so that ``param`` 0 and 1
    collapse onto the edge's vertices.
    """

    vertex: str = ""
    edge: str = ""
    param: Fraction = Fraction(0)

    @classmethod
    def at(cls, vertex: str) -> GraphPoint:
        return cls(vertex=vertex)

    @property
    def is_vertex(self) -> bool:
        return bool(self.vertex)

    def __str__(self) -> str:
        return self.vertex if self.is_vertex else f"{self.edge}@{format_rational(self.param)}"

    @classmethod
    def parse(cls, text: str) -> GraphPoint:
        """Inverse of ``str``: ``"o"`` or ``"L2@1/3"``."""
        if "@" not in text:
            if not text:
                raise CurrentError("empty point literal")
            return cls(vertex=text)
        edge, _, param = text.partition("@")
        return cls(edge=edge, param=parse_rational(param))


@dataclass(frozen=True)
class Edge:
    key: str
    tail: str
    head: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Leg:
    """Constant-speed traversal of ``edge`` from parameter ``start`` to ``end``."""

    edge: str
    start: Fraction
    end: Fraction

    def reversed(self) -> Leg:
        return Leg(self.edge, self.end, self.start)

    def at(self, fraction: Fraction) -> Fraction:
        return self.start + fraction * (self.end - self.start)


# ---------------------------------------------------------------------------
# Metric graphs
# ---------------------------------------------------------------------------


class MetricGraph:
    """Connected multigraph with exact edge lengths, stored on a networkx ``MultiGraph``."""

    def __init__(self, edges: Iterable[Edge], unit: Unit = "one",
                 basepoint: str | None = None, description: Mapping[str, Any] | None = None):
        if unit not in ("pi", "one"):
            raise CurrentError(f"unknown length unit {unit!r}")
        self.unit: Unit = unit
        self.edges: dict[str, Edge] = {}
        self._graph = nx.MultiGraph()
        for edge in edges:
            if edge.key in self.edges:
                raise CurrentError(f"duplicate edge key {edge.key!r}")
            if "@" in edge.key or "@" in edge.tail or "@" in edge.head:
                raise CurrentError("edge and vertex names may not contain '@'")
            if edge.length <= 0:
                raise CurrentError(f"edge {edge.key!r} needs a positive length")
            self.edges[edge.key] = edge
            self._graph.add_edge(edge.tail, edge.head, key=edge.key, length=edge.length)
        if not self.edges:
            raise CurrentError("a metric graph needs at least one edge")
        if not nx.is_connected(self._graph):
            raise CurrentError("metric graph is not connected")
        first = next(iter(self.edges.values())).tail
        self.basepoint = basepoint if basepoint is not None else first
        if self.basepoint not in self._graph:
            raise CurrentError(f"basepoint {self.basepoint!r} is not a vertex")
        self.description = dict(description) if description else {
            "kind": "edges",
            "unit": unit,
            "edges": [[e.key, e.tail, e.head, format_rational(e.length)]
                      for e in self.edges.values()],
        }

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[Any]], unit: Unit = "one") -> MetricGraph:
        """Build from ``(key, tail, head, length)`` rows."""
        return cls(
            (Edge(str(k), str(t), str(h), parse_rational(length)) for k, t, h, length in edges),
            unit,
        )

    @classmethod
    def circle(cls, length: Fraction | int | str = 1, unit: Unit = "one") -> MetricGraph:
        length = parse_rational(length)
        return cls([Edge("e", BASEPOINT, BASEPOINT, length)], unit, BASEPOINT,
                   {"kind": "circle", "length": format_rational(length), "unit": unit})

    @classmethod
    def hawaiian(cls, max_circle: int) -> MetricGraph:
        """Truncated earring: loop edge ``L{n}`` of length ``2/n`` (times pi) at ``o``."""
        if max_circle < 1:
            raise CurrentError("the earring model needs at least one circle")
        return cls(
            [Edge(f"L{n}", BASEPOINT, BASEPOINT, Fraction(2, n)) for n in range(1, max_circle + 1)],
            "pi", BASEPOINT, {"kind": "hawaiian", "max_circle": max_circle},
        )

    @classmethod
    def loop(cls, n: int) -> MetricGraph:
        """The single circle ``L_n`` of the earring model."""
        if n < 1:
            raise CurrentError("circle index must be positive")
        return cls([Edge(f"L{n}", BASEPOINT, BASEPOINT, Fraction(2, n))], "pi", BASEPOINT,
                   {"kind": "loop", "n": n})

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> MetricGraph:
        kind = data.get("kind")
        if kind == "hawaiian":
            return cls.hawaiian(int(data["max_circle"]))
        if kind == "loop":
            return cls.loop(int(data["n"]))
        if kind == "circle":
            return cls.circle(data.get("length", 1), data.get("unit", "one"))
        if kind == "edges":
            return cls.from_edges(data["edges"], data.get("unit", "one"))
        raise CurrentError(f"unknown graph kind {kind!r}")

    def to_json(self) -> dict[str, Any]:
        return dict(self.description)

    # -- structure ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"MetricGraph({self.description!r})"

    @property
    def vertices(self) -> list[str]:
        return sorted(self._graph.nodes)

    def edge(self, key: str) -> Edge:
        try:
            return self.edges[key]
        except KeyError:
            raise CurrentError(f"unknown edge {key!r}") from None

    def point(self, edge: str, param: Fraction | int) -> GraphPoint:
        e = self.edge(edge)
        s = Fraction(param)
        if not 0 <= s <= 1:
            raise CurrentError(f"edge parameter {s} outside [0, 1]")
        if s == 0:
            return GraphPoint.at(e.tail)
        if s == 1:
            return GraphPoint.at(e.head)
        return GraphPoint(edge=edge, param=s)

    def check_point(self, p: GraphPoint) -> GraphPoint:
        if p.is_vertex:
            if p.vertex not in self._graph:
                raise CurrentError(f"unknown vertex {p.vertex!r}")
            return p
        return self.point(p.edge, p.param)

    def measure(self, coefficient: Fraction, pi: PiEnclosure | None = None) -> CertifiedReal:
        """Turn a length in graph units into a certified real."""
        if self.unit == "one":
            return CertifiedReal.exact(coefficient)
        return CertifiedReal.pi_multiple(coefficient, pi or pi_enclosure())

    # -- metric -------------------------------------------------------------

    @cached_property
    def _vertex_distances(self) -> dict[str, dict[str, Fraction]]:
        return dict(nx.all_pairs_dijkstra_path_length(self._graph, weight="length"))

    def _exits(self, p: GraphPoint) -> list[tuple[str, Fraction, Leg | None]]:
        """Ways to leave ``p``: (vertex reached, distance travelled, leg walked)."""
        if p.is_vertex:
            return [(p.vertex, Fraction(0), None)]
        e = self.edge(p.edge)
        return [
            (e.tail, p.param * e.length, Leg(e.key, p.param, Fraction(0))),
            (e.head, (1 - p.param) * e.length, Leg(e.key, p.param, Fraction(1))),
        ]

    def _route(self, p: GraphPoint, q: GraphPoint) -> tuple[Fraction, Any]:
        p, q = self.check_point(p), self.check_point(q)
        if p == q:
            return Fraction(0), None
        best: tuple[Fraction, Any] | None = None
        if not p.is_vertex and not q.is_vertex and p.edge == q.edge:
            length = abs(p.param - q.param) * self.edges[p.edge].length
            best = (length, ("direct", p.edge))
        for u, into_u, out_leg in self._exits(p):
            for v, from_v, in_leg in self._exits(q):
                total = into_u + self._vertex_distances[u][v] + from_v
                if best is None or total < best[0]:
                    best = (total, ("via", u, v, out_leg, in_leg))
        assert best is not None
        return best

    def distance(self, p: GraphPoint, q: GraphPoint) -> Fraction:
        """Length-metric distance in graph units."""
        return self._route(p, q)[0]

    def geodesic(self, p: GraphPoint, q: GraphPoint) -> tuple[Leg, ...]:
        """Legs of a shortest path from ``p`` to ``q`` (empty when ``p == q``)."""
        p, q = self.check_point(p), self.check_point(q)
        _, route = self._route(p, q)
        if route is None:
            return ()
        if route[0] == "direct":
            return (Leg(route[1], p.param, q.param),)
        _, u, v, out_leg, in_leg = route
        legs: list[Leg] = []
        if out_leg is not None:
            legs.append(out_leg)
        vertices = nx.dijkstra_path(self._graph, u, v, weight="length") if u != v else [u]
        for a, b in zip(vertices, vertices[1:]):
            key = min(self._graph.get_edge_data(a, b), key=lambda k: self.edges[k].length)
            edge = self.edges[key]
            legs.append(Leg(key, Fraction(0), Fraction(1)) if edge.tail == a
                        else Leg(key, Fraction(1), Fraction(0)))
        if in_leg is not None:
            legs.append(in_leg.reversed())
        return tuple(leg for leg in legs if leg.start != leg.end)

    @cached_property
    def girth(self) -> Fraction | None:
        """Length of the shortest cycle, or ``None`` for a tree."""
        best: Fraction | None = None
        for edge in self.edges.values():
            if edge.is_loop:
                candidate = edge.length
            else:
                pruned = self._graph.copy()
                pruned.remove_edge(edge.tail, edge.head, key=edge.key)
                try:
                    detour = nx.dijkstra_path_length(pruned, edge.tail, edge.head, weight="length")
                except nx.NetworkXNoPath:
                    continue
                candidate = edge.length + detour
            if best is None or candidate < best:
                best = candidate
        logger.debug("girth of %r is %s", self, best)
        return best

    def leg_length(self, leg: Leg) -> Fraction:
        return abs(leg.end - leg.start) * self.edge(leg.edge).length

    def leg_point(self, leg: Leg, fraction: Fraction) -> GraphPoint:
        return self.point(leg.edge, leg.at(fraction))


# ---------------------------------------------------------------------------
# Piecewise-affine graph maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Collapse:
    point: GraphPoint


@dataclass(frozen=True)
class AffineOnto:
    """Affine onto ``[start, end]`` of a target edge; ``start > end`` reverses orientation."""

    edge: str
    start: Fraction
    end: Fraction


PieceImage = Collapse | AffineOnto


@dataclass(frozen=True)
class MapPiece:
    start: Fraction
    end: Fraction
    image: PieceImage

    def image_param(self, s: Fraction) -> Fraction:
        assert isinstance(self.image, AffineOnto)
        fraction = (s - self.start) / (self.end - self.start)
        return self.image.start + fraction * (self.image.end - self.image.start)


class GraphMap:
    """Continuous map between metric graphs that is affine or constant on edge pieces."""

    def __init__(self, source: MetricGraph, target: MetricGraph,
                 vertex_images: Mapping[str, GraphPoint],
                 pieces: Mapping[str, Sequence[MapPiece]]):
        self.source = source
        self.target = target
        self.vertex_images = {v: target.check_point(p) for v, p in vertex_images.items()}
        missing = set(source.vertices) - set(self.vertex_images)
        if missing:
            raise CurrentError(f"graph map leaves vertices unmapped: {sorted(missing)}")
        self.pieces: dict[str, tuple[MapPiece, ...]] = {}
        for key, edge in source.edges.items():
            self.pieces[key] = self._validated(edge, tuple(pieces.get(key, ())))

    def _validated(self, edge: Edge, pieces: tuple[MapPiece, ...]) -> tuple[MapPiece, ...]:
        if not pieces:
            raise CurrentError(f"graph map has no pieces on edge {edge.key!r}")
        clock = Fraction(0)
        previous = self.vertex_images[edge.tail]
        for piece in pieces:
            if piece.start != clock or piece.end <= piece.start:
                raise CurrentError(f"map pieces on {edge.key!r} do not tile [0, 1]")
            if isinstance(piece.image, AffineOnto):
                image = piece.image
                self.target.edge(image.edge)
                if image.start == image.end or not (0 <= image.start <= 1 and 0 <= image.end <= 1):
                    raise CurrentError(f"degenerate or out-of-range affine piece on {edge.key!r}")
                first = self.target.point(image.edge, image.start)
                last = self.target.point(image.edge, image.end)
            else:
                first = last = self.target.check_point(piece.image.point)
            if first != previous:
                raise CurrentError(f"graph map is discontinuous on {edge.key!r} at {clock}")
            previous = last
            clock = piece.end
        if clock != 1 or previous != self.vertex_images[edge.head]:
            raise CurrentError(f"graph map pieces on {edge.key!r} do not end at the head image")
        return pieces

    @classmethod
    def identity(cls, graph: MetricGraph) -> GraphMap:
        return cls(
            graph, graph, {v: GraphPoint.at(v) for v in graph.vertices},
            {k: [MapPiece(Fraction(0), Fraction(1), AffineOnto(k, Fraction(0), Fraction(1)))]
             for k in graph.edges},
        )

    @classmethod
    def retraction(cls, earring: MetricGraph, n: int) -> GraphMap:
        """``p_n``: keeps ``L_n`` and collapses every other circle onto the basepoint."""
        target = MetricGraph.loop(n)
        if f"L{n}" not in earring.edges:
            raise CurrentError(f"circle L{n} is not part of {earring!r}")
        base = GraphPoint.at(BASEPOINT)
        pieces = {
            key: [MapPiece(Fraction(0), Fraction(1),
                           AffineOnto(key, Fraction(0), Fraction(1)) if key == f"L{n}"
                           else Collapse(base))]
            for key in earring.edges
        }
        return cls(earring, target, {BASEPOINT: base}, pieces)

    @classmethod
    def inclusion(cls, n: int, earring: MetricGraph) -> GraphMap:
        """``i_n``: the circle ``L_n`` as a subgraph of the earring model."""
        key = f"L{n}"
        return cls(MetricGraph.loop(n), earring, {BASEPOINT: GraphPoint.at(BASEPOINT)},
                   {key: [MapPiece(Fraction(0), Fraction(1),
                                   AffineOnto(key, Fraction(0), Fraction(1)))]})

    def __call__(self, p: GraphPoint) -> GraphPoint:
        p = self.source.check_point(p)
        if p.is_vertex:
            return self.vertex_images[p.vertex]
        for piece in self.pieces[p.edge]:
            if piece.start <= p.param <= piece.end:
                if isinstance(piece.image, Collapse):
                    return self.target.check_point(piece.image.point)
                return self.target.point(piece.image.edge, piece.image_param(p.param))
        raise CurrentError(f"no map piece covers {p}")


# ---------------------------------------------------------------------------
# Distance functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearTerm:
    """``intercept + slope * s`` on the parameter window ``[lo, hi]``."""

    intercept: Fraction
    slope: Fraction
    lo: Fraction
    hi: Fraction

    def __call__(self, s: Fraction) -> Fraction:
        return self.intercept + self.slope * s

    def sublevel(self, r: Fraction) -> tuple[Fraction, Fraction] | None:
        if self.slope == 0:
            return (self.lo, self.hi) if self.intercept <= r else None
        cut = (r - self.intercept) / self.slope
        lo, hi = (self.lo, min(self.hi, cut)) if self.slope > 0 else (max(self.lo, cut), self.hi)
        return (lo, hi) if lo <= hi else None


def merge_intervals(
    intervals: Iterable[tuple[Fraction, Fraction]]
) -> list[tuple[Fraction, Fraction]]:
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


class DistanceFunction:
    """``d(p) = distance(source, p)``; on each edge the minimum of a few linear terms."""

    def __init__(self, graph: MetricGraph, source: GraphPoint):
        self.graph = graph
        self.source = graph.check_point(source)
        self._terms: dict[str, tuple[LinearTerm, ...]] = {}

    def __repr__(self) -> str:
        return f"DistanceFunction(source={self.source})"

    def __call__(self, p: GraphPoint) -> Fraction:
        return self.graph.distance(self.source, p)

    def terms(self, key: str) -> tuple[LinearTerm, ...]:
        if key not in self._terms:
            edge = self.graph.edge(key)
            zero, one = Fraction(0), Fraction(1)
            to_tail = self(GraphPoint.at(edge.tail))
            to_head = self(GraphPoint.at(edge.head))
            terms = [
                LinearTerm(to_tail, edge.length, zero, one),
                LinearTerm(to_head + edge.length, -edge.length, zero, one),
            ]
            if self.source.edge == key:
                sigma = self.source.param
                terms.append(LinearTerm(sigma * edge.length, -edge.length, zero, sigma))
                terms.append(LinearTerm(-sigma * edge.length, edge.length, sigma, one))
            self._terms[key] = tuple(terms)
        return self._terms[key]

    def on_edge(self, key: str, s: Fraction) -> Fraction:
        return min(term(s) for term in self.terms(key) if term.lo <= s <= term.hi)

    def sublevel_arcs(self, r: Fraction) -> dict[str, list[tuple[Fraction, Fraction]]]:
        """Closed parameter intervals of ``{d <= r}`` per edge (points dropped)."""
        arcs = {}
        for key in self.graph.edges:
            pieces = [iv for term in self.terms(key) if (iv := term.sublevel(r)) is not None]
            merged = [(lo, hi) for lo, hi in merge_intervals(pieces) if lo < hi]
            if merged:
                arcs[key] = merged
        return arcs

    def superlevel_arcs(self, r: Fraction) -> dict[str, list[tuple[Fraction, Fraction]]]:
        """Closure of the complement of ``{d <= r}``, per edge."""
        below = self.sublevel_arcs(r)
        arcs = {}
        for key in self.graph.edges:
            gaps, cursor = [], Fraction(0)
            for lo, hi in below.get(key, []):
                if lo > cursor:
                    gaps.append((cursor, lo))
                cursor = max(cursor, hi)
            if cursor < 1:
                gaps.append((cursor, Fraction(1)))
            gaps = [(lo, hi) for lo, hi in gaps if self.on_edge(key, (lo + hi) / 2) > r]
            if gaps:
                arcs[key] = gaps
        return arcs

    def levels(self) -> set[Fraction]:
        """Values at vertices, at window ends and where two terms cross."""
        values: set[Fraction] = {Fraction(0)}
        for key in self.graph.edges:
            terms = self.terms(key)
            for term in terms:
                values.update((self.on_edge(key, term.lo), self.on_edge(key, term.hi)))
            for i, left in enumerate(terms):
                for right in terms[i + 1:]:
                    if left.slope == right.slope:
                        continue
                    s = (right.intercept - left.intercept) / (left.slope - right.slope)
                    if max(left.lo, right.lo) <= s <= min(left.hi, right.hi):
                        values.add(self.on_edge(key, s))
        return values

