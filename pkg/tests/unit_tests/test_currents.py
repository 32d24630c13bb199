"""Unit tests for integral currents on metric graphs and their chain representations."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from earring_workbench.certified import pi_enclosure
from earring_workbench.currents import (
    GraphChain,
    GraphCurrent0,
    GraphCurrent1,
    GraphPath,
    WindingVector,
    chain_to_current,
    check_slice_to_boundary,
    cover_radius,
    current_to_chain,
    earring_path_chain,
    load_current,
    mass,
    random_cycle,
    random_path_chain,
    slice_current,
    subdivide_graph_chain,
    verify_certificate,
    winding_vector,
)
from earring_workbench.earring import loop_path, reverse
from earring_workbench.errors import CurrentError, DomainError, GenericityError
from earring_workbench.graphs import DistanceFunction, GraphMap, GraphPoint, Leg, MetricGraph
from tests.strategies import currents

O = GraphPoint.at("o")
HALF = Fraction(1, 2)

# ---------------------------------------------------------------------------
# Currents, boundary and mass
# ---------------------------------------------------------------------------


def test_full_loop_is_a_cycle(earring: MetricGraph):
    assert not GraphCurrent1.full_loop(earring, "L3").boundary()


def test_boundary_of_weighted_arc(earring: MetricGraph):
    arc = GraphCurrent1(earring, [("L1", Fraction(0), HALF, 2)])
    expected = GraphCurrent0(earring, [(earring.point("L1", HALF), 2), (O, -2)])
    assert arc.boundary() == expected


def test_reversed_arcs_flip_sign(earring: MetricGraph):
    forward = GraphCurrent1(earring, [("L2", Fraction(0), HALF, 1)])
    backward = GraphCurrent1(earring, [("L2", HALF, Fraction(0), -1)])
    assert forward == backward
    assert not forward + GraphCurrent1(earring, [("L2", HALF, Fraction(0), 1)])


def test_overlapping_arcs_accumulate(earring: MetricGraph):
    t = GraphCurrent1(earring, [("L1", Fraction(0), HALF, 1), ("L1", Fraction(1, 4), 1, 1)])
    assert t.edge_arcs("L1") == ((0, Fraction(1, 4), 1), (Fraction(1, 4), HALF, 2),
                                 (HALF, 1, 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mass_of_unit_loop(earring: MetricGraph, n: int):
    pi = pi_enclosure(8)
    m = GraphCurrent1.full_loop(earring, f"L{n}").mass(pi)
    assert (m.lo, m.hi) == (Fraction(2, n) * pi.lo, Fraction(2, n) * pi.hi)


def test_mass_of_point_masses(earring: MetricGraph):
    t = GraphCurrent0(earring, [(O, 3), (earring.point("L1", HALF), -2)])
    assert mass(t).lo == 5
    assert t.total() == 1


def test_arc_off_edge_rejected(earring: MetricGraph):
    with pytest.raises(CurrentError, match="leaves edge"):
        GraphCurrent1(earring, [("L1", Fraction(0), Fraction(3, 2), 1)])


def test_currents_on_different_graphs_do_not_mix(earring: MetricGraph):
    other = MetricGraph.hawaiian(2)
    with pytest.raises(CurrentError, match="different graphs"):
        _ = GraphCurrent1.full_loop(earring, "L1") + GraphCurrent1.full_loop(other, "L1")


@given(currents(MetricGraph.hawaiian(3)), currents(MetricGraph.hawaiian(3)))
def test_boundary_is_additive(s: GraphCurrent1, t: GraphCurrent1):
    assert (s + t).boundary() == s.boundary() + t.boundary()
    assert (s + t).mass_coefficient() <= s.mass_coefficient() + t.mass_coefficient()


# ---------------------------------------------------------------------------
# Restriction and push-forward
# ---------------------------------------------------------------------------


def test_restrict_to_half(earring: MetricGraph):
    loop = GraphCurrent1.full_loop(earring, "L2")
    half = loop.restrict({"L2": [(Fraction(0), HALF)]})
    assert half == GraphCurrent1(earring, [("L2", Fraction(0), HALF, 1)])
    assert not loop.restrict({"L1": [(Fraction(0), Fraction(1))]})


def test_push_forward_under_retraction(earring: MetricGraph):
    t = GraphCurrent1.full_loop(earring, "L1") + 3 * GraphCurrent1.full_loop(earring, "L2")
    image = t.push_forward(GraphMap.retraction(earring, 2))
    assert image == 3 * GraphCurrent1.full_loop(MetricGraph.loop(2), "L2")


def test_retraction_after_inclusion_on_currents(earring: MetricGraph):
    circle = MetricGraph.loop(3)
    t = GraphCurrent1(circle, [("L3", Fraction(1, 5), Fraction(4, 5), -2)])
    through = t.push_forward(GraphMap.inclusion(3, earring)).push_forward(
        GraphMap.retraction(earring, 3))
    assert through == t


# ---------------------------------------------------------------------------
# Slicing
# ---------------------------------------------------------------------------


def test_slice_of_circle_loop():
    circle = MetricGraph.circle(2)
    t = GraphCurrent1.full_loop(circle, "e")
    d = DistanceFunction(circle, O)
    expected = GraphCurrent0(circle, [(circle.point("e", Fraction(1, 4)), 1),
                                      (circle.point("e", Fraction(3, 4)), -1)])
    assert slice_current(t, d, HALF) == expected


def test_slice_of_zero_is_zero(earring: MetricGraph):
    d = DistanceFunction(earring, O)
    assert not slice_current(GraphCurrent1.zero(earring), d, Fraction(1, 7))


def test_slice_at_critical_level_rejected():
    circle = MetricGraph.circle(2)
    d = DistanceFunction(circle, O)
    t = GraphCurrent1.full_loop(circle, "e")
    with pytest.raises(GenericityError, match="critical level"):
        slice_current(t, d, 1)
    with pytest.raises(GenericityError, match="positive"):
        slice_current(t, d, 0)


def test_slice_of_path_through_tree(tree: MetricGraph):
    p, q = GraphPoint.at("r"), GraphPoint.at("y")
    t = GraphCurrent1.from_legs(tree, tree.geodesic(p, q))
    d = DistanceFunction(tree, p)
    sliced = slice_current(t, d, HALF)
    assert sliced == GraphCurrent0(tree, [(tree.point("a", HALF), 1)])


def test_slice_to_boundary_identity(tree: MetricGraph):
    rng = random.Random(3)
    c = random_path_chain(tree, rng)
    d = DistanceFunction(tree, GraphPoint.at("x"))
    assert check_slice_to_boundary(c, d, Fraction(1, 7))


# ---------------------------------------------------------------------------
# PL chains
# ---------------------------------------------------------------------------


def test_loop_chain_integrates_to_unit_multiplicity(earring: MetricGraph):
    c = GraphChain.path(earring, O, [Leg("L2", Fraction(0), Fraction(1))])
    assert chain_to_current(c) == GraphCurrent1.full_loop(earring, "L2")
    assert not c.boundary()


def test_discontinuous_path_rejected(earring: MetricGraph):
    with pytest.raises(CurrentError, match="discontinuous"):
        GraphChain.path(earring, O, [Leg("L2", HALF, Fraction(1))])


def test_path_halves(tree: MetricGraph):
    path = GraphPath(GraphPoint.at("r"), (Leg("a", Fraction(0), Fraction(1)),
                                         Leg("b", Fraction(0), Fraction(1))))
    first, second = path.halves(tree)
    assert first.length(tree) == second.length(tree) == Fraction(3, 4)
    assert first.end(tree) == second.start == tree.point("a", Fraction(3, 4))


@settings(max_examples=20, deadline=None)
@given(currents(MetricGraph.hawaiian(3)))
def test_subdivision_preserves_current(t: GraphCurrent1):
    graph = t.graph
    c = GraphChain(graph, 1, [
        (GraphPath(graph.point(key, a), (Leg(key, a, b),)), w) for key, a, b, w in t.arcs()
    ])
    assert chain_to_current(c) == t
    assert chain_to_current(subdivide_graph_chain(c, 3)) == t
    assert chain_to_current(c.boundary()) == t.boundary()


def test_subdivision_rejects_negative_count(earring: MetricGraph):
    with pytest.raises(DomainError):
        subdivide_graph_chain(GraphChain.zero(earring, 1), -1)


def test_earring_path_chain(earring: MetricGraph):
    forward = chain_to_current(earring_path_chain(loop_path(2), earring))
    assert forward == GraphCurrent1.full_loop(earring, "L2")
    backward = chain_to_current(earring_path_chain(reverse(loop_path(3)), earring))
    assert backward == -GraphCurrent1.full_loop(earring, "L3")


# ---------------------------------------------------------------------------
# Chain representation
# ---------------------------------------------------------------------------


def test_cover_radius():
    assert cover_radius(Fraction(1, 4), Fraction(1), None) == Fraction(1, 336)
    assert cover_radius(Fraction(100), Fraction(1), Fraction(1, 2)) == Fraction(1, 8)


def test_point_masses_become_a_zero_chain(earring: MetricGraph):
    p, q = earring.point("L1", HALF), earring.point("L2", Fraction(1, 3))
    t = GraphCurrent0(earring, [(p, 3), (q, -3)])
    result = current_to_chain(t, Fraction(1, 4))
    assert result.chain == GraphChain.point(earring, p, 3) - GraphChain.point(earring, q, 3)
    assert verify_certificate(t, result).passed


def test_unit_cycle_on_circle_is_exact():
    circle = MetricGraph.circle(1)
    t = GraphCurrent1.full_loop(circle, "e")
    epsilon = Fraction(1, 4)
    result = current_to_chain(t, epsilon)
    assert chain_to_current(result.chain) == t
    assert result.certificate.exact
    assert Fraction(result.certificate.max_diameter_bound) < epsilon
    assert len(result.pieces) == len(result.certificate.centers)
    check = verify_certificate(t, result)
    assert check.passed
    assert check.slice_identities > 0


def test_earring_current_below_quarter_girth():
    graph = MetricGraph.hawaiian(2)
    p, q = graph.point("L1", Fraction(1, 6)), graph.point("L1", Fraction(1, 3))
    arc = GraphCurrent1.from_legs(graph, graph.geodesic(p, q))
    t = GraphCurrent1.full_loop(graph, "L2", 2) + arc
    epsilon = Fraction(1, 8)
    assert epsilon < graph.girth / 4
    result = current_to_chain(t, epsilon)
    assert chain_to_current(result.chain) == t
    assert result.certificate.girth == "1"
    assert Fraction(result.certificate.cover_radius) <= Fraction(1, 672)
    assert Fraction(result.certificate.max_diameter_bound) < epsilon
    assert verify_certificate(t, result).passed


def test_tree_path_current(tree: MetricGraph):
    p, q = tree.point("b", HALF), tree.point("c", Fraction(2, 3))
    t = GraphCurrent1.from_legs(tree, tree.geodesic(p, q))
    assert t.boundary() == GraphCurrent0(tree, [(q, 1), (p, -1)])
    result = current_to_chain(t, HALF)
    assert chain_to_current(result.chain) == t
    assert chain_to_current(result.chain.boundary()) == t.boundary()
    assert result.chain.dimension == 1 and len(result.chain) > 0
    assert verify_certificate(t, result).passed


def test_zero_current_has_empty_chain(earring: MetricGraph):
    result = current_to_chain(GraphCurrent1.zero(earring), 1)
    assert not result.chain
    assert result.pieces == ()


def test_current_to_chain_rejects_bad_parameters(earring: MetricGraph):
    t = GraphCurrent1.full_loop(earring, "L1")
    with pytest.raises(DomainError):
        current_to_chain(t, 0)
    with pytest.raises(DomainError):
        current_to_chain(t, 1, gamma=Fraction(1, 2))


def test_tampered_certificate_detected(earring: MetricGraph):
    t = GraphCurrent1.full_loop(earring, "L4")
    result = current_to_chain(t, 1)
    other = GraphCurrent1.full_loop(earring, "L3")
    assert not verify_certificate(other, result).passed


# ---------------------------------------------------------------------------
# Winding vectors and JSON
# ---------------------------------------------------------------------------


def test_winding_vector(earring: MetricGraph):
    t = GraphCurrent1.full_loop(earring, "L1") + GraphCurrent1.full_loop(earring, "L4")
    assert winding_vector(t).to_json() == {"1": 1, "4": 1}


def test_winding_vector_divisibility():
    vector = WindingVector(((6, 720),))
    assert vector[6] == 720 and vector[5] == 0
    assert vector.divisible_by(range(1, 7))
    assert not vector.divisible_by(range(1, 8))
    with pytest.raises(DomainError):
        vector.divisible_by([0])


def test_winding_vector_needs_a_cycle(earring: MetricGraph, tree: MetricGraph):
    with pytest.raises(CurrentError, match="cycle"):
        winding_vector(GraphCurrent1(earring, [("L1", Fraction(0), HALF, 1)]))
    with pytest.raises(CurrentError, match="earring model"):
        winding_vector(GraphCurrent1.full_loop(tree, "a"))


def test_random_cycles_are_cycles(earring: MetricGraph):
    rng = random.Random(11)
    for _ in range(20):
        assert not random_cycle(earring, rng).boundary()


def test_load_current_json(earring: MetricGraph):
    data = {"dimension": 1, "edges": [
        {"circle": 2, "intervals": [{"from": "0", "to": "1/2", "weight": 3,
                                     "orientation": -1}]},
    ]}
    t = load_current(data, earring)
    assert t == GraphCurrent1(earring, [("L2", Fraction(0), HALF, -3)])
    assert load_current(t.to_json()) == t


def test_load_point_current_json(earring: MetricGraph):
    data = {"dimension": 0, "points": [{"point": "L1@1/2", "weight": 2}]}
    t = load_current(data, earring)
    assert t == GraphCurrent0(earring, [(earring.point("L1", HALF), 2)])


@pytest.mark.parametrize("data", [
    {"dimension": 2},
    {"dimension": 1, "edges": [{"intervals": []}]},
    {"dimension": 1, "edges": [{"edge": "L1", "intervals": [{"from": "x", "to": "1",
                                                             "weight": 1}]}]},
    {"dimension": 1, "edges": [{"edge": "L1", "intervals": [{"from": "0", "to": "1",
                                                             "weight": 1, "orientation": 2}]}]},
])
def test_malformed_current_json(earring: MetricGraph, data: dict):
    with pytest.raises(CurrentError):
        load_current(data, earring)
