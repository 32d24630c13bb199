"""Unit tests for earring geometry, piecewise paths and sigma_n."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from earring_workbench import earring as earring_module
from earring_workbench.certified import pi_enclosure
from earring_workbench.earring import (
    ORIGIN,
    ArcSegment,
    Concatenation,
    EarringPoint,
    PathMap,
    PiecewisePath,
    RestSegment,
    SigmaMap,
    chord_coordinates,
    choose_n,
    commutator_loop,
    concat,
    distance,
    distance_coefficient,
    lipschitz_report,
    loop_path,
    max_speed,
    phi,
    project_word,
    rest_path,
    reverse,
    sample_times,
    sigma,
    sigma_path,
    verify_recursion,
)
from earring_workbench.errors import DomainError, PathError
from earring_workbench.freegroup import Word, commutator_power
from earring_workbench.seqorder import lambda_

A, B = Word.generator(1), Word.generator(2)

# ---------------------------------------------------------------------------
# Points and metric
# ---------------------------------------------------------------------------


def test_phi_endpoints_are_origin():
    assert phi(1, 0) == ORIGIN
    assert phi(2, 1) == ORIGIN
    assert phi(3, Fraction(1, 2)) == EarringPoint(3, Fraction(1, 2))


def test_phi_rejects_out_of_range():
    with pytest.raises(DomainError):
        phi(2, Fraction(3, 2))


def test_invalid_points_rejected():
    with pytest.raises(DomainError):
        EarringPoint(0, Fraction(1, 2))
    with pytest.raises(DomainError):
        EarringPoint(2, Fraction(1))
    with pytest.raises(DomainError):
        EarringPoint.on(0, Fraction(1, 3))


def test_chord_coordinates():
    x, y = chord_coordinates(phi(3, Fraction(1, 2)))
    assert x == pytest.approx(2 / 3)
    assert y == pytest.approx(0, abs=1e-12)
    assert chord_coordinates(ORIGIN) == (0.0, 0.0)


def test_distance_across_circles_goes_through_origin():
    p, q = phi(2, Fraction(1, 4)), phi(3, Fraction(1, 4))
    assert distance_coefficient(p, q) == Fraction(1, 4) + Fraction(1, 6)
    enclosure = distance(p, q, pi_enclosure(8))
    assert enclosure.lo < Fraction(5, 12) * Fraction(315, 100)
    assert enclosure.hi > Fraction(5, 12) * Fraction(314, 100)


def test_distance_on_one_circle_takes_shorter_arc():
    p, q = phi(1, Fraction(1, 10)), phi(1, Fraction(9, 10))
    assert distance_coefficient(p, q) == Fraction(2, 5)
    assert distance_coefficient(p, p) == 0


@pytest.mark.parametrize(("k", "expected"), [(1, 51), (2, 202), (3, 1207)])
def test_choose_n(k: int, expected: int):
    assert choose_n(k) == expected


def test_choose_n_rejects_zero():
    with pytest.raises(DomainError):
        choose_n(0)


# ---------------------------------------------------------------------------
# Piecewise paths
# ---------------------------------------------------------------------------


def test_loop_path_evaluates_turns():
    path = loop_path(4)
    assert path.start_point == path.end_point == ORIGIN
    assert path.evaluate(Fraction(1, 4)) == EarringPoint(4, Fraction(1, 4))
    with pytest.raises(DomainError):
        path.evaluate(2)


def test_path_continuity_enforced():
    bad = (
        ArcSegment(Fraction(0), Fraction(1, 2), 1, 1, Fraction(0), Fraction(1)),
        RestSegment(Fraction(1, 2), Fraction(1, 2)),
    )
    with pytest.raises(PathError, match="discontinuous"):
        PiecewisePath(bad)


def test_path_gaps_in_time_rejected():
    with pytest.raises(PathError, match="starts at"):
        PiecewisePath((RestSegment(Fraction(1), Fraction(1)),))


def test_concat_and_reverse():
    path = concat(loop_path(2), rest_path(Fraction(1, 2)))
    assert path.total_length == Fraction(3, 2)
    back = reverse(path)
    assert back.evaluate(Fraction(1, 2) + Fraction(1, 4)) == EarringPoint(2, Fraction(3, 4))
    assert reverse(back).segments == path.segments


def test_concat_requires_matching_endpoints():
    half = PiecewisePath((ArcSegment(Fraction(0), Fraction(1), 1, 1, Fraction(0),
                                     Fraction(1, 2)),))
    with pytest.raises(PathError, match="cannot concatenate"):
        concat(half, loop_path(1))


@pytest.mark.parametrize("n", [1, 2, 5])
def test_max_speed_of_loop(n: int):
    pi = pi_enclosure(8)
    speed = max_speed(loop_path(n), pi)
    assert speed.lo == Fraction(2, n) * pi.lo
    assert speed.hi == Fraction(2, n) * pi.hi


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_commutator_loop_is_one_lipschitz(k: int):
    loop = commutator_loop(k)
    assert loop.total_length == lambda_(k)
    assert loop.start_point == loop.end_point == ORIGIN
    assert max_speed(loop).hi <= 1


def test_rest_path_has_zero_speed():
    assert max_speed(rest_path(1)).hi == 0


# ---------------------------------------------------------------------------
# Word projection
# ---------------------------------------------------------------------------


def test_project_word_of_commutator_loops():
    assert str(project_word(commutator_loop(1), 1)) == "abAB"
    assert project_word(commutator_loop(2), 1) == Word()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_project_word_of_sigma_path(k: int):
    from math import factorial

    word = project_word(sigma_path(k), k)
    assert word == commutator_power(A, B, factorial(k))


def test_project_word_needs_loop():
    half = PiecewisePath((ArcSegment(Fraction(0), Fraction(1), 1, 1, Fraction(0),
                                     Fraction(1, 2)),))
    with pytest.raises(PathError, match="loop based at the origin"):
        project_word(half, 1)


# ---------------------------------------------------------------------------
# sigma_n
# ---------------------------------------------------------------------------


def test_sigma_values_at_block_starts():
    assert sigma(1, 0, 4) == (ORIGIN, Fraction(0))
    assert sigma(1, Fraction(1, 2), 2) == (ORIGIN, Fraction(0))
    assert sigma(2, 0, 2) == (ORIGIN, Fraction(0))


def test_sigma_domain_checked():
    with pytest.raises(DomainError):
        sigma(2, Fraction(1, 2), 4)
    with pytest.raises(DomainError):
        SigmaMap(0, 4)


def test_sigma_gap_reports_error_bound():
    point, bound = sigma(1, 1, 4)
    assert point == ORIGIN
    assert bound > 0


def test_concatenation_junction_belongs_to_earlier_piece():
    joined = Concatenation((PathMap(loop_path(1)), PathMap(loop_path(2))))
    assert joined.duration == 2
    assert joined.evaluate(Fraction(1)).point == ORIGIN
    assert joined.evaluate(Fraction(3, 2)).point == EarringPoint(2, Fraction(1, 2))


def test_sample_times():
    assert sample_times(Fraction(1), 3) == [0, Fraction(1, 2), 1]
    assert sample_times(Fraction(1), 1) == [0]
    with pytest.raises(DomainError):
        sample_times(Fraction(1), 0)


@pytest.mark.parametrize(("n", "samples", "depth"), [(2, 100, 6), (3, 50, 8)])
def test_verify_recursion(n: int, samples: int, depth: int):
    report = verify_recursion(n, samples, depth)
    assert report.passed
    assert report.resolved == samples
    assert report.samples >= samples
    assert report.parameters["target"] == samples


def test_verify_recursion_refines_past_the_first_grid():
    # at depth 2 only the first half of the domain resolves, so the grid alone falls short
    report = verify_recursion(3, 50, 2)
    assert report.passed
    assert report.resolved == 50
    assert report.samples > 50


def test_verify_recursion_fails_below_target():
    report = verify_recursion(3, 200, 2, max_rounds=0)
    assert report.resolved == 100
    assert report.samples == 200
    assert not report.passed


def test_verify_recursion_range():
    with pytest.raises(DomainError):
        verify_recursion(1, 10, 4)
    with pytest.raises(DomainError):
        verify_recursion(5, 10, 4)


def test_lipschitz_report():
    report = lipschitz_report(depth=6, pairs=100, seed=7)
    assert report.passed
    # one pair across each interval end of B_1..B_5: 1 + 2 + 6 + 24 + 120
    assert report.parameters["boundary_pairs"] == 153
    assert report.samples == 100 + 153
    assert report.max_discrepancy <= 1


def test_lipschitz_boundary_pairs_hold_alone():
    report = lipschitz_report(depth=4, pairs=1, seed=3, boundary_levels=3)
    assert report.passed
    assert report.parameters["boundary_pairs"] == 1 + 2 + 6
    assert report.max_discrepancy <= 1


def test_lipschitz_boundary_pairs_straddle_a_handover():
    # sigma_1 leaves c_1 at tau(<1>) + lambda(1) = 1/2 and enters c_2 there
    rng = random.Random(0)
    (left, right), *_ = earring_module._boundary_pairs(3, 1, rng)
    assert left < Fraction(1, 2) < right
    assert right - Fraction(1, 2) == Fraction(1, 2) - left < lambda_(3)
    assert sigma(1, left, 3)[1] == sigma(1, right, 3)[1] == 0
