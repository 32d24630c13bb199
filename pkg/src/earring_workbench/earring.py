"""Hawaiian Earring geometry: length metric, standard loops, commutator loops and sigma_n."""

from __future__ import annotations

import logging
import math
import random
from bisect import bisect_right
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, factorial
from typing import Protocol

from earring_workbench.certified import CertifiedReal, PiEnclosure, pi_enclosure
from earring_workbench.errors import DomainError, PathError
from earring_workbench.freegroup import Word, reduce
from earring_workbench.seqorder import Interval, Seq, enumerate_b, lambda_, locate, tau

logger = logging.getLogger(__name__)

DEFAULT_MAX_RECURSION_N = 4


# ---------------------------------------------------------------------------
# Points and the metric
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EarringPoint:
    """``circle == 0`` is the origin; otherwise ``phi_circle(turn)`` with ``0 < turn < 1``."""

    circle: int = 0
    turn: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "turn", Fraction(self.turn))
        if self.circle == 0:
            if self.turn != 0:
                raise DomainError("the origin carries turn 0")
        elif self.circle < 0 or not 0 < self.turn < 1:
            raise DomainError(f"invalid earring point ({self.circle}, {self.turn})")

    @classmethod
    def on(cls, circle: int, turn: Fraction | int) -> EarringPoint:
        """Point on circle ``circle`` at ``turn`` taken modulo 1."""
        if circle < 1:
            raise DomainError(f"circle index must be positive, got {circle}")
        reduced = Fraction(turn) % 1
        return ORIGIN if reduced == 0 else cls(circle, reduced)

    @property
    def is_origin(self) -> bool:
        return self.circle == 0

    def __str__(self) -> str:
        return "origin" if self.is_origin else f"phi_{self.circle}({self.turn})"


ORIGIN = EarringPoint()


def arc_to_origin(point: EarringPoint) -> Fraction:
    """Coefficient of pi in the length-metric distance from ``point`` to the origin."""
    if point.is_origin:
        return Fraction(0)
    return Fraction(2, point.circle) * min(point.turn, 1 - point.turn)


def distance_coefficient(x: EarringPoint, y: EarringPoint) -> Fraction:
    """Exact coefficient ``c`` with ``d(x, y) = c * pi`` in the length metric."""
    if not x.is_origin and x.circle == y.circle:
        delta = abs(x.turn - y.turn)
        return Fraction(2, x.circle) * min(delta, 1 - delta)
    return arc_to_origin(x) + arc_to_origin(y)


def distance(x: EarringPoint, y: EarringPoint, pi: PiEnclosure | None = None) -> CertifiedReal:
    return CertifiedReal.pi_multiple(distance_coefficient(x, y), pi or pi_enclosure())


def chord_coordinates(point: EarringPoint) -> tuple[float, float]:
    """Planar coordinates of the point on the circle of radius 1/n through the origin."""
    if point.is_origin:
        return 0.0, 0.0
    angle = 2 * math.pi * float(point.turn)
    radius = 1 / point.circle
    return -math.cos(angle) * radius + radius, math.sin(angle) * radius


def phi(n: int, t: Fraction | int) -> EarringPoint:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise DomainError(f"phi_n is defined on [0, 1], got t={t}")
    return EarringPoint.on(n, t)


def choose_n(k: int, pi: PiEnclosure | None = None) -> int:
    """Least integer ``n >= 8 * pi * 2**k * k!`` using the upper bound of pi."""
    if k < 1:
        raise DomainError(f"choose_n needs k >= 1, got {k}")
    pi = pi or pi_enclosure()
    return ceil(8 * pi.hi * 2**k * factorial(k))


# ---------------------------------------------------------------------------
# Piecewise paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArcSegment:
    start_time: Fraction
    duration: Fraction
    circle: int
    orientation: int
    start_turn: Fraction
    turn_speed: Fraction

    def point_at(self, local: Fraction) -> EarringPoint:
        return EarringPoint.on(
            self.circle, self.start_turn + self.orientation * self.turn_speed * local
        )

    @property
    def turns(self) -> Fraction:
        return self.turn_speed * self.duration

    def shifted(self, offset: Fraction) -> ArcSegment:
        return ArcSegment(self.start_time + offset, self.duration, self.circle,
                          self.orientation, self.start_turn, self.turn_speed)


@dataclass(frozen=True)
class RestSegment:
    start_time: Fraction
    duration: Fraction

    def point_at(self, local: Fraction) -> EarringPoint:
        return ORIGIN

    def shifted(self, offset: Fraction) -> RestSegment:
        return RestSegment(self.start_time + offset, self.duration)


Segment = ArcSegment | RestSegment


@dataclass(frozen=True)
class PiecewisePath:
    """Constant-speed arc and rest segments tiling ``[0, total_length]``."""

    segments: tuple[Segment, ...]
    _starts: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.segments:
            raise PathError("a path needs at least one segment")
        clock = Fraction(0)
        for index, segment in enumerate(self.segments):
            if segment.start_time != clock:
                raise PathError(f"segment {index} starts at {segment.start_time}, expected {clock}")
            if segment.duration <= 0:
                raise PathError(f"segment {index} has non-positive duration")
            if isinstance(segment, ArcSegment):
                if segment.circle < 1 or segment.orientation not in (1, -1):
                    raise PathError(f"segment {index} has invalid circle or orientation")
                if segment.turn_speed <= 0 or not 0 <= segment.start_turn < 1:
                    raise PathError(f"segment {index} has invalid turn data")
            clock += segment.duration
        for index, (left, right) in enumerate(zip(self.segments, self.segments[1:])):
            if left.point_at(left.duration) != right.point_at(Fraction(0)):
                raise PathError(f"path is discontinuous between segments {index} and {index + 1}")
        object.__setattr__(self, "_starts", tuple(s.start_time for s in self.segments))

    @property
    def total_length(self) -> Fraction:
        last = self.segments[-1]
        return last.start_time + last.duration

    @property
    def start_point(self) -> EarringPoint:
        return self.segments[0].point_at(Fraction(0))

    @property
    def end_point(self) -> EarringPoint:
        last = self.segments[-1]
        return last.point_at(last.duration)

    def evaluate(self, t: Fraction | int) -> EarringPoint:
        t = Fraction(t)
        if not 0 <= t <= self.total_length:
            raise DomainError(f"t={t} outside [0, {self.total_length}]")
        index = min(bisect_right(self._starts, t) - 1, len(self.segments) - 1)
        segment = self.segments[index]
        return segment.point_at(t - segment.start_time)


def rest_path(duration: Fraction | int) -> PiecewisePath:
    return PiecewisePath((RestSegment(Fraction(0), Fraction(duration)),))


def loop_path(n: int) -> PiecewisePath:
    """phi_n as a one-turn path on [0, 1]."""
    return PiecewisePath((ArcSegment(Fraction(0), Fraction(1), n, 1, Fraction(0), Fraction(1)),))


def concat(p: PiecewisePath, q: PiecewisePath) -> PiecewisePath:
    if p.end_point != q.start_point:
        raise PathError(f"cannot concatenate: {p.end_point} != {q.start_point}")
    offset = p.total_length
    return PiecewisePath(p.segments + tuple(s.shifted(offset) for s in q.segments))


def reverse(p: PiecewisePath) -> PiecewisePath:
    total = p.total_length
    flipped: list[Segment] = []
    for segment in reversed(p.segments):
        start = total - segment.start_time - segment.duration
        if isinstance(segment, ArcSegment):
            end_turn = (segment.start_turn
                        + segment.orientation * segment.turn_speed * segment.duration) % 1
            flipped.append(ArcSegment(start, segment.duration, segment.circle,
                                      -segment.orientation, end_turn, segment.turn_speed))
        else:
            flipped.append(RestSegment(start, segment.duration))
    return PiecewisePath(tuple(flipped))


def max_speed(p: PiecewisePath, pi: PiEnclosure | None = None) -> CertifiedReal:
    """Largest length-metric speed ``(2 pi / circle) * turn_speed`` over the segments."""
    coefficient = max(
        (Fraction(2, s.circle) * s.turn_speed for s in p.segments if isinstance(s, ArcSegment)),
        default=Fraction(0),
    )
    return CertifiedReal.pi_multiple(coefficient, pi or pi_enclosure())


@lru_cache(maxsize=64)
def commutator_loop(k: int, pi: PiEnclosure | None = None) -> PiecewisePath:
    """Commutator of phi_{n_k} and phi_{n_k + 1} squeezed into ``[0, lambda(k)]``."""
    n = choose_n(k, pi)
    quarter = lambda_(k) / 4
    speed = 1 / quarter
    legs = ((n, 1), (n + 1, 1), (n, -1), (n + 1, -1))
    return PiecewisePath(tuple(
        ArcSegment(i * quarter, quarter, circle, orientation, Fraction(0), speed)
        for i, (circle, orientation) in enumerate(legs)
    ))


def sigma_path(cutoff: int, pi: PiEnclosure | None = None) -> PiecewisePath:
    """Blocks ``c_len(s)`` for every ``s`` in B with ``len(s) <= cutoff``, in order."""
    seqs: list[Seq] = []
    for length in range(1, cutoff + 1):
        seqs.extend(enumerate_b(length))
    seqs.sort()
    path = commutator_loop(len(seqs[0]), pi)
    for s in seqs[1:]:
        path = concat(path, commutator_loop(len(s), pi))
    return path


def project_word(path: PiecewisePath, k: int, pi: PiEnclosure | None = None) -> Word:
    """Image word under the retraction onto ``L_{n_k}`` and ``L_{n_k + 1}``."""
    if not (path.start_point.is_origin and path.end_point.is_origin):
        raise PathError("word projection needs a loop based at the origin")
    n = choose_n(k, pi)
    generators = {n: 1, n + 1: 2}
    letters: list[tuple[int, int]] = []
    for segment in path.segments:
        if not isinstance(segment, ArcSegment) or segment.circle not in generators:
            continue
        turns = segment.turns
        if turns.denominator != 1 or segment.start_turn != 0:
            raise PathError(
                f"segment at t={segment.start_time} does not cover whole turns of circle "
                f"{segment.circle}"
            )
        letters.extend([(generators[segment.circle], segment.orientation)] * int(turns))
    return reduce(letters)


# ---------------------------------------------------------------------------
# sigma_n and maps with certified error bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Evaluation:
    point: EarringPoint
    error_bound: Fraction


class EarringMap(Protocol):
    @property
    def duration(self) -> Fraction: ...

    def evaluate(self, t: Fraction) -> Evaluation: ...


@dataclass(frozen=True)
class PathMap:
    path: PiecewisePath

    @property
    def duration(self) -> Fraction:
        return self.path.total_length

    def evaluate(self, t: Fraction) -> Evaluation:
        return Evaluation(self.path.evaluate(t), Fraction(0))


@dataclass(frozen=True)
class SigmaMap:
    """sigma_n resolved through ``locate`` at a fixed depth."""

    n: int
    depth: int
    pi: PiEnclosure | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.depth < 1:
            raise DomainError("sigma_n needs n >= 1 and depth >= 1")

    @property
    def duration(self) -> Fraction:
        return 2 * lambda_(self.n)

    @property
    def shift(self) -> Fraction:
        return tau(Seq.ones(self.n))

    def evaluate(self, t: Fraction) -> Evaluation:
        t = Fraction(t)
        if not 0 <= t <= self.duration:
            raise DomainError(f"sigma_{self.n} is defined on [0, {self.duration}], got {t}")
        located = locate(t + self.shift, self.depth)
        if isinstance(located, Interval):
            loop = commutator_loop(len(located.seq), self.pi)
            return Evaluation(loop.evaluate(located.offset), Fraction(0))
        return Evaluation(ORIGIN, located.bound)


@dataclass(frozen=True)
class Concatenation:
    """``m_1 . m_2 ...`` where a junction time belongs to the earlier piece."""

    pieces: tuple[EarringMap, ...]

    @property
    def duration(self) -> Fraction:
        return sum((piece.duration for piece in self.pieces), Fraction(0))

    def evaluate(self, t: Fraction) -> Evaluation:
        t = Fraction(t)
        if not 0 <= t <= self.duration:
            raise DomainError(f"t={t} outside [0, {self.duration}]")
        start = Fraction(0)
        for piece in self.pieces:
            end = start + piece.duration
            if t <= end:
                return piece.evaluate(t - start)
            start = end
        raise AssertionError("unreachable: t within total duration")


def sigma(n: int, t: Fraction | int, depth: int,
          pi: PiEnclosure | None = None) -> tuple[EarringPoint, Fraction]:
    evaluation = SigmaMap(n, depth, pi).evaluate(Fraction(t))
    return evaluation.point, evaluation.error_bound


def sample_times(duration: Fraction, samples: int) -> list[Fraction]:
    """``samples`` equispaced rational times covering ``[0, duration]``."""
    if samples < 1:
        raise DomainError("at least one sample is required")
    if samples == 1:
        return [Fraction(0)]
    return [duration * j / (samples - 1) for j in range(samples)]


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    parameters: dict[str, int]
    samples: int
    resolved: int
    max_discrepancy: Fraction
    passed: bool


def _refining_times(duration: Fraction, count: int, rounds: int) -> Iterator[Fraction]:
    """An equispaced grid of ``count`` times, then the midpoints of each finer halving."""
    yield from sample_times(duration, count)
    intervals = max(count - 1, 1)
    for _ in range(rounds):
        intervals *= 2
        yield from (duration * j / intervals for j in range(1, intervals, 2))


def verify_recursion(n: int, sample_count: int, depth: int,
                     max_n: int = DEFAULT_MAX_RECURSION_N,
                     pi: PiEnclosure | None = None,
                     max_rounds: int = 6) -> VerificationReport:
    """Compare sigma_{n-1} with ``c_{n-1} . sigma_n ... sigma_n`` (n copies).

    Times are drawn from successively refined grids until ``sample_count`` of them resolve
    on both sides; the report passes only if that many did and every sample agreed.
    """
    if not 2 <= n <= max_n:
        raise DomainError(f"recursion check needs 2 <= n <= {max_n}, got {n}")
    pi = pi or pi_enclosure()
    lhs = SigmaMap(n - 1, depth, pi)
    rhs = Concatenation(
        (PathMap(commutator_loop(n - 1, pi)),) + (SigmaMap(n, depth, pi),) * n
    )
    if lhs.duration != rhs.duration:
        raise AssertionError("both sides must share the domain [0, 2 lambda(n-1)]")
    resolved = evaluated = 0
    worst = Fraction(0)
    passed = True
    for t in _refining_times(lhs.duration, sample_count, max_rounds):
        if resolved >= sample_count:
            break
        evaluated += 1
        left, right = lhs.evaluate(t), rhs.evaluate(t)
        gap = distance(left.point, right.point, pi)
        slack = left.error_bound + right.error_bound
        if slack == 0:
            resolved += 1
            ok = left.point == right.point
        else:
            ok = gap.certainly_le(slack)
        worst = max(worst, gap.hi)
        passed = passed and ok
    logger.info("recursion n=%d: %d resolved of %d evaluated (target %d), max discrepancy %s",
                n, resolved, evaluated, sample_count, worst)
    return VerificationReport(
        identity="sigma_recursion",
        parameters={"n": n, "depth": depth, "target": sample_count},
        samples=evaluated,
        resolved=resolved,
        max_discrepancy=worst,
        passed=passed and resolved >= sample_count,
    )


def _boundary_pairs(depth: int, levels: int,
                    rng: random.Random) -> Iterator[tuple[Fraction, Fraction]]:
    """Pairs straddling ``tau(s) + lambda(len s)``, where c_len(s) hands over to c_len(s)+1.

    The offset stays below ``lambda(depth)`` so both times resolve to intervals.
    """
    for n in range(1, min(depth - 1, levels) + 1):
        for s in enumerate_b(n):
            edge = tau(s) + lambda_(n)
            delta = lambda_(depth) * Fraction(rng.randint(1, 999), 1000)
            yield edge - delta, edge + delta


def lipschitz_report(depth: int, pairs: int, seed: int,
                     pi: PiEnclosure | None = None,
                     boundary_levels: int = 5) -> VerificationReport:
    """Check ``d(sigma_1(t), sigma_1(t')) <= |t - t'|`` on random resolved pairs.

    Besides ``pairs`` uniform pairs, every block boundary of a sequence of length at most
    ``boundary_levels`` contributes one close pair across it.
    """
    pi = pi or pi_enclosure()
    rng = random.Random(seed)
    sigma_one = SigmaMap(1, depth, pi)
    denominator = 10**9
    checked = boundary = 0
    worst = Fraction(0)
    passed = True

    def check(t1: Fraction, t2: Fraction) -> bool:
        nonlocal worst, passed
        left, right = sigma_one.evaluate(t1), sigma_one.evaluate(t2)
        if left.error_bound or right.error_bound:
            return False
        gap = distance(left.point, right.point, pi)
        worst = max(worst, gap.hi / abs(t2 - t1))
        passed = passed and gap.certainly_le(abs(t2 - t1))
        return True

    attempts = 0
    while checked < pairs:
        attempts += 1
        if attempts > 20 * pairs:
            raise DomainError("too few sample pairs resolved to intervals; raise the depth")
        t1 = Fraction(rng.randrange(denominator + 1), denominator)
        t2 = Fraction(rng.randrange(denominator + 1), denominator)
        if t1 != t2 and check(t1, t2):
            checked += 1
    for t1, t2 in _boundary_pairs(depth, boundary_levels, rng):
        if check(t1, t2):
            boundary += 1
    logger.info("lipschitz depth=%d: %d random and %d boundary pairs", depth, checked, boundary)
    return VerificationReport(
        identity="sigma_one_lipschitz",
        parameters={"depth": depth, "seed": seed, "boundary_pairs": boundary},
        samples=checked + boundary,
        resolved=checked + boundary,
        max_discrepancy=worst,
        passed=passed,
    )
