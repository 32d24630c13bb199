"""Sequences of positive integers, the order on them and the embedding tau of B into [0, 1]."""

from __future__ import annotations

import enum
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from itertools import product
from math import factorial, floor

from earring_workbench.errors import DomainError, SequenceError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ENUMERATION_DEPTH = 8
DEFAULT_EXHAUSTIVE_DEPTH = 6


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@total_ordering
@dataclass(frozen=True)
class Seq:
    """Non-empty finite sequence of positive integers."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        if not entries:
            raise SequenceError("sequences have length at least 1")
        for entry in entries:
            if isinstance(entry, bool) or not isinstance(entry, int) or entry < 1:
                raise SequenceError(f"sequence entries must be positive integers, got {entry!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int) -> Seq:
        return cls(tuple(entries))

    @classmethod
    def parse(cls, text: str) -> Seq:
        """Parse the literal syntax ``"1,2,3"``."""
        parts = [part.strip() for part in text.split(",")]
        if not text.strip() or any(not part.isdigit() for part in parts):
            raise SequenceError(f"malformed sequence literal: {text!r}")
        return cls(tuple(int(part) for part in parts))

    @classmethod
    def ones(cls, k: int) -> Seq:
        """The sequence k·<1>."""
        if k < 1:
            raise SequenceError("k·<1> needs k >= 1")
        return cls((1,) * k)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> int:
        """One-based access, ``s[1]`` is the first entry."""
        if not 1 <= index <= len(self.entries):
            raise IndexError(index)
        return self.entries[index - 1]

    def __add__(self, other: Seq) -> Seq:
        return Seq(self.entries + other.entries)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Seq):
            return NotImplemented
        return compare(self, other) is Ordering.LESS

    def __str__(self) -> str:
        return ",".join(str(entry) for entry in self.entries)

    def append(self, m: int) -> Seq:
        return Seq(self.entries + (m,))

    def prefix(self, k: int) -> Seq:
        return Seq(self.entries[:k])

    @property
    def is_bounded(self) -> bool:
        """Membership in B: ``s(i) <= i`` for every index."""
        return all(entry <= index for index, entry in enumerate(self.entries, start=1))


@dataclass(frozen=True)
class Interval:
    seq: Seq
    offset: Fraction


@dataclass(frozen=True)
class Gap:
    depth: int
    bound: Fraction


LocateResult = Interval | Gap


def compare(s: Seq, t: Seq) -> Ordering:
    """Total order on sequences: first differing entry, else the shorter one first."""
    for a, b in zip(s.entries, t.entries):
        if a != b:
            return Ordering.LESS if a < b else Ordering.GREATER
    if len(s) == len(t):
        return Ordering.EQUAL
    return Ordering.LESS if len(s) < len(t) else Ordering.GREATER


@lru_cache(maxsize=None)
def lambda_(n: int) -> Fraction:
    """Weight ``1 / (2**n * n!)`` carried by every sequence of length ``n``."""
    if n < 1:
        raise DomainError(f"lambda is defined for n >= 1, got {n}")
    return Fraction(1, 2**n * factorial(n))


def cardinality(n: int) -> int:
    return factorial(n)


def total_weight(n: int) -> Fraction:
    return cardinality(n) * lambda_(n)


def require_bounded(s: Seq) -> Seq:
    if not s.is_bounded:
        raise SequenceError(f"<{s}> is not in B: some entry s(i) exceeds i")
    return s


def tau(s: Seq) -> Fraction:
    """Exact position of ``s`` in [0, 1] via the append-one and next-sibling increments."""
    require_bounded(s)
    value = Fraction(0)
    for n, entry in enumerate(s.entries[1:], start=1):
        value += lambda_(n) + (entry - 1) * 2 * lambda_(n + 1)
    return value


def block(s: Seq) -> tuple[Fraction, Fraction]:
    """Closed block ``[tau(s), tau(s) + 2 lambda(len s)]`` holding ``s`` and its extensions."""
    start = tau(s)
    return start, start + 2 * lambda_(len(s))


@lru_cache(maxsize=16)
def _enumerate(n: int) -> tuple[Seq, ...]:
    ranges = [range(1, i + 1) for i in range(1, n + 1)]
    return tuple(Seq(entries) for entries in product(*ranges))


def enumerate_b(n: int, max_depth: int = DEFAULT_MAX_ENUMERATION_DEPTH) -> list[Seq]:
    """All elements of B_n in increasing order (lexicographic product order)."""
    if n < 1:
        raise SequenceError(f"B_n is defined for n >= 1, got {n}")
    if n > max_depth:
        raise SequenceError(f"enumeration of B_{n} exceeds the configured maximum {max_depth}")
    elements = list(_enumerate(n))
    logger.debug("enumerated B_%d with %d elements", n, len(elements))
    return elements


def predecessor_count(s: Seq, k: int) -> int:
    """Number of ``t`` in B_k with ``t < s``, by counting free tail choices."""
    require_bounded(s)
    count = sum(
        (s[j] - 1) * (factorial(k) // factorial(j)) for j in range(1, min(k, len(s)) + 1)
    )
    if k < len(s):
        count += 1
    return count


def tau_oracle(
    s: Seq, depth: int, exhaustive_depth: int = DEFAULT_EXHAUSTIVE_DEPTH
) -> tuple[Fraction, Fraction]:
    """Truncated series for ``tau(s)`` with its tail bound.

    Lengths up to ``exhaustive_depth`` are summed by walking B_k; longer lengths use
    ``predecessor_count``.
    """
    require_bounded(s)
    if depth < len(s):
        raise SequenceError(
            f"oracle depth {depth} is shorter than <{s}>; predecessors of equal length are missed"
        )
    lo = Fraction(0)
    for k in range(1, depth + 1):
        if k <= exhaustive_depth:
            count = sum(1 for t in _enumerate(k) if compare(t, s) is Ordering.LESS)
        else:
            count = predecessor_count(s, k)
        lo += count * lambda_(k)
    return lo, lo + Fraction(1, 2**depth)


def tau_difference_oracle(s: Seq, s2: Seq, depth: int) -> tuple[Fraction, Fraction]:
    """Bracket ``tau(s2) - tau(s)`` by summing lambda over ``s <= t < s2`` up to ``depth``."""
    if compare(s2, s) is Ordering.LESS:
        raise SequenceError(f"<{s}> must not exceed <{s2}>")
    if depth < max(len(s), len(s2)):
        raise SequenceError("difference oracle depth shorter than the sequences")
    lo = sum(
        ((predecessor_count(s2, k) - predecessor_count(s, k)) * lambda_(k)
         for k in range(1, depth + 1)),
        Fraction(0),
    )
    return lo, lo + Fraction(1, 2**depth)


def locate(x: Fraction, depth: int) -> LocateResult:
    """Find the interval ``[tau(s), tau(s + <1>))`` containing ``x`` with ``len(s) <= depth``.

    Descends the nested blocks: the interval of ``p`` is the left half of its block and the
    children ``p + <m>`` tile the right half in order.
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"locate expects 0 <= x <= 1, got {x}")
    if depth < 1:
        raise DomainError("locate depth must be at least 1")
    current = Seq.of(1)
    start = Fraction(0)
    n = 1
    while True:
        weight = lambda_(n)
        if x < start + weight:
            return Interval(current, x - start)
        if n == depth:
            block_end = start + 2 * weight
            bound = x - (start + weight)
            if block_end < 1:
                bound = min(bound, block_end - x)
            return Gap(depth, bound)
        child_width = 2 * lambda_(n + 1)
        m = min(floor((x - start - weight) / child_width) + 1, n + 1)
        start += weight + (m - 1) * child_width
        current = current.append(m)
        n += 1


@dataclass(frozen=True)
class DensityReport:
    depth: int
    grid: int
    max_gap: Fraction
    rows: tuple[tuple[Fraction, Fraction], ...] = field(repr=False)


def distance_to_intervals(x: Fraction, depth: int) -> Fraction:
    result = locate(x, depth)
    return Fraction(0) if isinstance(result, Interval) else result.bound


def density_report(depth: int, grid: int) -> DensityReport:
    """Largest distance from a grid point ``j/grid`` to the intervals of length <= ``depth``."""
    if depth < 1 or grid < 2:
        raise DomainError("density report needs depth >= 1 and grid >= 2")
    rows = tuple(
        (Fraction(j, grid), distance_to_intervals(Fraction(j, grid), depth))
        for j in range(grid + 1)
    )
    max_gap = max(distance for _, distance in rows)
    logger.debug("density depth=%d grid=%d max gap %s", depth, grid, max_gap)
    return DensityReport(depth, grid, max_gap, rows)
