"""Exact rational helpers and certified enclosures of real numbers."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from mpmath import mp

from earring_workbench.errors import DomainError

logger = logging.getLogger(__name__)

Q = Fraction

DEFAULT_PI_DIGITS = 8
_GUARD_DIGITS = 20


def format_rational(q: Fraction | int) -> str:
    """Serialize as ``p/q`` in lowest terms (integers as ``p``)."""
    return str(Fraction(q))


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``p/q``, an integer or a finite decimal literal into an exact fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational literal: {text!r}") from exc


@dataclass(frozen=True)
class CertifiedReal:
    """Closed rational interval ``[lo, hi]`` known to contain a real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise DomainError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: Fraction | int) -> CertifiedReal:
        q = Fraction(value)
        return cls(q, q)

    @classmethod
    def pi_multiple(cls, coefficient: Fraction | int, pi: PiEnclosure) -> CertifiedReal:
        """Enclose ``coefficient * pi`` for an exact rational coefficient."""
        return pi.enclose(Fraction(coefficient))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: CertifiedReal | Fraction | int) -> CertifiedReal:
        if isinstance(other, CertifiedReal):
            return CertifiedReal(self.lo + other.lo, self.hi + other.hi)
        q = Fraction(other)
        return CertifiedReal(self.lo + q, self.hi + q)

    __radd__ = __add__

    def scale(self, factor: Fraction | int) -> CertifiedReal:
        f = Fraction(factor)
        if f >= 0:
            return CertifiedReal(self.lo * f, self.hi * f)
        return CertifiedReal(self.hi * f, self.lo * f)

    def contains(self, value: Fraction | int) -> bool:
        return self.lo <= value <= self.hi

    def certainly_le(self, bound: Fraction | int) -> bool:
        return self.hi <= bound

    def certainly_lt(self, bound: Fraction | int) -> bool:
        return self.hi < bound

    def to_json(self) -> dict[str, str]:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}


@dataclass(frozen=True)
class PiEnclosure:
    """Rational bounds ``lo < pi < hi`` with ``hi - lo = 10**-digits``."""

    lo: Fraction
    hi: Fraction
    digits: int

    def enclose(self, coefficient: Fraction) -> CertifiedReal:
        if coefficient >= 0:
            return CertifiedReal(coefficient * self.lo, coefficient * self.hi)
        return CertifiedReal(coefficient * self.hi, coefficient * self.lo)


@lru_cache(maxsize=16)
def pi_enclosure(digits: int = DEFAULT_PI_DIGITS) -> PiEnclosure:
    """Truncate pi to ``digits`` decimals using mpmath with guard digits."""
    if digits < 1:
        raise DomainError("pi enclosure needs at least one decimal digit")
    scale = 10**digits
    with mp.workdps(digits + _GUARD_DIGITS):
        truncated = int(mp.floor(mp.pi * scale))
    enclosure = PiEnclosure(Fraction(truncated, scale), Fraction(truncated + 1, scale), digits)
    logger.debug("pi enclosure at %d digits: [%s, %s]", digits, enclosure.lo, enclosure.hi)
    return enclosure


def sqrt_lower(q: Fraction, precision: int = 40) -> Fraction:
    """Rational lower bound for ``sqrt(q)`` accurate to ``2**-precision``."""
    if q < 0:
        raise DomainError("square root of a negative rational")
    scale = 1 << precision
    return Fraction(isqrt(q.numerator * scale * scale // q.denominator), scale)


def sqrt_upper(q: Fraction, precision: int = 40) -> Fraction:
    """Rational upper bound for ``sqrt(q)`` accurate to ``2**-precision``."""
    low = sqrt_lower(q, precision)
    if low * low == q:
        return low
    return low + Fraction(1, 1 << precision)


def sqrt_sum_dominates(target_sq: Fraction, a_coeff: Fraction, a_sq: Fraction,
                       b_coeff: Fraction, b_sq: Fraction) -> bool:
    """Decide ``sqrt(target_sq) <= a_coeff*sqrt(a_sq) + b_coeff*sqrt(b_sq)`` exactly.

    All coefficients are non-negative rationals; the comparison squares twice so no
    irrational number is ever formed.
    """
    if min(target_sq, a_coeff, a_sq, b_coeff, b_sq) < 0:
        raise DomainError("sqrt comparison needs non-negative data")
    slack = target_sq - a_coeff * a_coeff * a_sq - b_coeff * b_coeff * b_sq
    if slack <= 0:
        return True
    return slack * slack <= 4 * a_coeff * a_coeff * b_coeff * b_coeff * a_sq * b_sq
