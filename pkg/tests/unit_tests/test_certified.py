"""Unit tests for exact rationals and certified enclosures."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from earring_workbench.certified import (
    CertifiedReal,
    format_rational,
    parse_rational,
    pi_enclosure,
    sqrt_lower,
    sqrt_sum_dominates,
    sqrt_upper,
)
from earring_workbench.errors import DomainError

# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------


def test_format_rational_lowest_terms():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(3) == "3"
    assert format_rational(Fraction(-6, 3)) == "-2"


def test_parse_rational_accepts_literals():
    assert parse_rational("23/24") == Fraction(23, 24)
    assert parse_rational(" 0.25 ") == Fraction(1, 4)
    assert parse_rational(7) == 7


@pytest.mark.parametrize("text", ["", "1/0", "abc", "1//2"])
def test_parse_rational_rejects_garbage(text: str):
    with pytest.raises(DomainError, match="not a rational literal"):
        parse_rational(text)


# ---------------------------------------------------------------------------
# Enclosures
# ---------------------------------------------------------------------------


def test_pi_enclosure_brackets_pi():
    pi = pi_enclosure(8)
    assert pi.lo < Fraction(314159266, 10**8)
    assert pi.hi > Fraction(314159265, 10**8)
    assert pi.hi - pi.lo == Fraction(1, 10**8)


def test_pi_enclosure_rejects_zero_digits():
    with pytest.raises(DomainError):
        pi_enclosure(0)


def test_pi_multiple_handles_negative_coefficients():
    pi = pi_enclosure(6)
    enclosure = CertifiedReal.pi_multiple(-2, pi)
    assert enclosure.lo == -2 * pi.hi
    assert enclosure.hi == -2 * pi.lo


def test_certified_real_arithmetic():
    a = CertifiedReal(Fraction(1), Fraction(2))
    b = CertifiedReal.exact(Fraction(1, 2))
    total = a + b
    assert (total.lo, total.hi) == (Fraction(3, 2), Fraction(5, 2))
    assert total.width == 1
    assert a.scale(-1) == CertifiedReal(Fraction(-2), Fraction(-1))
    assert a.contains(Fraction(3, 2))
    assert a.certainly_le(2)
    assert not a.certainly_lt(2)


def test_empty_enclosure_rejected():
    with pytest.raises(DomainError, match="empty enclosure"):
        CertifiedReal(Fraction(1), Fraction(0))


def test_to_json_uses_rational_strings():
    assert CertifiedReal(Fraction(1, 3), Fraction(1, 2)).to_json() == {"lo": "1/3", "hi": "1/2"}


# ---------------------------------------------------------------------------
# Square roots
# ---------------------------------------------------------------------------


@given(st.fractions(min_value=0, max_value=100, max_denominator=50))
def test_sqrt_bounds_bracket(q: Fraction):
    lo, hi = sqrt_lower(q), sqrt_upper(q)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(1, 2**40)


def test_sqrt_of_perfect_square_is_exact():
    assert sqrt_lower(Fraction(9, 4)) == sqrt_upper(Fraction(9, 4)) == Fraction(3, 2)


def test_sqrt_sum_dominates():
    # sqrt(4) <= 1*sqrt(1) + 1*sqrt(1)
    assert sqrt_sum_dominates(Fraction(4), Fraction(1), Fraction(1), Fraction(1), Fraction(1))
    # sqrt(5) > sqrt(1) + sqrt(1)
    assert not sqrt_sum_dominates(Fraction(5), Fraction(1), Fraction(1), Fraction(1), Fraction(1))
    with pytest.raises(DomainError):
        sqrt_sum_dominates(Fraction(1), Fraction(-1), Fraction(1), Fraction(1), Fraction(1))
