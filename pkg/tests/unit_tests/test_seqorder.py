"""Unit tests for the bounded sequence order and its embedding in [0, 1]."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earring_workbench.errors import DomainError, SequenceError
from earring_workbench.seqorder import (
    Gap,
    Interval,
    Ordering,
    Seq,
    block,
    cardinality,
    compare,
    density_report,
    enumerate_b,
    lambda_,
    locate,
    predecessor_count,
    tau,
    tau_difference_oracle,
    tau_oracle,
    total_weight,
)
from tests.strategies import bounded_seqs

# ---------------------------------------------------------------------------
# Seq
# ---------------------------------------------------------------------------


def test_parse_and_str():
    s = Seq.parse("1, 2,3")
    assert s.entries == (1, 2, 3)
    assert str(s) == "1,2,3"
    assert s[1] == 1 and s[3] == 3


@pytest.mark.parametrize("text", ["", "1,,2", "1,a", "0", "-1"])
def test_parse_rejects_malformed(text: str):
    with pytest.raises(SequenceError):
        Seq.parse(text)


def test_empty_sequence_rejected():
    with pytest.raises(SequenceError, match="length at least 1"):
        Seq(())


def test_one_based_index_out_of_range():
    with pytest.raises(IndexError):
        Seq.of(1, 2)[0]


def test_is_bounded():
    assert Seq.of(1, 2, 3).is_bounded
    assert not Seq.of(2).is_bounded
    assert not Seq.of(1, 1, 4).is_bounded


def test_ones_and_concatenation():
    assert Seq.ones(3) == Seq.of(1, 1, 1)
    assert Seq.of(1) + Seq.of(2) == Seq.of(1, 2)
    with pytest.raises(SequenceError):
        Seq.ones(0)


# ---------------------------------------------------------------------------
# Order
# ---------------------------------------------------------------------------


def test_compare_first_difference_then_length():
    assert compare(Seq.of(1, 2), Seq.of(1, 1, 1)) is Ordering.GREATER
    assert compare(Seq.of(1), Seq.of(1, 1)) is Ordering.LESS
    assert compare(Seq.of(1, 2), Seq.of(1, 2)) is Ordering.EQUAL
    assert Seq.of(1, 1) < Seq.of(1, 2)


@given(bounded_seqs(), bounded_seqs())
def test_compare_is_antisymmetric(s: Seq, t: Seq):
    assert compare(s, t).value == -compare(t, s).value


# ---------------------------------------------------------------------------
# Weights and tau
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    ("n", "expected"), [(1, Fraction(1, 2)), (2, Fraction(1, 8)), (5, Fraction(1, 3840))]
)
def test_lambda_values(n: int, expected: Fraction):
    assert lambda_(n) == expected


def test_lambda_rejects_zero():
    with pytest.raises(DomainError):
        lambda_(0)


def test_total_weight_halves():
    for n in range(1, 7):
        assert cardinality(n) == len(enumerate_b(n))
        assert total_weight(n) == Fraction(1, 2**n)


@pytest.mark.parametrize(
    ("literal", "expected"),
    [("1", Fraction(0)), ("1,1", Fraction(1, 2)), ("1,2,3", Fraction(23, 24))],
)
def test_tau_values(literal: str, expected: Fraction):
    assert tau(Seq.parse(literal)) == expected


def test_tau_rejects_unbounded():
    with pytest.raises(SequenceError, match="not in B"):
        tau(Seq.of(2))


def test_tau_oracle_single_one():
    assert tau_oracle(Seq.of(1), 5) == (Fraction(0), Fraction(1, 32))


def test_tau_oracle_depth_too_short():
    with pytest.raises(SequenceError, match="shorter than"):
        tau_oracle(Seq.of(1, 2, 3), 2)


@settings(max_examples=40, deadline=None)
@given(bounded_seqs(max_len=5))
def test_tau_inside_oracle(s: Seq):
    lo, hi = tau_oracle(s, 8)
    assert lo <= tau(s) <= hi


@given(bounded_seqs(max_len=7))
def test_append_one_and_next_sibling(s: Seq):
    n = len(s)
    assert tau(s.append(1)) - tau(s) == lambda_(n)
    for m in range(1, n + 1):
        assert tau(s.append(m + 1)) - tau(s.append(m)) == 2 * lambda_(n + 1)


def test_predecessor_count_matches_enumeration():
    s = Seq.of(1, 2, 1, 3)
    for k in range(1, 7):
        expected = sum(1 for t in enumerate_b(k) if t < s)
        assert predecessor_count(s, k) == expected


def test_difference_oracle_brackets_difference():
    s, s2 = Seq.of(1, 1, 2), Seq.of(1, 2, 1)
    lo, hi = tau_difference_oracle(s, s2, 8)
    assert lo <= tau(s2) - tau(s) <= hi
    with pytest.raises(SequenceError):
        tau_difference_oracle(s2, s, 8)


def test_block_contains_extensions():
    s = Seq.of(1, 2)
    start, end = block(s)
    for t in enumerate_b(4):
        if t.entries[:2] == s.entries:
            assert start <= tau(t) < end


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def test_enumerate_b_small():
    assert enumerate_b(2) == [Seq.of(1, 1), Seq.of(1, 2)]
    assert len(enumerate_b(4)) == 24


def test_enumerate_b_is_increasing():
    elements = enumerate_b(5)
    assert all(a < b for a, b in zip(elements, elements[1:]))
    taus = [tau(s) for s in elements]
    assert taus == sorted(taus) and len(set(taus)) == len(taus)


def test_enumerate_b_limits():
    with pytest.raises(SequenceError):
        enumerate_b(0)
    with pytest.raises(SequenceError, match="exceeds the configured maximum"):
        enumerate_b(9)


# ---------------------------------------------------------------------------
# locate and density
# ---------------------------------------------------------------------------


def test_locate_examples():
    assert locate(Fraction(1, 4), 3) == Interval(Seq.of(1), Fraction(1, 4))
    assert locate(Fraction(0), 1) == Interval(Seq.of(1), Fraction(0))
    for depth in range(1, 8):
        assert isinstance(locate(Fraction(1), depth), Gap)


def test_locate_out_of_range():
    with pytest.raises(DomainError):
        locate(Fraction(3, 2), 4)
    with pytest.raises(DomainError):
        locate(Fraction(1, 2), 0)


@given(bounded_seqs(max_len=5), st.fractions(min_value=0, max_value=1, max_denominator=64))
def test_locate_finds_own_interval(s: Seq, fraction: Fraction):
    offset = fraction * lambda_(len(s))
    if offset == lambda_(len(s)):
        return
    assert locate(tau(s) + offset, 6) == Interval(s, offset)


def test_density_examples():
    assert density_report(1, 10).max_gap == Fraction(1, 2)
    assert density_report(8, 1000).max_gap == Fraction(1, 10321920)


def test_density_gap_is_largest_at_one():
    # the last depth-8 block ends at 1, so x = 1 sits lambda(8) past its interval
    report = density_report(8, 1000)
    assert report.max_gap == lambda_(8)
    assert report.rows[-1] == (Fraction(1), lambda_(8))
    assert all(gap <= lambda_(8) / 2 for _, gap in report.rows[:-1])


def test_density_rows_cover_grid():
    report = density_report(3, 8)
    assert len(report.rows) == 9
    assert report.rows[0] == (Fraction(0), Fraction(0))


def test_density_rejects_tiny_grid():
    with pytest.raises(DomainError):
        density_report(2, 1)
