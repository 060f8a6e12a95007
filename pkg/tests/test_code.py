import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvep_speller.code import (
    PRIMITIVE_TAPS,
    build_codebook,
    circular_autocorrelation,
    circular_shift_bits,
    generate_msequence,
)
from cvep_speller.exceptions import (
    LagCollisionError,
    LagOutOfRangeError,
    NonMaximalPeriodError,
    ZeroSeedError,
)
from oracles import lfsr_state_walk, rotate_by_copy

# order-6 default (x^6 + x^5 + 1, all-ones seed), produced by lfsr_state_walk
ORDER6_DEFAULT = "111111000001000011000101001111010001110010010110111011001101010"


def test_order6_default_length():
    assert generate_msequence(6).length == 63


def test_order6_matches_state_walk_oracle():
    m = generate_msequence(6)
    assert m.bits.tolist() == lfsr_state_walk(6, (6, 5), [1] * 6)
    assert str(m) == ORDER6_DEFAULT


@pytest.mark.parametrize("order", range(2, 11))
def test_all_default_orders_match_oracle(order):
    m = generate_msequence(order)
    assert m.bits.tolist() == lfsr_state_walk(order, PRIMITIVE_TAPS[order], [1] * order)


def test_order2_smallest_sequence():
    m = generate_msequence(2, taps=(2, 1), seed=(1, 1))
    assert m.length == 3
    assert m.bits.sum() == 2


@pytest.mark.parametrize("order", range(2, 9))
def test_balance_and_two_valued_autocorrelation(order):
    m = generate_msequence(order)
    n = 2**order - 1
    assert m.length == n
    assert m.bits.sum() == 2 ** (order - 1)
    assert circular_autocorrelation(m, 0) == n
    assert all(circular_autocorrelation(m, lag) == -1 for lag in range(1, n))


def test_integer_seed_and_other_seeds_are_rotations():
    base = generate_msequence(5)
    other = generate_msequence(5, seed=0b10110)
    assert other.seed == (1, 0, 1, 1, 0)
    # every nonzero seed lies on the single maximal orbit
    s = str(base) * 2
    assert str(other) in s


def test_zero_seed_rejected():
    with pytest.raises(ZeroSeedError):
        generate_msequence(6, seed=0)


@pytest.mark.parametrize("order,taps", [(6, (6,)), (4, (4, 2)), (6, (6, 3))])
def test_non_primitive_taps_rejected(order, taps):
    with pytest.raises(NonMaximalPeriodError):
        generate_msequence(order, taps)


def test_autocorrelation_examples():
    m6 = generate_msequence(6)
    assert circular_autocorrelation(m6, 0) == 63
    m2 = generate_msequence(2)
    # hand computation: +1 +1 -1 against +1 -1 +1
    assert circular_autocorrelation(m2, 1) == -1
    with pytest.raises(LagOutOfRangeError):
        circular_autocorrelation(m6, 63)


@given(st.lists(st.integers(0, 1), max_size=70), st.integers(-200, 200), st.integers(-200, 200))
def test_shift_group_action(bits, a, b):
    x = np.array(bits, dtype=np.uint8)
    n = len(bits)
    assert np.array_equal(circular_shift_bits(x, 0), x)
    if n:
        assert np.array_equal(circular_shift_bits(x, n), x)
        assert np.array_equal(
            circular_shift_bits(circular_shift_bits(x, a), b), circular_shift_bits(x, (a + b) % n)
        )
        assert np.array_equal(circular_shift_bits(circular_shift_bits(x, a), -a), x)
        assert circular_shift_bits(x, a).tolist() == rotate_by_copy(bits, a)


def test_shift_is_delay():
    assert circular_shift_bits([1, 0, 0, 0], 1).tolist() == [0, 1, 0, 0]


def test_shift_empty():
    assert circular_shift_bits(np.array([], dtype=np.uint8), 3).size == 0


def test_codebook_default_lags():
    cb = build_codebook(generate_msequence(6), 32, 2)
    expected = sorted({(p * 2) % 63 for p in range(32)})
    assert len(expected) == 32
    assert sorted(cb.lags.tolist()) == expected == list(range(0, 63, 2))
    assert np.array_equal(cb.codes[0], cb.base.bits)


def test_codebook_matches_rotate_by_copy_oracle():
    m = generate_msequence(6)
    cb = build_codebook(m, 32, 2)
    base = m.bits.tolist()
    for p in range(32):
        assert cb.codes[p].tolist() == rotate_by_copy(base, (2 * p) % 63)


def test_codebook_single_char():
    cb = build_codebook(generate_msequence(6), 1, 2)
    assert cb.codes.shape == (1, 63)
    assert np.array_equal(cb.codes[0], cb.base.bits)


def test_codebook_collision():
    with pytest.raises(LagCollisionError):
        build_codebook(generate_msequence(6), 64, 1)
    # gcd(21, 63) = 21, so only 3 distinct lags exist
    with pytest.raises(LagCollisionError):
        build_codebook(generate_msequence(6), 4, 21)
    assert math.gcd(21, 63) == 21


def test_values_are_immutable():
    m = generate_msequence(6)
    with pytest.raises(ValueError):
        m.bits[0] = 0
