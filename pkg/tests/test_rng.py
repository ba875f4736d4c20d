from hypothesis import given
from hypothesis import strategies as st

from thetalocus.rng import LCG64

A, C, MASK = 6364136223846793005, 1442695040888963407, 2**64 - 1


def test_first_outputs_seed0():
    rng = LCG64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        1442695040888963407, 1876011003808476466, 11166244414315200793]


@given(st.integers(0, 2**64 - 1))
def test_recurrence(seed):
    rng = LCG64(seed)
    assert rng.next_u64() == (A * seed + C) & MASK


@given(st.integers(0, 2**64 - 1), st.floats(-10, 10), st.floats(0.1, 10))
def test_uniform_range(seed, low, width):
    rng = LCG64(seed)
    u = rng.uniform(low, low + width)
    assert low <= u <= low + width


@given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
def test_randbelow_range(seed, n):
    assert 0 <= LCG64(seed).randbelow(n) < n


def test_uniform_uses_top_53_bits():
    state = (A * 5 + C) & MASK
    assert LCG64(5).uniform(0.0, 1.0) == (state >> 11) / 2**53
