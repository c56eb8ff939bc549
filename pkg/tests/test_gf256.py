import numpy as np
import pytest
from hypothesis import given, strategies as st

from varflow import gf256

byte = st.integers(0, 255)


def slow_mul(a, b):
    """Shift-and-add multiplication reduced by 0x11D."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= 0x11D
    return out


def test_examples():
    assert gf256.add(0x57, 0x57) == 0
    assert gf256.mul(0x02, 0x80) == 0x1D
    assert all(gf256.mul(a, 1) == a for a in range(256))
    assert all(gf256.mul(a, 0) == 0 for a in range(256))


def test_table_matches_shift_and_add():
    oracle = np.array([[slow_mul(a, b) for b in range(256)] for a in range(256)], dtype=np.uint8)
    assert np.array_equal(gf256.MUL, oracle)


def test_inverses():
    for a in range(1, 256):
        assert gf256.mul(a, gf256.inv(a)) == 1
        assert gf256.INV[a] == gf256.inv(a)
    with pytest.raises(ZeroDivisionError):
        gf256.inv(0)


@given(byte, byte, byte)
def test_field_laws(a, b, c):
    assert gf256.mul(a, b) == gf256.mul(b, a)
    assert gf256.mul(a, gf256.mul(b, c)) == gf256.mul(gf256.mul(a, b), c)
    assert gf256.mul(a, b ^ c) == gf256.mul(a, b) ^ gf256.mul(a, c)
    if b:
        assert gf256.mul(gf256.div(a, b), b) == a


def test_combine_matches_scalar_loop():
    rng = np.random.default_rng(3)
    coeffs = rng.integers(0, 256, 5, dtype=np.uint8)
    rows = rng.integers(0, 256, (5, 9), dtype=np.uint8)
    expected = [0] * 9
    for c, row in zip(coeffs, rows):
        for k in range(9):
            expected[k] ^= slow_mul(int(c), int(row[k]))
    assert gf256.combine(coeffs, rows).tolist() == expected
    assert gf256.combine(coeffs[:0], rows[:0]).tolist() == [0] * 9
