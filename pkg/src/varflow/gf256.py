"""GF(2**8) arithmetic with reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D).

Scalar helpers use log/antilog tables; ``MUL`` is the full 256x256 product
table so payload rows can be scaled with one fancy-index lookup.
"""
import numpy as np

POLY = 0x11D

EXP = [0] * 512
LOG = [0] * 256
_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= POLY
for _i in range(255, 512):
    EXP[_i] = EXP[_i - 255]
del _x, _i


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return EXP[255 - LOG[a]]


def div(a: int, b: int) -> int:
    return mul(a, inv(b))


MUL = np.array([[mul(a, b) for b in range(256)] for a in range(256)], dtype=np.uint8)
INV = np.array([0] + [inv(a) for a in range(1, 256)], dtype=np.uint8)


def scale(c: int, row: np.ndarray) -> np.ndarray:
    return MUL[c][row]


def combine(coefficients: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Sum over j of coefficients[j] * rows[j] (XOR-accumulated)."""
    if rows.shape[0] == 0:
        return np.zeros(rows.shape[1:], dtype=np.uint8)
    return np.bitwise_xor.reduce(MUL[coefficients[:, None], rows], axis=0)
