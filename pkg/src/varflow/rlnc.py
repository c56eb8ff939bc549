"""Generation-based random linear network coding over GF(2**8).

Source packets are grouped into generations of ``n`` packets; each coded
packet carries a fresh random coefficient vector and the matching linear
combination of its generation's payloads. The receiver keeps the received
rows in reduced row-echelon form and recovers the generation at rank ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from . import gf256


class GenerationMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Generation:
    index: int
    payloads: np.ndarray  # (n, bytes) uint8, zero-padded rows at the end
    real_count: int
    first_packet: int

    @property
    def n(self) -> int:
        return self.payloads.shape[0]


@dataclass(frozen=True)
class CodedPacket:
    generation_index: int
    coefficients: np.ndarray
    payload: np.ndarray
    slot_sent: Optional[int] = None
    metadata_bits: int = 0


def payload_bytes(l_bits: int) -> int:
    return max(1, math.ceil(l_bits / 8))


def split_generations(data: Union[np.ndarray, Sequence[bytes]], n: int) -> List[Generation]:
    """Group N equal-size packets into ceil(N / n) generations, zero-padding the last."""
    if n < 1:
        raise ValueError("generation size must be >= 1")
    if isinstance(data, np.ndarray):
        packets = np.atleast_2d(data).astype(np.uint8)
    else:
        packets = np.array([np.frombuffer(bytes(p), dtype=np.uint8) for p in data], dtype=np.uint8)
    total = packets.shape[0]
    if total < 1:
        raise ValueError("need at least one packet")
    gens = []
    for i in range(math.ceil(total / n)):
        chunk = packets[i * n:(i + 1) * n]
        real = chunk.shape[0]
        if real < n:
            chunk = np.vstack([chunk, np.zeros((n - real, packets.shape[1]), dtype=np.uint8)])
        gens.append(Generation(index=i + 1, payloads=chunk, real_count=real, first_packet=i * n))
    return gens


def join_generations(gens: Sequence[Generation]) -> np.ndarray:
    """Inverse of :func:`split_generations`: concatenated payloads with padding removed."""
    return np.vstack([g.payloads[:g.real_count] for g in gens])


def random_coefficients(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        coeffs = rng.integers(0, 256, size=n, dtype=np.uint8)
        if coeffs.any():
            return coeffs


def encode(gen: Generation, rng: np.random.Generator, slot: Optional[int] = None,
           metadata_bits: int = 0) -> CodedPacket:
    coeffs = random_coefficients(gen.n, rng)
    return CodedPacket(gen.index, coeffs, gf256.combine(coeffs, gen.payloads), slot, metadata_bits)


class DecoderState:
    """Per-generation decoder holding received rows in reduced row-echelon form."""

    def __init__(self, generation_index: int, n: int, payload_len: int):
        self.generation_index = generation_index
        self.n = n
        self.payload_len = payload_len
        self.rows = np.zeros((0, n + payload_len), dtype=np.uint8)
        self.pivots: List[int] = []
        self.received = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def decoded(self) -> bool:
        return self.rank == self.n

    def receive(self, pkt: CodedPacket) -> bool:
        """Absorb one packet; returns True when it raised the rank."""
        if pkt.generation_index != self.generation_index:
            raise GenerationMismatch(
                f"packet for generation {pkt.generation_index} sent to decoder {self.generation_index}")
        self.received += 1
        if self.decoded:
            return False
        row = np.concatenate([pkt.coefficients, pkt.payload]).astype(np.uint8)
        if self.pivots:
            factors = row[self.pivots]
            hit = factors != 0
            if hit.any():
                row ^= gf256.combine(factors[hit], self.rows[hit])
        nonzero = np.flatnonzero(row[:self.n])
        if nonzero.size == 0:
            return False
        col = int(nonzero[0])
        row = gf256.MUL[gf256.INV[row[col]]][row]
        if self.pivots:
            factors = self.rows[:, col]
            hit = factors != 0
            if hit.any():
                self.rows[hit] ^= gf256.MUL[factors[hit][:, None], row[None, :]]
        self.rows = np.vstack([self.rows, row])
        self.pivots.append(col)
        return True

    def payloads(self) -> np.ndarray:
        """Recovered source payloads (padding included) once decoded."""
        if not self.decoded:
            raise RuntimeError(f"generation {self.generation_index} not decoded (rank {self.rank}/{self.n})")
        order = np.argsort(self.pivots)
        return self.rows[order, self.n:]


def decode_step(state: DecoderState, pkt: CodedPacket) -> DecoderState:
    state.receive(pkt)
    return state


def select_generation_size(eta_target: float, l_bits: float, delta_bits: float, rtt_long: int = 1) -> int:
    """Packets per generation so that one RTT's budget ``eta * rtt_long`` covers ``(l + delta) * n`` bits.

    Rounds half up; never returns less than 1.
    """
    if eta_target <= 0:
        raise ValueError("eta_target must be positive")
    if l_bits + delta_bits <= 0:
        raise ValueError("l + delta must be positive")
    return max(1, math.floor(eta_target * rtt_long / (l_bits + delta_bits) + 0.5))
