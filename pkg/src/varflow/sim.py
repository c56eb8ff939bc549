"""Slotted-time simulation of generation-based RLNC over parallel erasure links.

Every slot the sender puts one coded packet of its active generation on
each link. A link erases the packet with its own probability. The receiver
acknowledges a generation once it decodes it; the ACK reaches the sender
one link RTT later, and only then does the sender move on. The ACK is the
only feedback, so packets sent while it is in flight are wasted.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fmt import fmt
from .model import LinkSpec
from .rlnc import DecoderState, encode, payload_bytes, split_generations

EVENTS = ("tx", "erased", "rx", "decoded", "ack_sent", "ack_rx")
METRIC_COLUMNS = ("throughput", "mean_delay", "p95_delay", "transmissions", "erasures", "rounds")


@dataclass(frozen=True)
class CodingParams:
    N: int
    l: int
    delta: int
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be positive")
        if self.l <= 0:
            raise ValueError("l must be positive")
        if self.N <= 0:
            raise ValueError("N must be positive")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")


@dataclass
class SimMetrics:
    throughput: float
    delay_samples: np.ndarray
    transmissions: int
    erasures: int
    retransmission_rounds: int
    delivered_packets: int
    decoded_generations: int
    slots_run: int
    decode_errors: int = 0

    @property
    def mean_delay(self) -> float:
        return float(self.delay_samples.mean()) if self.delay_samples.size else 0.0

    @property
    def p95_delay(self) -> float:
        return float(np.percentile(self.delay_samples, 95)) if self.delay_samples.size else 0.0

    def row(self) -> Tuple:
        return (self.throughput, self.mean_delay, self.p95_delay,
                self.transmissions, self.erasures, self.retransmission_rounds)


@dataclass
class SimResult:
    metrics: SimMetrics
    rx_per_slot: np.ndarray
    events: List[Tuple[int, str, int, str]] = field(default_factory=list)

    def events_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["slot", "link_id", "gen", "event"])
        w.writerows(self.events)
        return buf.getvalue()


def simulate(links: Sequence[LinkSpec], coding: CodingParams, horizon: int, seed: int,
             record_events: bool = False, data: Optional[np.ndarray] = None) -> SimResult:
    """Run the slotted loop for ``horizon`` slots (or until every generation is acknowledged)."""
    if not links:
        raise ValueError("need at least one link")
    links = sorted(links, key=lambda e: e.id)
    if horizon < max(e.rtt for e in links):
        raise ValueError("horizon must cover at least one RTT")

    channel_seq, coding_seq, data_seq = np.random.SeedSequence(seed).spawn(3)
    channel_rng = np.random.default_rng(channel_seq)
    coding_rng = np.random.default_rng(coding_seq)
    if data is None:
        data = np.random.default_rng(data_seq).integers(
            0, 256, size=(coding.N, payload_bytes(coding.l)), dtype=np.uint8)
    gens = split_generations(data, coding.n)
    mu = len(gens)

    decoders = [DecoderState(g.index, g.n, g.payloads.shape[1]) for g in gens]
    first_tx = [0] * mu
    tx_count = [0] * mu
    decode_slot: Dict[int, int] = {}
    acks: List[Tuple[int, int, str]] = []  # (arrival slot, generation position, link id)
    rx_per_slot = np.zeros(horizon + 1, dtype=np.int64)
    events: List[Tuple[int, str, int, str]] = []
    log = events.append if record_events else (lambda ev: None)

    active = 0
    transmissions = erasures = 0
    last = 0
    for slot in range(1, horizon + 1):
        if acks:
            due = [a for a in acks if a[0] <= slot]
            if due:
                acks = [a for a in acks if a[0] > slot]
                for _, pos, link_id in sorted(due):
                    log((slot, link_id, gens[pos].index, "ack_rx"))
                    active = max(active, pos + 1)
        if active >= mu:
            break
        last = slot
        gen = gens[active]
        for link in links:
            pkt = encode(gen, coding_rng, slot, coding.delta)
            transmissions += 1
            tx_count[active] += 1
            if first_tx[active] == 0:
                first_tx[active] = slot
            log((slot, link.id, gen.index, "tx"))
            if channel_rng.random() < link.p:
                erasures += 1
                log((slot, link.id, gen.index, "erased"))
                continue
            rx_per_slot[slot] += 1
            log((slot, link.id, gen.index, "rx"))
            dec = decoders[active]
            was_decoded = dec.decoded
            dec.receive(pkt)
            if dec.decoded and not was_decoded:
                decode_slot[active] = slot
                log((slot, link.id, gen.index, "decoded"))
                log((slot, link.id, gen.index, "ack_sent"))
                acks.append((slot + link.rtt, active, link.id))

    delays = []
    delivered = 0
    errors = 0
    for pos in sorted(decode_slot):
        g = gens[pos]
        if not np.array_equal(decoders[pos].payloads(), g.payloads):
            errors += 1
        delivered += g.real_count
        delays += [decode_slot[pos] - first_tx[pos] + 1] * g.real_count
    rounds = sum(math.ceil(c / coding.n) - 1 for c in tx_count if c)
    metrics = SimMetrics(
        throughput=delivered * coding.l / transmissions if transmissions else 0.0,
        delay_samples=np.array(delays, dtype=float),
        transmissions=transmissions, erasures=erasures, retransmission_rounds=rounds,
        delivered_packets=delivered, decoded_generations=len(decode_slot),
        slots_run=last, decode_errors=errors)
    return SimResult(metrics, rx_per_slot[1:last + 1], events)


def window_rates(rx_per_slot: np.ndarray, window: int) -> np.ndarray:
    """Received packets per slot over consecutive disjoint windows (partial tail dropped)."""
    full = rx_per_slot.size // window
    return rx_per_slot[:full * window].reshape(full, window).sum(axis=1) / window


def metrics_csv(metrics: SimMetrics) -> str:
    header = ",".join(METRIC_COLUMNS)
    return header + "\n" + ",".join(fmt(x) for x in metrics.row()) + "\n"
