import csv
import io
from collections import defaultdict

import numpy as np
import pytest

from varflow.model import LinkSpec
from varflow.sim import CodingParams, metrics_csv, simulate, window_rates


def link(p, rtt, lid="e1"):
    return LinkSpec(lid, "s", "d", p, rtt)


def parse_events(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return [(int(r["slot"]), r["link_id"], int(r["gen"]), r["event"]) for r in rows]


class TestHandTrace:
    def test_lossless_unit_rtt(self):
        m = simulate([link(0.0, 1)], CodingParams(N=4, l=8, delta=0, n=4), 100, seed=1).metrics
        assert m.transmissions == 4 and m.erasures == 0
        assert m.throughput == 8.0
        assert m.mean_delay == 4.0 and m.decoded_generations == 1
        assert m.retransmission_rounds == 0

    def test_lossless_ack_wait(self):
        # Decoded in slot 4; the ACK lands in slot 8, so slots 5..7 are wasted.
        m = simulate([link(0.0, 4)], CodingParams(N=4, l=8, delta=0, n=4), 100, seed=1).metrics
        assert m.transmissions == 7
        assert m.throughput == pytest.approx(8 * 4 / 7)
        assert m.mean_delay == 4.0
        assert m.retransmission_rounds == 1

    def test_lossless_multiple_generations(self):
        m = simulate([link(0.0, 2)], CodingParams(N=6, l=8, delta=0, n=3), 100, seed=1).metrics
        # each generation: 3 useful slots + 1 slot waiting for its ACK
        assert m.transmissions == 8 and m.delivered_packets == 6 and m.slots_run == 8

    def test_all_erased(self):
        m = simulate([link(1.0, 4)], CodingParams(N=8, l=8, delta=0, n=4), 500, seed=1).metrics
        assert m.throughput == 0.0 and m.decoded_generations == 0
        assert m.erasures == m.transmissions == 500
        assert metrics_csv(m).splitlines()[1].startswith("0,")

    def test_rejects(self):
        with pytest.raises(ValueError):
            simulate([], CodingParams(4, 8, 0, 4), 100, 0)
        with pytest.raises(ValueError):
            simulate([link(0.1, 8)], CodingParams(4, 8, 0, 4), 4, 0)
        with pytest.raises(ValueError):
            CodingParams(4, 8, 0, 0)


class TestRuns:
    params = CodingParams(N=400, l=16, delta=4, n=8)

    def test_deterministic(self):
        links = [link(0.3, 4, "a"), link(0.1, 8, "b")]
        a = simulate(links, self.params, 3000, seed=9, record_events=True)
        b = simulate(links, self.params, 3000, seed=9, record_events=True)
        assert metrics_csv(a.metrics) == metrics_csv(b.metrics)
        assert a.events_csv() == b.events_csv()
        assert np.array_equal(a.metrics.delay_samples, b.metrics.delay_samples)

    def test_seed_changes_channel(self):
        links = [link(0.3, 4)]
        a = simulate(links, self.params, 3000, seed=1).metrics
        b = simulate(links, self.params, 3000, seed=2).metrics
        assert a.row() != b.row()

    def test_bit_exact_delivery(self):
        res = simulate([link(0.4, 2), link(0.2, 4, "e2")], self.params, 20000, seed=3)
        assert res.metrics.decode_errors == 0
        assert res.metrics.delivered_packets == self.params.N

    def test_event_log_follows_ack_protocol(self):
        links = [link(0.3, 4, "a"), link(0.2, 2, "b")]
        rtt = {"a": 4, "b": 2}
        res = simulate(links, CodingParams(N=60, l=8, delta=0, n=6), 5000, seed=4, record_events=True)
        events = parse_events(res.events_csv())
        by_gen = defaultdict(list)
        for ev in events:
            by_gen[ev[2]].append(ev)
        decoded = {g: s for s, _, g, e in events if e == "decoded"}
        acked = {g: (s, lid) for s, lid, g, e in events if e == "ack_rx"}
        assert sorted(decoded) == list(range(1, 11))
        for g in decoded:
            ack_slot, lid = acked[g]
            sent = [ev for ev in events if ev[2] == g and ev[3] == "ack_sent"]
            assert len(sent) == 1 and sent[0][0] == decoded[g] and sent[0][1] == lid
            assert ack_slot == decoded[g] + rtt[lid]
            tx = [s for s, _, _, e in by_gen[g] if e == "tx"]
            # sender stops exactly when the ACK arrives; the next generation starts then
            assert max(tx) == ack_slot - 1
            if g + 1 in decoded:
                assert min(s for s, _, gg, e in by_gen[g + 1] if e == "tx") == ack_slot
            rx = sum(1 for _, _, _, e in by_gen[g] if e == "rx")
            assert rx >= 6

    def test_transmission_accounting(self):
        res = simulate([link(0.25, 4)], self.params, 4000, seed=8, record_events=True)
        events = parse_events(res.events_csv())
        m = res.metrics
        assert m.transmissions == sum(1 for ev in events if ev[3] == "tx")
        assert m.erasures == sum(1 for ev in events if ev[3] == "erased")
        assert res.rx_per_slot.sum() == m.transmissions - m.erasures
        assert res.rx_per_slot.size == m.slots_run

    def test_delay_nondecreasing_in_generation_size(self):
        delays = []
        for n in (4, 8, 16, 32):
            m = simulate([link(0.2, 4)], CodingParams(N=20000, l=8, delta=0, n=n), 20000, seed=11).metrics
            delays.append(m.mean_delay)
        assert delays == sorted(delays)


def test_window_rates():
    rx = np.array([1, 0, 1, 1, 0, 0, 1])
    assert window_rates(rx, 2).tolist() == [0.5, 1.0, 0.0]


def test_windowed_rate_within_wide_interval():
    # mean 0.8, sigma 4 gives the half-width 0.8, i.e. [0, 1.6]
    res = simulate([link(0.2, 4)], CodingParams(N=50000, l=8, delta=0, n=16), 20000, seed=5)
    rates = window_rates(res.rx_per_slot, 4)
    assert np.mean((rates >= 0.0) & (rates <= 1.6)) >= 0.99
    assert abs(rates.mean() - 0.8) < 0.02
