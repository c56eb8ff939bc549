"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py``) or directly as a
script. Every check enforces its runtime budget as part of the verdict.
"""
import io
import json
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from varflow.cli import main as cli_main, sweep_rows
from varflow.cuts import (corner_realizations, count_distinct_mincuts, min_cut, min_cut_mean,
                          throughput_bounds)
from varflow.generators import make_parallel_links_net, make_series_net
from varflow.model import LinkSpec, mean_rates, network_bounds
from varflow.rlnc import DecoderState, encode, split_generations
from varflow.sim import CodingParams, simulate, window_rates
from varflow.stability import force_stability, stable_throughput_bounds, verify_stability

from conftest import seeded_networks


def cli(*argv):
    out = io.StringIO()
    code = cli_main(list(argv), out=out)
    return code, out.getvalue()


def timed(budget, fn):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = elapsed < budget
    return ok and in_time, f"{detail}; {elapsed:.2f}s of {budget:g}s" + ("" if in_time else " (too slow)")


def check_1():
    def run():
        tb = throughput_bounds(make_parallel_links_net(3, 0.2, 4))
        ok = abs(tb.eta_max - 2.5155) <= 1e-3 and abs(tb.eta_min - 2.2845) <= 1e-3
        return ok, f"eta_max={tb.eta_max:.6f} eta_min={tb.eta_min:.6f}"
    return timed(1, run)


def check_2():
    def run():
        a = throughput_bounds(make_parallel_links_net(3, 0.2, 4))
        b = throughput_bounds(make_parallel_links_net(48, 0.95, 4))
        wa, wb = a.eta_max - a.eta_min, b.eta_max - b.eta_min
        reduction = (wa - wb) / wa
        ok = (abs(b.eta_max - 2.4157) <= 1e-3 and abs(b.eta_min - 2.3843) <= 1e-3
              and reduction >= 0.85)
        return ok, f"eta_max={b.eta_max:.6f} eta_min={b.eta_min:.6f} reduction={reduction:.4f}"
    return timed(1, run)


def check_3():
    def run():
        code, out = cli("sweep-links", "--k", "3..60", "--rtt", "4,8,20")
        if code:
            return False, f"sweep-links exited {code}"
        rows = sweep_rows(range(3, 61), (4, 8, 20), 2.4)
        printed = [tuple(map(float, text.split(","))) for text in out.splitlines()[1:]]
        csv_ok = len(printed) == len(rows) and all(
            math.isclose(a, b, rel_tol=5e-6, abs_tol=1e-12) for pr, row in zip(printed, rows)
            for a, b in zip(pr, row))
        worst = 0.0
        widths = {}
        for k, rtt, lo, _, hi in rows:
            p = 1 - 2.4 / k
            worst = max(worst, abs((hi - lo) - 2 * math.sqrt(p * (1 - p)) / math.sqrt(k * rtt)))
            widths.setdefault(rtt, []).append((k, hi - lo))
        increases = [(rtt, k0, k1) for rtt, seq in widths.items()
                     for (k0, w0), (k1, w1) in zip(seq, seq[1:]) if w1 > w0 + 1e-12]
        formula_ok = worst <= 1e-9
        detail = (f"{len(rows)} rows, csv {'matches' if csv_ok else 'DIFFERS'}; "
                  f"formula max error {worst:.2e} ({'ok' if formula_ok else 'off'})")
        if increases:
            shown = ", ".join(f"rtt={r} k={a}->{b}" for r, a, b in increases)
            detail += f"; width increases at {shown}"
        else:
            detail += "; widths nonincreasing"
        return csv_ok and formula_ok and not increases, detail
    return timed(5, run)


def check_4():
    def run():
        code, out = cli("mincut-count", "--n", "1..4")
        counts = [tuple(map(int, line.split(","))) for line in out.splitlines()[1:]]
        ok = code == 0 and counts == [(n, 2 ** n) for n in range(1, 5)]
        return ok, "counts " + " ".join(f"n={n}:{c}" for n, c in counts)
    return timed(5, run)


def check_5():
    def run():
        worst = 0.0
        for net in seeded_networks(200, 8, 8, base_seed=10_000):
            flow_value, _ = min_cut(net, mean_rates(net))
            worst = max(worst, abs(throughput_bounds(net).eta_mean - flow_value))
        return worst <= 1e-9, f"200 networks, max |enum - maxflow| = {worst:.2e}"
    return timed(30, run)


def check_6():
    def run():
        failures = 0
        for net in seeded_networks(100, 10, 10, base_seed=20_000):
            plan, cut = force_stability(net)
            forced = plan.apply(net)
            before, after = network_bounds(net), network_bounds(forced)
            same_means = all(before[i].r_mean == after[i].r_mean for i in before)
            if not (verify_stability(forced, cut).stable and same_means):
                failures += 1
        return failures == 0, f"{failures} of 100 networks not sound after forcing"
    return timed(30, run)


def check_7():
    def run():
        eps = 1e-6
        net = make_series_net([0.5, 0.5 - eps], [4, 4])
        plan, cut = force_stability(net)
        eta_max, _ = stable_throughput_bounds(plan.apply(net), cut)
        eta_mean = throughput_bounds(net).eta_mean
        gap = eta_max - eta_mean
        return gap <= 1e-5, f"eta_max_stable - eta_mean = {gap:.3e}"
    return timed(1, run)


def stable_sample(count, base_seed):
    """Seeded networks (|V| <= 7, |E| <= 10) whose mean min-cut verifies as stable."""
    seed = base_seed
    found = []
    while len(found) < count:
        net = next(seeded_networks(1, 7, 6, seed, max_edges=10, min_vertices=3))
        seed += 1
        if verify_stability(net, min_cut_mean(net)).stable:
            found.append(net)
    return found


def check_8():
    def run():
        multi = []
        for net in stable_sample(50, base_seed=30_000):
            count, _ = count_distinct_mincuts(net, corner_realizations(net))
            if count != 1:
                multi.append(count)
        return not multi, (f"{len(multi)} of 50 stable networks have more than one min-cut "
                           f"(counts {sorted(multi)})" if multi else "50 of 50 single min-cut")
    return timed(60, run)


def check_9():
    def run():
        rng = np.random.default_rng(40_000)
        errors = slow = 0
        for _ in range(1000):
            gen = split_generations(rng.integers(0, 256, (16, 32), dtype=np.uint8), 16)[0]
            dec = DecoderState(gen.index, 16, 32)
            received = 0
            while not dec.decoded:
                dec.receive(encode(gen, rng))
                received += 1
            errors += not np.array_equal(dec.payloads(), gen.payloads)
            slow += received > 18
        return errors == 0 and slow / 1000 < 0.01, f"{errors} decode errors, {slow}/1000 needed > n+2"
    return timed(10, run)


def check_10():
    def run():
        link = LinkSpec("e1", "s", "d", 0.2, 4, sigma=4.0)
        horizon = 100_000
        res = simulate([link], CodingParams(N=horizon, l=8, delta=0, n=16), horizon, seed=50_000)
        bounds = network_bounds(make_parallel_links_net(1, 0.2, 4, sigma=4.0))["e1"]
        rates = window_rates(res.rx_per_slot, link.rtt)
        inside = float(np.mean((rates >= bounds.r_min - 1e-12) & (rates <= bounds.r_max + 1e-12)))
        delays = []
        for n in (4, 8, 16, 32):
            m = simulate([link], CodingParams(N=horizon, l=8, delta=0, n=n), horizon, seed=50_000).metrics
            delays.append(m.mean_delay)
        monotone = all(b >= a for a, b in zip(delays, delays[1:]))
        return (inside >= 0.99 and monotone and res.metrics.decode_errors == 0,
                f"{inside:.4f} of windows in [{bounds.r_min:g}, {bounds.r_max:g}]; "
                f"mean delays {', '.join(f'{d:.3f}' for d in delays)}")
    return timed(60, run)


def check_11():
    def run():
        with tempfile.TemporaryDirectory() as tmp:
            cfg = Path(tmp) / "scenario.json"
            cfg.write_text(json.dumps({
                "network": {"generator": "parallel_links", "k": 3, "p": 0.2, "rtt": 4},
                "seed": 11, "horizon": 3000,
                "coding": {"N": 300, "l": 8, "delta": 1, "eta_policy": "mean"}}))
            plan = str(Path(tmp) / "plan.json")
            commands = [("bounds", str(cfg)), ("stability", str(cfg)),
                        ("stability", str(cfg), "--force", "--plan", plan),
                        ("sweep-links", "--k", "3..60", "--rtt", "4,8,20"),
                        ("mincut-count", "--n", "1..4"), ("simulate", str(cfg)), ("appendix",)]
            differing = [argv[0] for argv in commands if cli(*argv) != cli(*argv)]
        return not differing, ("all commands byte-identical" if not differing
                               else f"differs: {', '.join(differing)}")
    return timed(5, run)


CRITERIA = [
    (1, "three-link bounds", check_1),
    (2, "48-link bounds and width reduction", check_2),
    (3, "link sweep width formula and monotonicity", check_3),
    (4, "exponential min-cut count", check_4),
    (5, "enumeration vs max-flow", check_5),
    (6, "forcing soundness", check_6),
    (7, "epsilon worst case", check_7),
    (8, "stability implies a single min-cut", check_8),
    (9, "codec correctness", check_9),
    (10, "simulator consistency", check_10),
    (11, "CLI determinism", check_11),
]


def line(number, title, ok, detail):
    return f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(n, t, *check()) for n, t, check in CRITERIA]
    for r in results:
        print(line(*r))
    sys.exit(0 if all(r[2] for r in results) else 1)
