"""``varflow`` command line: bounds, stability, sweeps, min-cut counts, simulation.

Every command writes CSV with a header row to stdout. Exit codes: 0 success,
2 config error, 3 precondition or infeasibility, 4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import List, Sequence

from .config import ConfigError, ScenarioConfig, load_scenario
from .cuts import (CutLimitExceeded, count_distinct_mincuts, interval_width, min_cut_mean,
                   parallel_paths_realizations, throughput_bounds)
from .fmt import fmt
from .generators import make_parallel_links_net, make_parallel_paths_net
from .rlnc import select_generation_size
from .sim import CodingParams, metrics_csv, simulate
from .stability import (ForcingInvariantError, NotStableError, force_stability,
                        stable_throughput_bounds, verify_stability)

EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


class Precondition(Exception):
    pass


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def parse_range(text: str) -> List[int]:
    """``"3..60"`` -> [3, ..., 60]; ``"4,8,20"`` -> [4, 8, 20]; ``"5"`` -> [5]."""
    values: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError(f"empty range '{text}'")
    return values


def _int_list(text: str) -> List[int]:
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def cmd_bounds(args, out) -> None:
    cfg = load_scenario(args.config)
    tb = throughput_bounds(cfg.network)
    w = _writer(out)
    w.writerow(["eta_min", "eta_mean", "eta_max", "argmin_cut_min", "argmin_cut_mean", "argmin_cut_max"])
    w.writerow([fmt(tb.eta_min), fmt(tb.eta_mean), fmt(tb.eta_max),
                tb.argmin_cut_min.label(), tb.argmin_cut_mean.label(), tb.argmin_cut_max.label()])


def cmd_stability(args, out) -> None:
    cfg = load_scenario(args.config)
    net = cfg.network
    w = _writer(out)
    if not args.force:
        report = verify_stability(net, min_cut_mean(net))
        w.writerow(["stable", int(report.stable)])
        if report.violations:
            w.writerow(["ei", "ej", "ri_max", "rj_min"])
            for v in report.violations:
                w.writerow([v.bottleneck, v.competitor, fmt(v.r_i_max), fmt(v.r_j_min)])
        return
    plan, mincut = force_stability(net)
    forced = plan.apply(net)
    try:
        eta_max, eta_min = stable_throughput_bounds(forced, mincut)
    except NotStableError as exc:
        raise ForcingInvariantError(str(exc)) from exc
    Path(args.plan).write_text(json.dumps(plan.to_json(), indent=2, sort_keys=True) + "\n")
    w.writerow(["eta_min_stable", "eta_max_stable"])
    w.writerow([fmt(eta_min), fmt(eta_max)])


def sweep_rows(ks: Sequence[int], rtts: Sequence[int], rate: float, sigma: float = 1.0,
               skip_infeasible: bool = False) -> List[tuple]:
    """(k, rtt, eta_min, eta_mean, eta_max) at full precision, sorted by (rtt, k).

    Each row is k identical links whose erasure probability puts the mean
    aggregate rate at ``rate``.
    """
    rows = []
    for rtt in sorted(set(rtts)):
        for k in sorted(set(ks)):
            success = rate / k
            if not 0 < success <= 1:
                if skip_infeasible:
                    continue
                raise Precondition(f"k={k}: per-link success rate {success:g} is outside (0, 1]")
            tb = throughput_bounds(make_parallel_links_net(k, 1.0 - success, rtt, sigma))
            rows.append((k, rtt, tb.eta_min, tb.eta_mean, tb.eta_max))
    return rows


def cmd_sweep_links(args, out) -> None:
    rows = sweep_rows(args.k, args.rtt, args.rate, args.sigma, args.skip_infeasible)
    w = _writer(out)
    w.writerow(["k", "rtt", "eta_min", "eta_mean", "eta_max"])
    w.writerows([fmt(x) for x in row] for row in rows)


def cmd_mincut_count(args, out) -> None:
    w = _writer(out)
    w.writerow(["n", "count"])
    for n in args.n:
        if n < 1:
            raise Precondition("n must be >= 1")
        net = make_parallel_paths_net(n, args.p, args.rtt)
        count, _ = count_distinct_mincuts(net, parallel_paths_realizations(net))
        w.writerow([n, count])


def cmd_appendix(args, out) -> None:
    w = _writer(out)
    w.writerow(["case", "links", "p", "rtt", "eta_min", "eta_mean", "eta_max", "width", "reduction_vs_A"])
    width_a = None
    for case, k, p in (("A", 3, 0.2), ("B", 48, 0.95)):
        tb = throughput_bounds(make_parallel_links_net(k, p, 4))
        width = tb.eta_max - tb.eta_min
        width_a = width if width_a is None else width_a
        w.writerow([case, k, fmt(p), 4, fmt(tb.eta_min), fmt(tb.eta_mean), fmt(tb.eta_max),
                    fmt(width), fmt((width_a - width) / width_a)])


def resolve_target(cfg: ScenarioConfig, policy: str):
    """(eta, cut) for an eta policy; the cut's links are the ones simulated."""
    net = cfg.network
    if policy.startswith("stable_"):
        mincut = min_cut_mean(net)
        try:
            eta_max, eta_min = stable_throughput_bounds(net, mincut)
        except NotStableError as exc:
            raise Precondition(f"eta_policy '{policy}' needs a stable min-cut: {exc}. "
                               "Run 'varflow stability --force' and use the forced sigmas.") from exc
        return (eta_max if policy == "stable_max" else eta_min), mincut
    tb = throughput_bounds(net)
    return {"max": (tb.eta_max, tb.argmin_cut_max), "min": (tb.eta_min, tb.argmin_cut_min),
            "mean": (tb.eta_mean, tb.argmin_cut_mean)}[policy]


def cmd_simulate(args, out) -> None:
    cfg = load_scenario(args.config)
    if cfg.coding is None:
        raise ConfigError("simulate needs a 'coding' section")
    if cfg.seed is None:
        raise ConfigError("simulate needs a 'seed'")
    net = cfg.network
    horizon = cfg.horizon if cfg.horizon is not None else 10_000
    coding = cfg.coding
    if coding.n is not None:
        n = coding.n
        cut = min_cut_mean(net)
    else:
        eta, cut = resolve_target(cfg, coding.eta_policy)
        if eta <= 0:
            raise Precondition(f"eta_policy '{coding.eta_policy}' gives a nonpositive target {eta:g}")
        n = select_generation_size(eta, coding.l, coding.delta, max(e.rtt for e in net.links))
    links = [net.link(i) for i in sorted(cut.edges)]
    try:
        params = CodingParams(coding.N, coding.l, coding.delta, n)
        result = simulate(links, params, horizon, cfg.seed, record_events=bool(args.events))
    except ValueError as exc:
        raise Precondition(str(exc)) from exc
    if args.events:
        Path(args.events).write_text(result.events_csv())
    out.write(metrics_csv(result.metrics))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varflow",
                                     description="Min-cut throughput bounds for variable-rate erasure networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="eta_min/mean/max and their minimizing cuts")
    p.add_argument("config")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("stability", help="verify (or force) min-cut stability")
    p.add_argument("config")
    p.add_argument("--force", action="store_true", help="tune sigmas until the mean min-cut is stable")
    p.add_argument("--plan", default="sigma_plan.json", help="where --force writes the sigma plan")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("sweep-links", help="bounds of one cut versus its number of links")
    p.add_argument("--k", type=_int_list, default=parse_range("1..60"))
    p.add_argument("--rtt", type=_int_list, default=[4, 8, 20])
    p.add_argument("--rate", type=float, default=2.4, help="target aggregate rate")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--skip-infeasible", action="store_true",
                   help="drop k whose per-link success rate would exceed 1 instead of failing")
    p.set_defaults(func=cmd_sweep_links)

    p = sub.add_parser("mincut-count", help="distinct min-cuts of the n-path construction")
    p.add_argument("--n", type=_int_list, default=[4])
    p.add_argument("--p", type=float, default=0.2)
    p.add_argument("--rtt", type=int, default=4)
    p.set_defaults(func=cmd_mincut_count)

    p = sub.add_parser("simulate", help="run the coded transfer simulator")
    p.add_argument("config")
    p.add_argument("--events", help="write the event log CSV here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("appendix", help="the 3-link and 48-link worked examples")
    p.set_defaults(func=cmd_appendix)
    return parser


def main(argv: Sequence[str] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        args.func(args, out)
    except ConfigError as exc:
        print(f"varflow: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (Precondition, CutLimitExceeded, NotStableError) as exc:
        print(f"varflow: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ForcingInvariantError as exc:
        print(f"varflow: internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
