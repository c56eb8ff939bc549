"""Throughput bounds, min-cut stability and coded-transfer simulation for
networks of variable-rate erasure links."""
from .cuts import (Cut, CutWeights, Realization, ThroughputBounds, count_distinct_mincuts, cut_weights,
                   enumerate_cuts, interval_width, min_cut_mean, throughput_bounds)
from .generators import make_parallel_links_net, make_parallel_paths_net
from .model import LinkSpec, Network, RateBounds, alpha_factors, link_variance, rate_bounds
from .rlnc import decode_step, encode, select_generation_size, split_generations
from .sim import CodingParams, SimMetrics, simulate
from .stability import (SigmaPlan, StabilityReport, force_stability, needs_recompute, path_edges,
                        stable_throughput_bounds, verify_stability)

__all__ = [
    "Cut", "CutWeights", "Realization", "ThroughputBounds", "count_distinct_mincuts", "cut_weights",
    "enumerate_cuts", "interval_width", "min_cut_mean", "throughput_bounds",
    "make_parallel_links_net", "make_parallel_paths_net",
    "LinkSpec", "Network", "RateBounds", "alpha_factors", "link_variance", "rate_bounds",
    "decode_step", "encode", "select_generation_size", "split_generations",
    "CodingParams", "SimMetrics", "simulate",
    "SigmaPlan", "StabilityReport", "force_stability", "needs_recompute", "path_edges",
    "stable_throughput_bounds", "verify_stability",
]
