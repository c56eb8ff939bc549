"""Cuts, cut-aggregate rate bounds and network throughput bounds.

Cuts are vertex partitions ``(S, V \\ S)`` with the source in ``S`` and the
destination outside it. Exhaustive enumeration is exponential in the number
of relay vertices, so it is capped; :func:`min_cut_mean` goes through
max-flow instead and has no cap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .flow import FlowGraph
from .model import LinkSpec, Network, RateBounds, mean_rates, network_bounds

DEFAULT_VERTEX_CAP = 20
TIE_TOL = 1e-12


class CutLimitExceeded(ValueError):
    """The network has too many vertices for exhaustive cut enumeration."""


class EmptyCutError(ValueError):
    pass


class InvalidCutError(ValueError):
    pass


@dataclass(frozen=True)
class Cut:
    source_side: FrozenSet[str]
    edges: FrozenSet[str]

    def key(self) -> Tuple[str, ...]:
        return tuple(sorted(self.edges))

    def label(self) -> str:
        return ";".join(self.key())


@dataclass(frozen=True)
class CutWeights:
    w_min: float
    w_mean: float
    w_max: float
    cut: Cut


@dataclass(frozen=True)
class ThroughputBounds:
    eta_min: float
    eta_mean: float
    eta_max: float
    argmin_cut_min: Cut
    argmin_cut_mean: Cut
    argmin_cut_max: Cut


@dataclass(frozen=True)
class Realization:
    rates: Mapping[str, float]


def crossing_edges(net: Network, source_side) -> FrozenSet[str]:
    side = set(source_side)
    return frozenset(e.id for e in net.links if (e.u in side) != (e.v in side))


def make_cut(net: Network, source_side) -> Cut:
    side = frozenset(source_side)
    if net.source not in side or net.destination in side:
        raise InvalidCutError("source side must contain the source and not the destination")
    return Cut(side, crossing_edges(net, side))


def validate_cut(net: Network, cut: Cut) -> None:
    if net.source not in cut.source_side or net.destination in cut.source_side:
        raise InvalidCutError("cut does not separate source from destination")
    if not set(cut.source_side) <= set(net.vertices):
        raise InvalidCutError("cut references unknown vertices")
    if crossing_edges(net, cut.source_side) != cut.edges:
        raise InvalidCutError("cut edge set does not match its partition")


def _relays(net: Network, cap: int) -> List[str]:
    if len(net.vertices) > cap:
        raise CutLimitExceeded(
            f"{len(net.vertices)} vertices exceeds the enumeration cap of {cap}; use min_cut_mean")
    return sorted(v for v in net.vertices if v not in (net.source, net.destination))


def enumerate_cuts(net: Network, cap: int = DEFAULT_VERTEX_CAP) -> Iterator[Cut]:
    """Every vertex-partition cut once, relay subsets in binary-counter order."""
    relays = _relays(net, cap)
    for mask in range(1 << len(relays)):
        side = {net.source}
        side.update(v for i, v in enumerate(relays) if mask >> i & 1)
        yield make_cut(net, side)


def cut_matrix(net: Network, cap: int = DEFAULT_VERTEX_CAP) -> Tuple[np.ndarray, np.ndarray, List[str]]:
    """Boolean incidence of enumerated cuts.

    Returns ``(crossing, in_source, link_ids)`` where ``crossing[c, j]`` says
    whether link ``link_ids[j]`` crosses cut ``c`` and ``in_source[c, i]``
    marks membership of ``net.vertices[i]`` on the source side. Row order
    matches :func:`enumerate_cuts`.
    """
    relays = _relays(net, cap)
    index = {v: i for i, v in enumerate(net.vertices)}
    masks = np.arange(1 << len(relays), dtype=np.int64)
    in_source = np.zeros((masks.size, len(net.vertices)), dtype=bool)
    in_source[:, index[net.source]] = True
    for bit, v in enumerate(relays):
        in_source[:, index[v]] = (masks >> bit) & 1 == 1
    link_ids = net.link_ids
    u = np.array([index[net.link(i).u] for i in link_ids], dtype=np.int64)
    v = np.array([index[net.link(i).v] for i in link_ids], dtype=np.int64)
    crossing = in_source[:, u] != in_source[:, v]
    return crossing, in_source, link_ids


def _cut_from_row(net: Network, in_source_row: np.ndarray) -> Cut:
    return make_cut(net, (v for v, flag in zip(net.vertices, in_source_row) if flag))


def cut_weights(cut: Cut, bounds: Mapping[str, RateBounds], links: Mapping[str, LinkSpec]) -> CutWeights:
    """Aggregate rate interval of a cut.

    The shared half-width is ``sqrt(sum(sigma_i**2 * var_i)) / sum(rtt_i)``:
    variances of independent binomials add, and the sum of RTTs counts the
    trials. With every sigma equal to 1 this is ``sqrt(sum var) / sum rtt``.
    """
    if not cut.edges:
        raise EmptyCutError("cut has no edges")
    ids = sorted(cut.edges)
    w_mean = sum(bounds[i].r_mean for i in ids)
    spread = sum(bounds[i].sigma_used ** 2 * bounds[i].variance for i in ids)
    trials = sum(links[i].rtt for i in ids)
    h = math.sqrt(spread) / trials
    return CutWeights(w_min=w_mean - h, w_mean=w_mean, w_max=w_mean + h, cut=cut)


def _first_min(values: np.ndarray) -> int:
    return int(np.flatnonzero(values <= values.min() + TIE_TOL)[0])


def throughput_bounds(net: Network, cap: int = DEFAULT_VERTEX_CAP,
                      bounds: Optional[Mapping[str, RateBounds]] = None) -> ThroughputBounds:
    """Minimum of each cut-weight bound over all cuts, with the minimizing cuts."""
    bounds = network_bounds(net) if bounds is None else bounds
    crossing, in_source, ids = cut_matrix(net, cap)
    m = crossing.astype(float)
    mean = m @ np.array([bounds[i].r_mean for i in ids])
    spread = m @ np.array([bounds[i].sigma_used ** 2 * bounds[i].variance for i in ids])
    trials = m @ np.array([net.link(i).rtt for i in ids], dtype=float)
    h = np.sqrt(spread) / trials
    picks = {}
    for name, values in (("min", mean - h), ("mean", mean), ("max", mean + h)):
        row = _first_min(values)
        picks[name] = (float(values[row]), _cut_from_row(net, in_source[row]))
    return ThroughputBounds(
        eta_min=picks["min"][0], eta_mean=picks["mean"][0], eta_max=picks["max"][0],
        argmin_cut_min=picks["min"][1], argmin_cut_mean=picks["mean"][1],
        argmin_cut_max=picks["max"][1])


def min_cut(net: Network, capacities: Mapping[str, float]) -> Tuple[float, Cut]:
    """Max-flow value and the residual-reachable source-side cut."""
    g = FlowGraph()
    for v in net.vertices:
        g.add_node(v)
    for link_id in net.link_ids:
        link = net.link(link_id)
        g.add_undirected(link.u, link.v, capacities[link_id])
    value = g.max_flow(net.source, net.destination)
    return value, make_cut(net, g.reachable(net.source))


def min_cut_mean(net: Network) -> Cut:
    return min_cut(net, mean_rates(net))[1]


def interval_width(total_rtt: int, p: float, sigma: float = 1.0) -> float:
    """Width of a cut's rate interval for identical links, as a function of total RTT."""
    if total_rtt < 1:
        raise ValueError("total_rtt must be >= 1")
    return 2.0 * sigma * math.sqrt(p * (1.0 - p)) / math.sqrt(total_rtt)


RealizationInput = Union[Sequence[Realization], np.ndarray]


def realization_matrix(net: Network, realizations: RealizationInput) -> np.ndarray:
    """Rates as a ``(k, |E|)`` array with columns in ``net.link_ids`` order."""
    if isinstance(realizations, np.ndarray):
        return np.atleast_2d(realizations).astype(float)
    ids = net.link_ids
    return np.array([[r.rates[i] for i in ids] for r in realizations], dtype=float)


def count_distinct_mincuts(net: Network, realizations: RealizationInput,
                           cap: int = DEFAULT_VERTEX_CAP) -> Tuple[int, List[FrozenSet[str]]]:
    """Number of distinct min-cut edge sets across realizations, by exhaustive enumeration."""
    rates = realization_matrix(net, realizations)
    crossing, _, ids = cut_matrix(net, cap)
    weights = rates @ crossing.T.astype(float)
    lowest = weights.min(axis=1, keepdims=True)
    rows = np.argmax(weights <= lowest + TIE_TOL, axis=1)
    sets: List[FrozenSet[str]] = []
    seen = set()
    for row in rows:
        edges = frozenset(i for i, flag in zip(ids, crossing[row]) if flag)
        if edges not in seen:
            seen.add(edges)
            sets.append(edges)
    return len(sets), sets


def check_realization(net: Network, realization: Realization,
                      bounds: Optional[Mapping[str, RateBounds]] = None, tol: float = 1e-12) -> bool:
    bounds = network_bounds(net) if bounds is None else bounds
    return all(bounds[i].r_min - tol <= realization.rates[i] <= bounds[i].r_max + tol
               for i in net.link_ids)


def corner_realizations(net: Network, bounds: Optional[Mapping[str, RateBounds]] = None) -> np.ndarray:
    """All ``3**|E|`` assignments of each link to its r_min, r_mean or r_max."""
    bounds = network_bounds(net) if bounds is None else bounds
    ids = net.link_ids
    levels = np.array([[bounds[i].r_min, bounds[i].r_mean, bounds[i].r_max] for i in ids])
    codes = np.indices((3,) * len(ids)).reshape(len(ids), -1).T
    return levels[np.arange(len(ids)), codes]


def parallel_paths_realizations(net: Network, bounds: Optional[Mapping[str, RateBounds]] = None
                                ) -> List[Realization]:
    """The 2**n rate assignments used to show exponentially many min-cuts.

    Links leaving the source sit at the midpoint of their interval; every
    subset of the links entering the destination sits at r_min and the rest
    at r_max.
    """
    bounds = network_bounds(net) if bounds is None else bounds
    ids = net.link_ids
    first = [i for i in ids if net.source in net.link(i).endpoints]
    last = sorted((i for i in ids if net.destination in net.link(i).endpoints),
                  key=lambda i: _relay_order(net.link(i).other(net.destination)))
    out = []
    for mask in range(1 << len(last)):
        rates: Dict[str, float] = {i: (bounds[i].r_min + bounds[i].r_max) / 2 for i in first}
        for bit, i in enumerate(last):
            rates[i] = bounds[i].r_min if mask >> bit & 1 else bounds[i].r_max
        out.append(Realization(rates))
    return out


def _relay_order(name: str):
    digits = "".join(ch for ch in name if ch.isdigit())
    return (int(digits) if digits else 0, name)
