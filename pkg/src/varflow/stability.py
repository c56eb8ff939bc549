"""Min-cut stability: verification, stable bounds and the sigma-forcing pass.

A min-cut edge (the *bottleneck*) is stable against a *competitor* on the
same source-destination route when the bottleneck's largest possible rate
never exceeds the competitor's smallest one (or, for a competitor with a
lower mean, the mirror condition). Forcing shrinks per-link sigma
until that holds, leaving every mean rate untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .cuts import Cut, cut_weights, min_cut_mean, validate_cut
from .flow import FlowGraph
from .model import LinkSpec, Network, RateBounds, network_bounds

# Rates equal up to this tolerance count as equal: forced boundaries are
# reproduced from sigma and land within a few ulps of the target.
RATE_TOL = 1e-12


class NotStableError(ValueError):
    pass


class ForcingInvariantError(RuntimeError):
    """The forcing pass produced an infeasible assignment (should not happen)."""


@dataclass(frozen=True)
class Violation:
    """Overlapping pair. ``r_i_max`` is the upper end of the lower-mean link's
    interval and ``r_j_min`` the lower end of the higher-mean one; ``reversed``
    marks pairs where the competitor, not the bottleneck, has the lower mean."""
    bottleneck: str
    competitor: str
    r_i_max: float
    r_j_min: float
    reversed: bool = False


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    violations: Tuple[Violation, ...]
    mincut: Cut
    comparisons: int = 0


@dataclass(frozen=True)
class PathEdgeSet:
    bottleneck: str
    upstream: FrozenSet[str]
    downstream: FrozenSet[str]

    @property
    def competitors(self) -> FrozenSet[str]:
        return self.upstream | self.downstream


@dataclass
class SigmaPlan:
    sigma_by_link: Dict[str, float]
    boundary_by_bottleneck: Dict[str, float]
    updated_bounds: Dict[str, RateBounds] = field(default_factory=dict)
    lower_boundary_by_bottleneck: Dict[str, float] = field(default_factory=dict)

    def apply(self, net: Network) -> Network:
        return net.with_sigmas(self.sigma_by_link)

    def to_json(self) -> dict:
        out = {"sigma": dict(sorted(self.sigma_by_link.items())),
               "boundaries": dict(sorted(self.boundary_by_bottleneck.items()))}
        if self.lower_boundary_by_bottleneck:
            out["lower_boundaries"] = dict(sorted(self.lower_boundary_by_bottleneck.items()))
        return out


def _on_simple_path(links: List[LinkSpec], edge: LinkSpec, a: str, b: str) -> bool:
    # The edge x-y lies on a simple a..b path iff {a, b} and {x, y} can be
    # joined by two vertex-disjoint paths avoiding the edge itself.
    g = FlowGraph()
    vertices = {a, b}
    for e in links:
        vertices.update(e.endpoints)
    for v in vertices:
        g.add_edge(("in", v), ("out", v), 1.0)
    for e in links:
        if e.id == edge.id:
            continue
        g.add_edge(("out", e.u), ("in", e.v), 1.0)
        g.add_edge(("out", e.v), ("in", e.u), 1.0)
    g.add_edge("SRC", ("in", a), 1.0)
    g.add_edge("SRC", ("in", b), 1.0)
    g.add_edge(("out", edge.u), "SNK", 1.0)
    g.add_edge(("out", edge.v), "SNK", 1.0)
    return g.max_flow("SRC", "SNK", limit=2.0) > 1.5


def edges_on_simple_paths(links: Iterable[LinkSpec], a: str, b: str) -> FrozenSet[str]:
    """Ids of the links that lie on at least one simple path from a to b."""
    links = sorted(links, key=lambda e: e.id)
    if a == b:
        return frozenset()
    return frozenset(e.id for e in links if _on_simple_path(links, e, a, b))


def orient(net: Network, link_id: str, mincut: Cut) -> Tuple[str, str]:
    """(source-side endpoint, sink-side endpoint) of a crossing link."""
    link = net.link(link_id)
    if link.u in mincut.source_side and link.v not in mincut.source_side:
        return link.u, link.v
    if link.v in mincut.source_side and link.u not in mincut.source_side:
        return link.v, link.u
    raise ValueError(f"link {link_id} does not cross the cut")


def path_edges(net: Network, bottleneck: str, mincut: Cut) -> PathEdgeSet:
    """Links on routes s -> v_a (source side) and v_b -> d (sink side) around a bottleneck."""
    if bottleneck not in mincut.edges:
        raise ValueError(f"{bottleneck} is not in the cut")
    v_a, v_b = orient(net, bottleneck, mincut)
    side = mincut.source_side
    src_links = [e for e in net.links if e.u in side and e.v in side]
    dst_links = [e for e in net.links if e.u not in side and e.v not in side]
    return PathEdgeSet(bottleneck,
                       edges_on_simple_paths(src_links, net.source, v_a),
                       edges_on_simple_paths(dst_links, v_b, net.destination))


def _competitor_table(net: Network, mincut: Cut) -> Dict[str, PathEdgeSet]:
    return {b: path_edges(net, b, mincut) for b in sorted(mincut.edges)}


def _overlap(rb: RateBounds, rj: RateBounds):
    """Overlap between a bottleneck and a competitor interval, ordered by mean.

    Returns None when the pair is separated or tied on the mean, otherwise
    ``(lower_max, upper_min, reversed)``.
    """
    if abs(rj.r_mean - rb.r_mean) <= RATE_TOL:
        return None
    if rj.r_mean > rb.r_mean:
        lower, upper, flipped = rb, rj, False
    else:
        lower, upper, flipped = rj, rb, True
    if lower.r_max > upper.r_min + RATE_TOL:
        return lower.r_max, upper.r_min, flipped
    return None


def verify_stability(net: Network, mincut: Cut,
                     bounds: Optional[Mapping[str, RateBounds]] = None) -> StabilityReport:
    """Pairwise separation check between each cut link and its route links.

    A pair passes when the interval of the lower-mean link ends where the
    other begins, i.e. r_i_max <= r_j_min for a bottleneck below its
    competitor. Competitors tied with the bottleneck on the mean are skipped.
    """
    validate_cut(net, mincut)
    bounds = network_bounds(net) if bounds is None else bounds
    violations = []
    comparisons = 0
    for b, pe in _competitor_table(net, mincut).items():
        for j in sorted(pe.competitors):
            comparisons += 1
            hit = _overlap(bounds[b], bounds[j])
            if hit is not None:
                violations.append(Violation(b, j, hit[0], hit[1], hit[2]))
    return StabilityReport(not violations, tuple(violations), mincut, comparisons)


def stable_throughput_bounds(net: Network, mincut: Cut,
                             bounds: Optional[Mapping[str, RateBounds]] = None) -> Tuple[float, float]:
    """(eta_max_stable, eta_min_stable), both taken over the same stable cut."""
    bounds = network_bounds(net) if bounds is None else bounds
    report = verify_stability(net, mincut, bounds)
    if not report.stable:
        raise NotStableError(f"cut {mincut.label()} is not stable "
                             f"({len(report.violations)} violating pairs)")
    w = cut_weights(mincut, bounds, {e.id: e for e in net.links})
    return w.w_max, w.w_min


def needs_recompute(net: Network, mincut: Cut) -> bool:
    """True when some route link has a lower mean than the cut link it feeds."""
    validate_cut(net, mincut)
    bounds = network_bounds(net)
    for b, pe in _competitor_table(net, mincut).items():
        if any(bounds[j].r_mean < bounds[b].r_mean for j in pe.competitors):
            return True
    return False


def _sigma_for_half_width(link: LinkSpec, var: float, half_width: float) -> float:
    return half_width * link.rtt / math.sqrt(var)


def force_stability(net: Network) -> Tuple[SigmaPlan, Cut]:
    """Shrink sigmas so the mean min-cut passes :func:`verify_stability`.

    For each bottleneck, competitors with a higher mean whose r_min dips
    below the bottleneck's r_max share one boundary halfway between the
    bottleneck mean and the lowest such mean; the bottleneck's r_max and
    their r_min are pinned to it. Competitors with a lower mean are handled
    the mirror way. Competitors tied on the mean form a virtual bottleneck
    with the bottleneck (upper end from the narrowest, lower end from the
    widest interval) and are not mitigated against it. Every constraint is a
    cap on a link's half-width, so a link shared by several bottlenecks ends
    up with the smallest cap, which gives the highest r_min.
    """
    mincut = min_cut_mean(net)
    bounds = network_bounds(net)
    caps: Dict[str, float] = {}
    boundaries: Dict[str, float] = {}
    lower_boundaries: Dict[str, float] = {}

    def cap(link_id: str, width: float) -> None:
        if width < 0:
            raise ForcingInvariantError(f"negative half-width demanded for {link_id}")
        if bounds[link_id].half_width > width:
            caps[link_id] = min(caps.get(link_id, math.inf), width)

    for b, pe in _competitor_table(net, mincut).items():
        mean = bounds[b].r_mean
        others = sorted(pe.competitors)
        tied = [j for j in others if abs(bounds[j].r_mean - mean) <= RATE_TOL]
        group = [b] + tied
        top = min(bounds[k].r_max for k in group)
        bottom = min(bounds[k].r_min for k in group)
        above = [j for j in others if j not in tied and bounds[j].r_mean > mean
                 and bounds[j].r_min < top - RATE_TOL]
        below = [j for j in others if j not in tied and bounds[j].r_mean < mean
                 and bounds[j].r_max > bottom + RATE_TOL]
        if above:
            m_star = min(bounds[j].r_mean for j in above)
            boundary = (mean + m_star) / 2.0
            boundaries[b] = boundary
            for k in group:
                cap(k, boundary - mean)
            for j in above:
                cap(j, bounds[j].r_mean - boundary)
        if below:
            m_low = max(bounds[j].r_mean for j in below)
            boundary = (mean + m_low) / 2.0
            lower_boundaries[b] = boundary
            for k in group:
                cap(k, mean - boundary)
            for j in below:
                cap(j, boundary - bounds[j].r_mean)

    sigmas = {e.id: net.sigma_of(e) for e in net.links}
    for link_id, width in caps.items():
        sigmas[link_id] = _sigma_for_half_width(net.link(link_id), bounds[link_id].variance, width)
    forced = net.with_sigmas(sigmas)
    plan = SigmaPlan(sigmas, boundaries, network_bounds(forced), lower_boundaries)
    return plan, mincut
