"""Network data model and per-link rate-uncertainty intervals.

A link is a binary erasure channel with erasure probability ``p`` and a
round-trip time ``rtt`` measured in slots. Its mean rate is the Bernoulli
success probability ``1 - p`` and the number of successes inside one RTT is
binomial, so the finite-regime fluctuation around the mean has standard
deviation ``sqrt(rtt * p * (1 - p)) / rtt`` per slot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Tuple


class NetworkError(ValueError):
    """Raised for structurally invalid links or networks."""


@dataclass(frozen=True)
class LinkSpec:
    id: str
    u: str
    v: str
    p: float
    rtt: int
    sigma: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise NetworkError(f"link {self.id}: erasure probability {self.p} outside [0, 1]")
        if int(self.rtt) != self.rtt or self.rtt < 1:
            raise NetworkError(f"link {self.id}: rtt must be a positive integer, got {self.rtt}")
        if self.sigma is not None and self.sigma < 0:
            raise NetworkError(f"link {self.id}: sigma must be nonnegative")
        if self.u == self.v:
            raise NetworkError(f"link {self.id}: self-loop at {self.u}")

    @property
    def endpoints(self) -> Tuple[str, str]:
        return (self.u, self.v)

    def other(self, vertex: str) -> str:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise NetworkError(f"{vertex} is not an endpoint of link {self.id}")


@dataclass(frozen=True)
class RateBounds:
    r_mean: float
    r_min: float
    r_max: float
    variance: float
    alpha: float
    sigma_used: float

    @property
    def half_width(self) -> float:
        return self.r_max - self.r_mean


@dataclass(frozen=True)
class Network:
    vertices: Tuple[str, ...]
    links: Tuple[LinkSpec, ...]
    source: str
    destination: str
    default_sigma: float = 1.0
    _by_id: Dict[str, LinkSpec] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "links", tuple(self.links))
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise NetworkError("duplicate vertex ids")
        if self.source not in vset or self.destination not in vset:
            raise NetworkError("source and destination must be vertices")
        if self.source == self.destination:
            raise NetworkError("source and destination must differ")
        if self.default_sigma < 0:
            raise NetworkError("default_sigma must be nonnegative")
        by_id = {}
        for link in self.links:
            if link.id in by_id:
                raise NetworkError(f"duplicate link id {link.id}")
            if link.u not in vset or link.v not in vset:
                raise NetworkError(f"link {link.id} references an unknown vertex")
            by_id[link.id] = link
        object.__setattr__(self, "_by_id", by_id)
        if self.destination not in self.reachable_from(self.source):
            raise NetworkError("no path from source to destination")

    def link(self, link_id: str) -> LinkSpec:
        return self._by_id[link_id]

    @property
    def link_ids(self) -> List[str]:
        return sorted(self._by_id)

    def sigma_of(self, link: LinkSpec) -> float:
        return self.default_sigma if link.sigma is None else link.sigma

    def adjacency(self) -> Dict[str, List[LinkSpec]]:
        """Incident links per vertex, ordered by link id."""
        adj: Dict[str, List[LinkSpec]] = {v: [] for v in self.vertices}
        for link in sorted(self.links, key=lambda e: e.id):
            adj[link.u].append(link)
            adj[link.v].append(link)
        return adj

    def reachable_from(self, start: str, allowed: Optional[Iterable[str]] = None) -> set:
        allowed = set(self.vertices) if allowed is None else set(allowed)
        adj: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for link in self.links:
            adj[link.u].append(link.v)
            adj[link.v].append(link.u)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def with_sigmas(self, sigmas: Mapping[str, float]) -> "Network":
        """Copy of the network with per-link sigma overrides applied."""
        links = [replace(e, sigma=float(sigmas[e.id])) if e.id in sigmas else e for e in self.links]
        return replace(self, links=tuple(links))

    def with_links(self, links: Iterable[LinkSpec]) -> "Network":
        return replace(self, links=tuple(links))


def link_variance(link: LinkSpec) -> float:
    """Binomial variance of the successes inside one RTT: rtt * p * (1 - p)."""
    return link.rtt * link.p * (1.0 - link.p)


def alpha_factors(net: Network) -> Dict[str, float]:
    longest = max(e.rtt for e in net.links)
    return {e.id: e.rtt / longest for e in net.links}


def rate_bounds(link: LinkSpec, alpha: float, sigma: float) -> RateBounds:
    """Rate interval of one link.

    The mean is RTT-normalized by ``alpha``; the half-width is not.
    Values are left unclamped, so ``r_min`` may go negative.
    """
    if not 0.0 < alpha <= 1.0:
        raise NetworkError(f"alpha must lie in (0, 1], got {alpha}")
    if sigma < 0:
        raise NetworkError("sigma must be nonnegative")
    var = link_variance(link)
    r_mean = (1.0 - link.p) / alpha
    h = sigma * math.sqrt(var) / link.rtt
    return RateBounds(r_mean=r_mean, r_min=r_mean - h, r_max=r_mean + h,
                      variance=var, alpha=alpha, sigma_used=sigma)


def network_bounds(net: Network) -> Dict[str, RateBounds]:
    """RateBounds for every link, using each link's own sigma."""
    alphas = alpha_factors(net)
    return {e.id: rate_bounds(e, alphas[e.id], net.sigma_of(e)) for e in net.links}


def mean_rates(net: Network) -> Dict[str, float]:
    alphas = alpha_factors(net)
    return {e.id: (1.0 - e.p) / alphas[e.id] for e in net.links}
