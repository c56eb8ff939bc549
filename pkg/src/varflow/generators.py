"""Network constructors used by the CLI scenarios and the test suites."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .model import LinkSpec, Network


def make_parallel_paths_net(n: int, p: float, rtt: int, sigma: float = 1.0) -> Network:
    """``n`` two-hop paths s -> v_i -> d with identical links (2n links)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    relays = [f"v{i}" for i in range(1, n + 1)]
    links = []
    for v in relays:
        links.append(LinkSpec(f"s-{v}", "s", v, p, rtt))
        links.append(LinkSpec(f"{v}-d", v, "d", p, rtt))
    return Network(("s", *relays, "d"), links, "s", "d", sigma)


def make_parallel_links_net(k: int, p: float, rtt: int, sigma: float = 1.0) -> Network:
    """``k`` identical links directly between s and d, i.e. one cut of size k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    width = len(str(k))
    links = [LinkSpec(f"e{i:0{width}d}", "s", "d", p, rtt) for i in range(1, k + 1)]
    return Network(("s", "d"), links, "s", "d", sigma)


def make_series_net(ps: Sequence[float], rtts: Sequence[int], sigma: float = 1.0) -> Network:
    """A single path s - a1 - ... - d with links e1, e2, ... in order."""
    hops = len(ps)
    names = ["s"] + [f"a{i}" for i in range(1, hops)] + ["d"]
    links = [LinkSpec(f"e{i + 1}", names[i], names[i + 1], ps[i], rtts[i]) for i in range(hops)]
    return Network(tuple(names), links, "s", "d", sigma)


def random_network(rng: np.random.Generator, n_vertices: int, extra_edges: int = 0,
                   p_range=(0.05, 0.95), rtts: Sequence[int] = (1, 4, 8),
                   sigma: float = 1.0, max_edges: Optional[int] = None) -> Network:
    """Connected random network: a random spanning tree plus distinct extra edges."""
    if n_vertices < 2:
        raise ValueError("need at least two vertices")
    names = ["s", "d"] + [f"v{i}" for i in range(1, n_vertices - 1)]
    order = list(rng.permutation(n_vertices))
    pairs = []
    for pos in range(1, n_vertices):
        a = names[order[pos]]
        b = names[order[int(rng.integers(pos))]]
        pairs.append((a, b))
    present = {frozenset(pr) for pr in pairs}
    candidates = [(names[i], names[j]) for i in range(n_vertices) for j in range(i + 1, n_vertices)
                  if frozenset((names[i], names[j])) not in present]
    budget = extra_edges if max_edges is None else min(extra_edges, max_edges - len(pairs))
    if budget > 0 and candidates:
        picks = rng.choice(len(candidates), size=min(budget, len(candidates)), replace=False)
        pairs += [candidates[int(i)] for i in sorted(picks)]
    links = []
    for idx, (a, b) in enumerate(pairs, start=1):
        p = float(rng.uniform(*p_range))
        rtt = int(rng.choice(rtts))
        links.append(LinkSpec(f"e{idx:02d}", a, b, p, rtt))
    return Network(tuple(names), links, "s", "d", sigma)
