import numpy as np
import pytest

from varflow.generators import make_series_net, random_network


def seeded_networks(count, max_vertices, max_extra, base_seed, max_edges=None, min_vertices=2):
    """Deterministic stream of random connected networks."""
    for i in range(count):
        rng = np.random.default_rng(base_seed + i)
        nv = int(rng.integers(min_vertices, max_vertices + 1))
        extra = int(rng.integers(0, max_extra + 1))
        yield random_network(rng, nv, extra_edges=extra, max_edges=max_edges)


@pytest.fixture
def series():
    return make_series_net
