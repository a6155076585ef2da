import itertools

import numpy as np
import pytest

from qnutility import NetworkSpec


def random_network(rng, M, p_edge=0.5, q_range=(0.5, 1.0), eps=0.0, connected=True):
    """Random graph on M nodes; a random spanning tree is added when ``connected``."""
    rates = {}
    if connected:
        order = rng.permutation(M)
        for i in range(1, M):
            a, b = int(order[i]), int(order[rng.integers(0, i)])
            rates[(min(a, b), max(a, b))] = float(rng.uniform(0.2, 2.0))
    for a, b in itertools.combinations(range(M), 2):
        if (a, b) not in rates and rng.random() < p_edge:
            rates[(a, b)] = float(rng.uniform(0.2, 2.0))
    q = tuple(float(x) for x in rng.uniform(*q_range, size=M))
    return NetworkSpec(q, rates, epsilon_eff=eps)


def random_tree(rng, M, q=0.0, eps=0.0):
    order = rng.permutation(M)
    rates = {}
    for i in range(1, M):
        a, b = int(order[i]), int(order[rng.integers(0, i)])
        rates[(min(a, b), max(a, b))] = float(rng.uniform(0.2, 2.0))
    return NetworkSpec((q,) * M, rates, epsilon_eff=eps)


@pytest.fixture
def rng():
    return np.random.default_rng(20221014)
