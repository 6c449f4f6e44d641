import itertools
import math

import numpy as np
import pytest

from online_spanners.covering import ConstraintRow
from online_spanners.graph import Demand, DirectedGraph, shortest_distances


def random_graph(rng, n, density=0.4, max_len=3, zero_len=False):
    low = 0 if zero_len else 1
    edges = [(u, v, int(rng.integers(low, max_len + 1)))
             for u in range(n) for v in range(n) if u != v and rng.random() < density]
    return DirectedGraph(n, edges)


def random_feasible_demands(rng, g, k, slack=2):
    pairs = []
    for s in range(g.n):
        dist, _ = shortest_distances(g, s)
        pairs += [(s, t, dist[t]) for t in range(g.n) if t != s and dist[t] < math.inf]
    if not pairs:
        return []
    out = []
    for i in rng.integers(0, len(pairs), size=k):
        s, t, base = pairs[int(i)]
        out.append(Demand(s, t, int(base) + int(rng.integers(0, slack + 1))))
    return out


def random_covering(rng, n, rows):
    c = rng.uniform(0.5, 3.0, size=n)
    out = []
    for _ in range(rows):
        a = np.where(rng.random(n) < 0.5, rng.uniform(0.1, 2.0, size=n), 0.0)
        if not a.any():
            a[rng.integers(n)] = rng.uniform(0.1, 2.0)
        out.append(ConstraintRow.from_dense(a))
    return c, out


def simple_paths(g, s, t, d):
    """Independent path enumerator: brute force over vertex permutations."""
    found = []
    others = [v for v in range(g.n) if v not in (s, t)]
    for r in range(len(others) + 1):
        for mid in itertools.permutations(others, r):
            seq = (s, *mid, t)
            ids = [g.edge_id(u, v) for u, v in zip(seq, seq[1:])]
            if None in ids:
                continue
            if g.path_length(ids) <= d:
                found.append(tuple(ids))
    return found


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def marginal_instance():
    """Six vertices: a unit-length path plus long shortcuts that no shortest-path tree uses."""
    edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1),
             (0, 2, 3), (1, 3, 3), (2, 4, 3), (3, 5, 3), (0, 3, 4), (5, 0, 1)]
    demands = [Demand(0, 2, 3), Demand(1, 3, 3), Demand(2, 4, 3), Demand(3, 5, 3),
               Demand(0, 3, 4), Demand(0, 2, 3)]
    return DirectedGraph(6, edges), demands
