"""Seeded instance generators for experiments and tests.

Every generator returns ``(graph, demands)`` where each demand is feasible in
the graph. Output depends only on the arguments (PCG64 stream per seed).
"""

from __future__ import annotations

import math

import numpy as np

from .graph import UNBOUNDED, DirectedGraph, Demand, shortest_distances

KINDS = ("random", "layered", "allserver", "quasimetric")


def _demands(g: DirectedGraph, k: int, rng, slack: int = 2, uniform_d=None):
    reach = []
    dist = [shortest_distances(g, s)[0] for s in range(g.n)]
    for s in range(g.n):
        for t in range(g.n):
            if s != t and dist[s][t] < math.inf:
                reach.append((s, t))
    if not reach:
        return []
    out = []
    for idx in rng.integers(0, len(reach), size=k):
        s, t = reach[int(idx)]
        if uniform_d is not None:
            d = max(uniform_d, dist[s][t])
        else:
            d = int(dist[s][t]) + int(rng.integers(0, slack + 1))
        out.append(Demand(s, t, d))
    return out


def random_instance(n, density, seed, k=5, max_len=3, slack=2):
    rng = np.random.default_rng(seed)
    edges = [(u, v, int(rng.integers(1, max_len + 1)))
             for u in range(n) for v in range(n) if u != v and rng.random() < density]
    g = DirectedGraph(n, edges)
    return g, _demands(g, k, rng, slack)


def layered_instance(n, density, seed, k=5, layers=None):
    """Unit-length DAG whose vertices are split into consecutive layers."""
    rng = np.random.default_rng(seed)
    layers = layers or max(2, round(math.sqrt(n)))
    layer_of = np.sort(rng.integers(0, layers, size=n))
    layer_of[0], layer_of[-1] = 0, layers - 1
    edges = []
    for u in range(n):
        for v in range(n):
            gap = layer_of[v] - layer_of[u]
            if 1 <= gap <= 2 and rng.random() < density:
                edges.append((u, v, 1))
    g = DirectedGraph(n, edges)
    return g, _demands(g, k, rng, slack=1)


def allserver_instance(n, density, seed, k=5, d=2):
    """Unit lengths; every demanded pair also has its direct edge."""
    rng = np.random.default_rng(seed)
    edge_set = {(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < density}
    pairs = []
    for _ in range(k):
        s, t = (int(v) for v in rng.choice(n, size=2, replace=False))
        pairs.append((s, t))
        edge_set.add((s, t))
    g = DirectedGraph(n, sorted((u, v, 1) for u, v in edge_set))
    return g, [Demand(s, t, d) for s, t in pairs]


def quasimetric_instance(n, density, seed, k=5, max_len=3, slack=2):
    """Transitive closure of a random digraph with shortest-path lengths."""
    rng = np.random.default_rng(seed)
    base = DirectedGraph(n, [(u, v, int(rng.integers(1, max_len + 1)))
                             for u in range(n) for v in range(n) if u != v and rng.random() < density])
    edges = []
    for u in range(n):
        dist, _ = shortest_distances(base, u)
        edges += [(u, v, int(dist[v])) for v in range(n) if v != u and dist[v] < math.inf]
    g = DirectedGraph(n, edges)
    return g, _demands(g, k, rng, slack)


def is_quasimetric(g: DirectedGraph) -> bool:
    """Every two-edge walk u->v->w is shortcut by an edge u->w no longer than it."""
    for u, v, l1 in g.edges:
        for k in g.out_edges[v]:
            _, w, l2 = g.edges[k]
            if w == u:
                continue
            e = g.edge_id(u, w)
            if e is None or g.edges[e][2] > l1 + l2:
                return False
    return True


def generate(kind: str, n: int, density: float, seed: int, k: int = 5, steiner: bool = False):
    if n < 2:
        raise ValueError("need at least two vertices")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    if k < 0:
        raise ValueError("demand count must be non-negative")
    makers = {
        "random": random_instance,
        "layered": layered_instance,
        "allserver": allserver_instance,
        "quasimetric": quasimetric_instance,
    }
    if kind not in makers:
        raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")
    g, demands = makers[kind](n, density, seed, k=k)
    if steiner:
        demands = [Demand(d.s, d.t, UNBOUNDED) for d in demands]
    return g, demands
