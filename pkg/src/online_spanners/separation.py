"""Separation oracle that turns the path-based spanner LP into covering rows.

For a demand ``(s, t, d)`` and edge capacities ``x`` the oracle decides whether
one unit of ``s -> t`` flow fits on paths of length at most ``d``. By duality
this is ``min { x.z : z >= 0, z(P) >= 1 for every such path P } >= 1``. The
minimum is found by cutting planes: a small dense LP over a working set of
paths, re-checked by an exact length-bounded minimum-weight path search.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import simplex
from .covering import ConstraintRow, CoveringState
from .graph import INF, DirectedGraph, Demand, InfeasibleDemand, shortest_distances, within

GOOD_TOL = 1e-7
MAX_PATHS = 10_000


@dataclass(frozen=True)
class SeparatingConstraint:
    z: np.ndarray
    round: int = 0

    def row(self) -> ConstraintRow:
        return ConstraintRow.from_dense(self.z)


@dataclass
class Separation:
    good: bool
    value: float
    constraint: Optional[SeparatingConstraint] = None
    iterations: int = 0


def _strip_cycles(g: DirectedGraph, s: int, walk: list[int]) -> list[int]:
    path: list[int] = []
    position = {s: 0}
    for k in walk:
        v = g.edges[k][1]
        if v in position:
            cut = position[v]
            for dropped in path[cut:]:
                position.pop(g.edges[dropped][1], None)
            path = path[:cut]
            position[v] = cut
        else:
            path.append(k)
            position[v] = len(path)
    return path


def _dijkstra_path(g: DirectedGraph, z: np.ndarray, s: int, t: int):
    dist = [INF] * g.n
    parent: list[Optional[int]] = [None] * g.n
    dist[s] = 0.0
    heap = [(0.0, s)]
    done = [False] * g.n
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in g.out_edges[u]:
            v = g.edges[k][1]
            nd = du + z[k]
            if nd < dist[v]:
                dist[v], parent[v] = nd, k
                heapq.heappush(heap, (nd, v))
    if dist[t] == INF:
        return None
    walk = []
    v = t
    while v != s:
        k = parent[v]
        walk.append(k)
        v = g.edges[k][0]
    return walk[::-1]


def restricted_min_weight_path(g: DirectedGraph, z, dem: Demand):
    """Exact minimum ``sum(z)`` over ``s -> t`` paths of length at most ``d``.

    Returns ``(weight, path)`` with ``path`` a list of edge ids, or ``None`` if
    no path meets the length bound. Dynamic program over (vertex, length used)
    for finite ``d``; plain Dijkstra on ``z`` when the bound cannot bind.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (g.m,) or np.any(z < 0):
        raise ValueError("z must be a non-negative vector with one entry per edge")
    s, t = g.check_vertex(dem.s), g.check_vertex(dem.t)
    ds, _ = shortest_distances(g, s)
    if not within(ds[t], dem.d):
        return None
    if dem.d >= (g.n - 1) * g.max_length:
        walk = _dijkstra_path(g, z, s, t)
    else:
        walk = _layered_path(g, z, s, t, int(dem.d), ds)
    path = _strip_cycles(g, s, walk)
    return float(sum(z[k] for k in path)), path


def _layered_path(g, z, s, t, d, ds):
    dt, _ = shortest_distances(g, t, reverse=True)
    W = np.full((d + 1, g.n), np.inf)
    parent: dict = {}
    W[0, s] = 0.0
    zero_out = [[k for k in g.out_edges[u] if g.edges[k][2] == 0] for u in range(g.n)]
    for l in range(d + 1):
        row = W[l]
        if l:
            for k, (u, v, length) in enumerate(g.edges):
                if 0 < length <= l and ds[v] <= l and l + dt[v] <= d:
                    cand = W[l - length, u] + z[k]
                    if cand < row[v]:
                        row[v] = cand
                        parent[(l, v)] = (k, l - length, u)
        heap = [(row[v], v) for v in range(g.n) if row[v] < np.inf]
        heapq.heapify(heap)
        while heap:
            w, u = heapq.heappop(heap)
            if w > row[u]:
                continue
            for k in zero_out[u]:
                v = g.edges[k][1]
                if w + z[k] < row[v]:
                    row[v] = w + z[k]
                    parent[(l, v)] = (k, l, u)
                    heapq.heappush(heap, (row[v], v))
    l = int(np.argmin(W[:, t]))
    walk = []
    state = (l, t)
    while state != (0, s):
        k, pl, pu = parent[state]
        walk.append(k)
        state = (pl, pu)
    return walk[::-1]


def _working_lp(x: np.ndarray, paths: list[tuple]):
    """min x.z over edges used by ``paths`` subject to z(P) >= 1 for each path."""
    cols = sorted({k for p in paths for k in p})
    pos = {k: i for i, k in enumerate(cols)}
    A = np.zeros((len(paths), len(cols)))
    for r, p in enumerate(paths):
        for k in p:
            A[r, pos[k]] = 1.0
    res = simplex.solve(simplex.DenseLP(x[cols], A, np.ones(len(paths)), [">="] * len(paths)))
    if not res.optimal:  # pragma: no cover - the LP is always feasible and bounded
        raise simplex.SimplexError(f"working LP ended as {res.status}")
    z = np.zeros(x.size)
    z[cols] = res.x
    return z


def separate(g: DirectedGraph, x, dem: Demand, tol: float = GOOD_TOL,
             paths: Optional[list] = None, round_tag: int = 0,
             max_paths: int = MAX_PATHS) -> Separation:
    """Decide whether capacities ``x`` carry one unit of feasible flow for ``dem``.

    ``paths`` is an optional working set of edge-id tuples; it is extended in
    place so later calls for the same demand can start warm.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (g.m,) or np.any(x < 0):
        raise ValueError("x must be a non-negative vector with one entry per edge")
    if paths is None:
        paths = []
    seen = set(paths)
    iterations = 0
    z = np.zeros(g.m)
    if paths:
        z = _working_lp(x, paths)
    while True:
        found = restricted_min_weight_path(g, z, dem)
        if found is None:
            raise InfeasibleDemand(f"no path of length <= {dem.d} from {dem.s} to {dem.t}")
        weight, path = found
        if weight >= 1 - tol:
            break
        key = tuple(path)
        if key in seen:  # pragma: no cover - working LP keeps every listed path at weight >= 1
            raise simplex.SimplexError("cutting plane repeated a path")
        if len(paths) >= max_paths:
            raise RuntimeError(f"working path set exceeded {max_paths} paths")
        seen.add(key)
        paths.append(key)
        z = _working_lp(x, paths)
        iterations += 1
    if weight < 1:
        z = z / weight
    value = float(x @ z)
    if value >= 1 - tol:
        return Separation(True, value, iterations=iterations)
    return Separation(False, value, SeparatingConstraint(z, round_tag), iterations)


def solve_round(cov: CoveringState, g: DirectedGraph, dem: Demand, round_tag: int = 0,
                paths: Optional[list] = None) -> np.ndarray:
    """Raise the covering state's ``x`` until ``dem`` is fractionally served."""
    if cov.n != g.m:
        raise ValueError("covering state must have one variable per edge")
    if paths is None:
        paths = []

    def oracle(x):
        res = separate(g, x, dem, paths=paths, round_tag=round_tag)
        return None if res.good else res.constraint.row()

    cov.process_with_oracle(oracle)
    return cov.solution()
